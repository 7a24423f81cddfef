#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treepath/cli.hpp"
#include "treepath/generators.hpp"

using namespace treepath;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("treepath_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Nca) {
  auto t = file("t", "p tree 4 3\na 1 2\na 1 3\na 3 4\n");
  auto q = file("q", "q 2 4\nq 4 3\nq 4 4\n");
  for (const char* algo : {"linear", "ahu"}) {
    auto r = run({"nca", t, q, "--algo", algo, "--oracle"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "2 4 1\n4 3 3\n4 4 4\n");
  }
}

TEST_F(Cli, MstVerifyAndBuild) {
  auto g = file("g", "p graph 3 3\na 1 2 1\na 2 3 2\na 1 3 3\n");
  auto good = file("good", "p tree 3 2\na 1 2 1\na 2 3 2\n");
  auto bad = file("bad", "p tree 3 2\na 1 2 1\na 1 3 3\n");
  EXPECT_EQ(run({"mst", "verify", g, good, "--oracle"}).out, "YES\n");
  auto r = run({"mst", "verify", g, bad});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "NO\ne 2 3\n");
  auto b = run({"mst", "build", g, "--seed", "5", "--oracle"});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.out, "a 1 2 1\na 2 3 2\n");
}

TEST_F(Cli, IntervalsAndDominators) {
  auto f = file("f", "p flow 4 5\nr 1\na 1 2\na 2 3\na 3 4\na 4 3\na 4 2\n");
  auto r = run({"intervals", f, "--oracle"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1 0\n2 0\n3 2\n4 3\n");
  EXPECT_EQ(run({"intervals", f, "--compressed", "--oracle", "--g-override", "1"}).code, 0);
  for (const char* algo : {"linear", "lt", "naive"}) {
    auto d = run({"dominators", f, "--algo", algo, "--oracle"});
    EXPECT_EQ(d.code, 0) << d.err;
    EXPECT_EQ(d.out, "1 0\n2 1\n3 2\n4 3\n");
  }
}

TEST_F(Cli, Kruskal) {
  auto t = file("t", "p tree 4 3\na 1 2\na 1 3\na 1 4\n");
  const std::string want = "5 1 2 1\n6 5 3 2\n7 6 4 3\n";
  EXPECT_EQ(run({"kruskal", t, "--oracle"}).out, want);
  EXPECT_EQ(run({"kruskal", t, "--linear", "--oracle"}).out, want);
  auto c = run({"kruskal", t, "--groups", "1,2", "--oracle"});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, "5 1 1 2\n6 2 5 3 4\n");
}

TEST_F(Cli, StatsGoToStderr) {
  auto f = file("f", "p flow 3 3\nr 1\na 1 2\na 2 3\na 3 2\n");
  auto r = run({"dominators", f, "--stats"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.err.substr(0, 9), "linkeval,");
  EXPECT_EQ(r.out, "1 0\n2 1\n3 2\n");
}

TEST_F(Cli, Bench) {
  auto r = run({"bench", "--suite", "nca", "--sizes", "1k,2k", "--oracle"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "suite,n,m,counter,normalized");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("nca,", 0), 0u);
  }
  EXPECT_EQ(rows, 6u);
}

TEST_F(Cli, ExitCodes) {
  auto t = file("t", "p tree 3 2\na 1 2\na 1 7\n");
  auto f = file("f", "p flow 2 1\nr 1\na 1 2\n");
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nca", t}).code, 2);
  EXPECT_EQ(run({"bench", "--suite", "nope", "--sizes", "1k"}).code, 2);
  EXPECT_EQ(run({"kruskal", t, "--linear", "--groups", "1,1"}).code, 2);
  auto bad = run({"kruskal", t});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"kruskal", f}).code, 1);
  EXPECT_EQ(run({"intervals", (dir_ / "missing").string()}).code, 1);
}

TEST_F(Cli, Deterministic) {
  Digraph g = gen::random_graph(300, 1200, 4);
  auto gp = file("g", serialize(g));
  auto first = run({"mst", "build", gp, "--seed", "9"});
  auto second = run({"mst", "build", gp, "--seed", "9"});
  EXPECT_EQ(first.out, second.out);
  auto b1 = run({"bench", "--suite", "all", "--sizes", "1k"});
  auto b2 = run({"bench", "--suite", "all", "--sizes", "1k"});
  EXPECT_EQ(b1.out, b2.out);
}

TEST_F(Cli, Binary) {
  auto t = file("t", "p tree 2 1\na 1 2\n");
  auto q = file("q", "q 1 2\n");
  auto out = (dir_ / "out").string();
  std::string cmd = std::string(TREEPATH_CLI) + " nca " + t + " " + q + " > " + out;
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "1 2 1\n");
  std::string usage = std::string(TREEPATH_CLI) + " frobnicate > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(usage.c_str())), 2);
}
