#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kghop-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "tiny.tsv") << "A\tr1\tB\nB\tr2\tC\nA\tr1\tC\nC\tr3\tA\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const auto err_path = dir_ / "stderr.txt";
    const std::string cmd = std::string(KGHOP_CLI_PATH) + " " + args + " 2>" + err_path.string();
    CliRun r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int raw = ::pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream e(err_path);
    r.err.assign(std::istreambuf_iterator<char>(e), std::istreambuf_iterator<char>());
    return r;
  }

  std::string path(const char* name) const { return (dir_ / name).string(); }

  void build_tiny() const {
    ASSERT_EQ(run("build --triples " + path("tiny.tsv") + " --out " + path("g")).status, 0);
  }

  fs::path dir_;
};

TEST_F(CliTest, QueryPrintsHopsAndPaths) {
  build_tiny();
  const auto r = run("query --graph " + path("g") + " --entities A --hops 2 --semantics exact --paths");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"hop\":1"), std::string::npos);
  EXPECT_NE(r.out.find("\"entities\":[\"B\",\"C\"]"), std::string::npos);
  EXPECT_NE(r.out.find("\"entities\":[\"A\",\"C\"]"), std::string::npos);
  EXPECT_NE(r.out.find("\"paths\":2"), std::string::npos);
}

TEST_F(CliTest, UnknownEntitiesAreReportedButNotFatal) {
  build_tiny();
  const auto r = run("query --graph " + path("g") + " --entities A,ZZZ --hops 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.err.find("unknown entity: ZZZ"), std::string::npos);
  EXPECT_NE(r.out.find("\"entities\":[\"B\",\"C\"]"), std::string::npos);
}

TEST_F(CliTest, PartitionedQueryAndVerify) {
  build_tiny();
  ASSERT_EQ(run("partition --graph " + path("g") + " --m 2 --out " + path("p")).status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "p" / "manifest.json"));
  const auto q = run("query --partitioned " + path("p") + " --entities A --hops 2 --semantics exact");
  ASSERT_EQ(q.status, 0) << q.err;
  EXPECT_NE(q.out.find("\"entities\":[\"A\",\"C\"]"), std::string::npos);

  const auto v = run("verify --graph " + path("g") + " --partitioned " + path("p") + " --max-hops 3");
  EXPECT_EQ(v.status, 0) << v.err;
  EXPECT_NE(v.out.find("jaccard=1.0"), std::string::npos);
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, BenchWritesCsv) {
  build_tiny();
  const auto r = run("bench --graph " + path("g") + " --depths 1,2 --timeouts 1000,1000 --queries 5 --max-seeds 2");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("factor,value,qt_ms,tr_pct,jaccard,loads,evictions\n", 0), 0u);
  EXPECT_NE(r.out.find("hops,2,"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  build_tiny();
  EXPECT_EQ(run("partition --graph " + path("g") + " --m 0 --out " + path("p")).status, 1);
  EXPECT_EQ(run("query --graph " + path("g") + " --partitioned x --entities A --hops 1").status, 1);
  EXPECT_EQ(run("query --graph " + path("g") + " --entities A --hops 0").status, 1);
  EXPECT_EQ(run("").status, 1);
}

TEST_F(CliTest, BadInputsFailWithDiagnostics) {
  std::ofstream(dir_ / "bad.tsv") << "A\tr1\tB\nA\tr1\n";
  const auto r = run("build --triples " + path("bad.tsv") + " --out " + path("g"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);

  const auto missing = run("query --graph " + path("nope") + " --entities A --hops 1");
  EXPECT_EQ(missing.status, 2);
}

}  // namespace
