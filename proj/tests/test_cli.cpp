#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "coxmin/io.hpp"

using namespace coxmin;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run coxmin_run(const std::string& args) {
  const char* bin = std::getenv("COXMIN_BIN");
  if (!bin) return {-1, ""};
  const std::string cmd = std::string("'") + bin + "' " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int st = ::pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!std::getenv("COXMIN_BIN")) GTEST_SKIP() << "COXMIN_BIN not set";
    ::unsetenv("COXMIN_CACHE");
  }
};

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_F(Cli, ClassesOfA3) {
  const auto r = coxmin_run("classes --type A3 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 6u);
  const auto j = coxmin_run("classes --type A3");
  ASSERT_EQ(j.code, 0);
  const auto doc = Json::parse(j.out);
  EXPECT_EQ(doc["schema"], schema::kClasses);
  EXPECT_EQ(doc["classes"].size(), 5u);
}

TEST_F(Cli, TwistedClassesOfA2) {
  const auto r = coxmin_run("classes --type A2 --twist flip");
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  std::size_t total = 0;
  for (const auto& c : doc["classes"]) total += c["size"].get<std::size_t>();
  EXPECT_EQ(total, 6u);
  // the flip is conjugation by w0, so twisted classes match ordinary ones
  EXPECT_EQ(doc["classes"].size(), 3u);
  EXPECT_EQ(doc["twist"], "2,1");
}

TEST_F(Cli, AutoCoversEveryTwist) {
  const auto r = coxmin_run("classes --type D4 --twist auto");
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  ASSERT_TRUE(doc.is_array());
  EXPECT_EQ(doc.size(), 6u);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(coxmin_run("classes --type Q3").code, 2);
  EXPECT_EQ(coxmin_run("classes").code, 2);
  EXPECT_EQ(coxmin_run("classes --type A2 --matrix x.json").code, 2);
  EXPECT_EQ(coxmin_run("classes --type B3 --twist flip").code, 2);
  EXPECT_EQ(coxmin_run("frobnicate").code, 2);
  EXPECT_EQ(coxmin_run("verify --type A2 --checks nope").code, 2);
  EXPECT_EQ(coxmin_run("classes --type A2 --format xml").code, 2);
}

TEST_F(Cli, VerifyB2) {
  const auto r = coxmin_run("verify --type B2 --checks gp1,gp2");
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["records"].size(), 10u);
  for (const auto& rec : doc["records"]) EXPECT_EQ(rec["status"], "pass");
}

TEST_F(Cli, VerifyH3Good) {
  const auto r = coxmin_run("verify --type H3 --checks good");
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["num_classes"], 10);
  ASSERT_EQ(doc["records"].size(), 10u);
  for (const auto& rec : doc["records"]) {
    EXPECT_EQ(rec["status"], "pass");
    EXPECT_EQ(rec["data"]["schema"], schema::kCertificate);
    EXPECT_EQ(rec["data"]["nf_digest_lhs"], rec["data"]["nf_digest_rhs"]);
  }
}

TEST_F(Cli, VerifyE8IsSkipped) {
  const auto r = coxmin_run("verify --type E8");
  EXPECT_EQ(r.code, 3);
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["records"].size(), 1u);
  EXPECT_EQ(doc["records"][0]["status"], "skip");
}

TEST_F(Cli, ReportsAreDeterministic) {
  const auto a = coxmin_run("verify --type A3 --twist flip --jobs 1");
  const auto b = coxmin_run("verify --type A3 --twist flip --jobs 4");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, WalkA3) {
  const auto r = coxmin_run("walk --type A3 --word 1,2,1,3 --chamber 2,1");
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["schema"], schema::kWalk);
  EXPECT_EQ(doc["length_start"], 4);
  // class minimum by brute force
  const CoxeterSystem sys(parse_type("A3"));
  const GroupTable t(sys);
  const auto g = t.index_of(sys.from_word({0, 1, 0, 2}));
  std::size_t oracle = t.length(g);
  for (GroupTable::Index x = 0; x < t.size(); ++x) oracle = std::min(oracle, t.length(t.conj(default_coset(sys), g, x)));
  EXPECT_EQ(doc["length_end"], oracle);
  std::size_t prev = 4;
  for (const auto& s : doc["steps"]) {
    EXPECT_EQ(s["length_before"], prev);
    prev = s["length_after"].get<std::size_t>();
  }
  EXPECT_EQ(prev, oracle);
}

TEST_F(Cli, WalkEdgeCases) {
  const auto id = coxmin_run("walk --type A3 --word e");
  ASSERT_EQ(id.code, 0);
  EXPECT_TRUE(Json::parse(id.out)["steps"].empty());
  EXPECT_EQ(coxmin_run("walk --type A3 --word 1,x").code, 2);
  EXPECT_EQ(coxmin_run("walk --type A3 --word 1,5").code, 2);
  EXPECT_EQ(coxmin_run("walk --type A3 --word 1,,2").code, 2);
  EXPECT_EQ(coxmin_run("walk --type A3").code, 2);
}

TEST_F(Cli, MatrixFileAndCache) {
  const auto dir = fs::temp_directory_path() / ("coxmin_cli_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_file(dir / "g2.json", R"({"schema":"coxmin.matrix/1","m":[[1,6],[6,1]]})");
  const std::string m = "--matrix '" + (dir / "g2.json").string() + "'";
  const auto a = coxmin_run("classes " + m + " --cache-dir '" + (dir / "cache").string() + "'");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(Json::parse(a.out)["type"], "g2");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "cache"), fs::directory_iterator()), 1);
  const auto b = coxmin_run("classes " + m + " --cache-dir '" + (dir / "cache").string() + "'");
  EXPECT_EQ(a.out, b.out);

  // environment wins over the flag
  ::setenv("COXMIN_CACHE", (dir / "env").c_str(), 1);
  EXPECT_EQ(coxmin_run("classes --type B2 --cache-dir '" + (dir / "flag").string() + "'").code, 0);
  ::unsetenv("COXMIN_CACHE");
  EXPECT_TRUE(fs::exists(dir / "env"));
  EXPECT_FALSE(fs::exists(dir / "flag"));

  const auto out = dir / "report.csv";
  EXPECT_EQ(coxmin_run("classes --type A2 --format csv --out '" + out.string() + "'").code, 0);
  EXPECT_TRUE(fs::exists(out));
  fs::remove_all(dir);
}
