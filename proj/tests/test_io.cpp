#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "coxmin/verify.hpp"

using namespace coxmin;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("coxmin_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST(Scalars, RoundTrip) {
  const Field* f = Field::get(5);
  const Scalar g = Scalar::generator(f);
  for (const Scalar& s : {Scalar(0), Scalar(mpq_class(-3, 7)), g, g * g - Scalar(f, mpq_class(1, 2))}) {
    const Json j = to_json(s);
    EXPECT_EQ(scalar_from_json(Json::parse(j.dump())), s);
  }
  // 2cos(pi/5)^2 = 1 + 2cos(pi/5) in its reduced form
  const Json sq = to_json(g * g);
  EXPECT_EQ(sq["coeffs"], Json::parse(R"(["1","1"])"));
}

TEST(Scalars, RejectsUnreduced) {
  EXPECT_THROW(scalar_from_json(Json::parse(R"({"level":5,"coeffs":["0","0","1"]})")), Error);
  EXPECT_THROW(scalar_from_json(Json::parse(R"({"level":5,"coeffs":["x"]})")), Error);
  EXPECT_THROW(scalar_from_json(Json::parse(R"({"coeffs":["1"]})")), Error);
}

TEST(MatrixFile, RoundTripAndValidation) {
  const auto cm = parse_type("H3");
  const Json j = matrix_to_json(cm);
  EXPECT_EQ(j["schema"], schema::kMatrix);
  const auto back = matrix_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.m, cm.m);

  const auto dir = fresh_dir("matrix");
  write_text_file(dir / "b2.json", R"({"schema":"coxmin.matrix/1","m":[[1,4],[4,1]]})");
  const auto b2 = matrix_from_json(read_json_file(dir / "b2.json"));
  EXPECT_EQ(CoxeterSystem(b2).group_order(), 8u);

  EXPECT_THROW(matrix_from_json(Json::parse(R"({"m":[[1,3],[3,1]]})")), Error);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"schema":"coxmin.matrix/1","m":[[1,3],[2,1]]})")), Error);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"schema":"coxmin.matrix/1","rank":3,"m":[[1,3],[3,1]]})")), Error);
  EXPECT_THROW(read_json_file(dir / "missing.json"), Error);
  write_text_file(dir / "junk.json", "{not json");
  EXPECT_THROW(read_json_file(dir / "junk.json"), Error);
  fs::remove_all(dir);
}

TEST(Cache, WritesThenHitsThenDetectsStale) {
  const auto dir = fresh_dir("cache");
  const auto cm = parse_type("G2");
  CacheUse first, second;
  auto rs1 = cached_root_system(cm, dir, &first);
  EXPECT_FALSE(first.hit);
  ASSERT_TRUE(fs::exists(first.file));
  auto rs2 = cached_root_system(cm, dir, &second);
  EXPECT_TRUE(second.hit);
  EXPECT_EQ(first.file, second.file);
  EXPECT_EQ(rs1->num_positive(), 6u);

  const Json entry = read_json_file(first.file);
  EXPECT_EQ(entry["schema"], schema::kRoots);
  EXPECT_EQ(entry["num_positive"], 6);
  EXPECT_EQ(entry["positive_roots"].size(), 6u);

  Json bad = entry;
  bad["positive_roots"][0][0]["coeffs"] = Json::parse(R"(["2"])");
  write_text_file(first.file, bad.dump());
  EXPECT_THROW(cached_root_system(cm, dir), Error);

  // different matrices use different files
  CacheUse other;
  cached_root_system(parse_type("B2"), dir, &other);
  EXPECT_NE(other.file, first.file);
  fs::remove_all(dir);
}

TEST(Cache, EnvironmentOverridesFlag) {
  ::unsetenv("COXMIN_CACHE");
  EXPECT_EQ(resolve_cache_dir("flag"), fs::path("flag"));
  ::setenv("COXMIN_CACHE", "/tmp/envdir", 1);
  EXPECT_EQ(resolve_cache_dir("flag"), fs::path("/tmp/envdir"));
  ::unsetenv("COXMIN_CACHE");
  EXPECT_TRUE(resolve_cache_dir("").empty());
}

TEST(Artifacts, EigenDocument) {
  const CoxeterSystem sys(parse_type("B2"));
  const auto w = sys.from_word({0, 1});
  const Json j = to_json(eigen_decomposition(sys, w));
  EXPECT_EQ(j["schema"], schema::kEigen);
  EXPECT_EQ(j["order"], 4);
  ASSERT_EQ(j["spaces"].size(), 1u);
  EXPECT_EQ(j["spaces"][0]["theta_over_pi"], "1/2");
  EXPECT_EQ(j["spaces"][0]["dim"], 2);
  EXPECT_EQ(j["theta0_over_pi"], "1/2");
}

TEST(Artifacts, ClassTables) {
  const CoxeterSystem sys(parse_type("A3"));
  const GroupTable t(sys);
  const unsigned k = default_coset(sys);
  const auto rows = class_rows(t, k, enumerate_classes(t, k));
  ASSERT_EQ(rows.size(), 5u);
  std::size_t total = 0;
  for (const auto& r : rows) {
    total += r.size;
    EXPECT_EQ(r.strong_blocks, 1u);
    EXPECT_EQ(r.tau_surjective.has_value(), r.elliptic);
    EXPECT_EQ(t.length(t.index_of(sys.from_word(r.representative))), r.min_length);
  }
  EXPECT_EQ(total, 24u);

  const Json j = classes_to_json("A3", "id", rows);
  EXPECT_EQ(j["schema"], schema::kClasses);
  ASSERT_EQ(j["classes"].size(), 5u);
  for (const auto& c : j["classes"])
    for (const char* key : {"type", "twist", "class_id", "size", "min_length", "elliptic", "quasi_elliptic",
                            "num_approx_blocks", "num_strong_blocks", "tau_surjective"})
      EXPECT_TRUE(c.contains(key)) << key;

  const auto csv = classes_to_csv("A3", "id", rows);
  EXPECT_EQ(lines(csv), 6u);
  EXPECT_EQ(csv.rfind("type,twist,class_id", 0), 0u);
}

TEST(Artifacts, WalkAndCertificate) {
  const CoxeterSystem sys(parse_type("A3"));
  const auto w = sys.from_word({0, 1, 0, 2});
  const auto r = descent_walk(sys, w, Chamber{sys.from_word({1, 0})});
  const Json j = to_json(sys, r);
  EXPECT_EQ(j["schema"], schema::kWalk);
  EXPECT_EQ(j["start_chamber"], Json::parse("[2,1]"));
  EXPECT_EQ(j["steps"].size(), r.steps.size());
  for (const auto& s : j["steps"]) {
    EXPECT_LE(s["length_after"].get<std::size_t>(), s["length_before"].get<std::size_t>());
    EXPECT_EQ(s["sign_digest"].get<std::string>().size(), 16u);
  }

  const auto g = good_min_element(sys, sys.from_word({0, 1, 2}), 3);
  const Json c = to_json(g.certificate, "A3", "id", 4);
  EXPECT_EQ(c["schema"], schema::kCertificate);
  EXPECT_EQ(c["class_id"], 4);
  EXPECT_EQ(c["nf_digest_lhs"], c["nf_digest_rhs"]);
  EXPECT_EQ(c["subsets"].size(), c["exponents"].size());
}

TEST(Report, DeterministicAndComplete) {
  const CoxeterSystem sys(parse_type("B2"));
  VerifyOptions opt;
  opt.walk_chambers = 2;
  opt.formula_chambers = 8;
  const auto a = verify_system(sys, opt, "B2", "id");
  opt.jobs = 3;
  const auto b = verify_system(sys, opt, "B2", "id");
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.num_classes, 5u);
  EXPECT_FALSE(a.any(Status::Fail));
  EXPECT_EQ(a.records.size(), 5u * all_checks().size());

  VerifyOptions small;
  small.max_group_order = 4;
  const auto s = verify_system(sys, small, "B2", "id");
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_EQ(s.records[0].status, Status::Skip);
}
