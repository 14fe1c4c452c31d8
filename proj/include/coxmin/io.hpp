#pragma once

// JSON and CSV export. Every JSON document carries a top-level "schema".

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coxmin/braid.hpp"
#include "coxmin/conjugacy.hpp"

namespace coxmin {

using Json = nlohmann::ordered_json;

namespace schema {
inline constexpr const char* kMatrix = "coxmin.matrix/1";
inline constexpr const char* kRoots = "coxmin.roots/1";
inline constexpr const char* kEigen = "coxmin.eigen/1";
inline constexpr const char* kClasses = "coxmin.classes/1";
inline constexpr const char* kWalk = "coxmin.walk/1";
inline constexpr const char* kCertificate = "coxmin.certificate/1";
inline constexpr const char* kReport = "coxmin.report/1";
}  // namespace schema

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline void require_schema(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != name)
    fail(ErrorKind::InvalidInput, std::string("expected schema ") + name);
}

// ---------------------------------------------------------------------------
// Scalars: coefficients in powers of 2cos(pi/level)

inline Json to_json(const Scalar& s) {
  Json c = Json::array();
  for (const auto& q : s.coeffs()) c.push_back(q.get_str());
  return Json{{"level", s.field()->level()}, {"coeffs", c}};
}

inline Scalar scalar_from_json(const Json& j) {
  try {
    const Field* f = Field::get(j.at("level").get<unsigned>());
    QPoly p;
    for (const auto& c : j.at("coeffs")) {
      mpq_class q(c.get<std::string>());
      q.canonicalize();
      p.push_back(q);
    }
    QPoly r = p;
    f->reduce(r);
    if (r != p) fail(ErrorKind::InvalidInput, "scalar coefficients are not reduced");
    return Scalar(f, std::move(p));
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("bad scalar: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::InvalidInput, "bad rational in scalar");
  }
}

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(to_json(s));
  return a;
}

inline Vec vec_from_json(const Json& j) {
  Vec v;
  for (const auto& s : j) v.push_back(scalar_from_json(s));
  return v;
}

inline Json to_json(const std::vector<Vec>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return a;
}

// ---------------------------------------------------------------------------
// Coxeter matrices

inline Json matrix_to_json(const CoxeterMatrix& cm) {
  return Json{{"schema", schema::kMatrix}, {"name", cm.name}, {"rank", cm.rank}, {"m", cm.m}};
}

/// {"schema": ..., "m": [[1, 3], [3, 1]]}; "rank" and "name" are optional.
inline CoxeterMatrix matrix_from_json(const Json& j) {
  require_schema(j, schema::kMatrix);
  CoxeterMatrix cm;
  try {
    cm.m = j.at("m").get<std::vector<std::vector<unsigned>>>();
    cm.rank = cm.m.size();
    if (j.contains("rank") && j["rank"].get<std::size_t>() != cm.rank)
      fail(ErrorKind::InvalidInput, "rank does not match the matrix");
    cm.name = j.value("name", std::string());
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("bad matrix file: ") + e.what());
  }
  cm.validate();
  return cm;
}

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidInput, "cannot parse " + p.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + p.string());
    out << text;
  }
  std::filesystem::rename(tmp, p);
}

// ---------------------------------------------------------------------------
// Root-system cache, keyed by matrix and field level

inline std::string cache_key(const CoxeterMatrix& cm, unsigned level) {
  std::string k = "L" + std::to_string(level);
  for (const auto& row : cm.m) {
    k += ";";
    for (std::size_t j = 0; j < row.size(); ++j) k += (j ? "," : "") + std::to_string(row[j]);
  }
  return k;
}

inline Json roots_to_json(const RootSystem& rs) {
  Json roots = Json::array();
  for (std::size_t p = 0; p < rs.num_positive(); ++p) roots.push_back(to_json(rs.root(p)));
  Json refl = Json::array();
  for (std::size_t i = 0; i < rs.rank(); ++i) refl.push_back(rs.simple_reflection(i));
  return Json{{"schema", schema::kRoots},
              {"key", cache_key(rs.matrix(), rs.field()->level())},
              {"matrix", rs.matrix().m},
              {"level", rs.field()->level()},
              {"num_positive", rs.num_positive()},
              {"positive_roots", roots},
              {"simple_reflections", refl}};
}

/// COXMIN_CACHE wins over the flag; empty means no cache.
inline std::filesystem::path resolve_cache_dir(const std::string& flag) {
  if (const char* env = std::getenv("COXMIN_CACHE"); env && *env) return env;
  return flag;
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& key) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return dir / ("roots-" + hex64(h) + ".json");
}

struct CacheUse {
  std::filesystem::path file;
  bool hit = false;  // existing entry matched
};

/// Builds the root system; an existing cache entry must agree with it
/// exactly, a missing one is written.
inline std::shared_ptr<const RootSystem> cached_root_system(const CoxeterMatrix& cm, const std::filesystem::path& dir,
                                                            CacheUse* use = nullptr) {
  auto rs = std::make_shared<const RootSystem>(cm);
  if (dir.empty()) return rs;
  const Json fresh = roots_to_json(*rs);
  const auto file = cache_file(dir, fresh["key"].get<std::string>());
  if (use) use->file = file;
  if (std::filesystem::exists(file)) {
    const Json old = read_json_file(file);
    require_schema(old, schema::kRoots);
    if (old != fresh) fail(ErrorKind::InvalidInput, "root cache entry " + file.string() + " is stale");
    if (use) use->hit = true;
  } else {
    write_text_file(file, fresh.dump(1) + "\n");
  }
  return rs;
}

// ---------------------------------------------------------------------------
// Artifacts

inline std::string angle_string(const Angle& a) { return a.ratio().get_str(); }

inline Json to_json(const EigenDecomposition& eig) {
  Json spaces = Json::array();
  for (const auto& s : eig.spaces)
    spaces.push_back(Json{{"theta_over_pi", angle_string(s.theta)}, {"dim", s.dim}, {"basis", to_json(s.basis)}});
  return Json{{"schema", schema::kEigen},
              {"order", eig.order},
              {"theta0_over_pi", angle_string(eig.theta0())},
              {"spaces", spaces}};
}

/// "1,2,1,3" -> {0,1,0,2}; "" and "e" are the empty word.
inline std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t rank) {
  std::vector<std::size_t> out;
  if (text.empty() || text == "e") return out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad index '" + tok + "' in '" + text + "'");
    }
    if (used != tok.size() || v < 1 || static_cast<std::size_t>(v) > rank)
      fail(ErrorKind::InvalidInput, "index '" + tok + "' out of range 1.." + std::to_string(rank));
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (text.back() == ',') fail(ErrorKind::InvalidInput, "trailing comma in '" + text + "'");
  return out;
}

inline std::vector<std::size_t> one_based(const std::vector<std::size_t>& w) {
  std::vector<std::size_t> out;
  for (auto i : w) out.push_back(i + 1);
  return out;
}

struct ClassRow {
  std::size_t class_id = 0, size = 0, min_length = 0;
  bool elliptic = false, quasi_elliptic = false;
  std::size_t approx_blocks = 0, strong_blocks = 0;
  std::optional<bool> tau_surjective;  // elliptic classes only
  std::vector<std::size_t> representative;
};

inline std::vector<ClassRow> class_rows(const GroupTable& t, unsigned k, const ClassTable& ct) {
  std::vector<ClassRow> rows;
  for (const auto& c : ct.classes) {
    ClassRow r;
    r.class_id = c.id;
    r.size = c.size();
    r.min_length = c.min_length;
    r.elliptic = c.elliptic;
    r.quasi_elliptic = c.quasi_elliptic;
    r.approx_blocks = approx_partition(t, k, c.omin).size();
    r.strong_blocks = strong_partition(t, k, c.omin).size();
    if (c.elliptic) r.tau_surjective = path_graph(t, k, c.representative()).surjective();
    r.representative = t.word(c.representative());
    rows.push_back(r);
  }
  return rows;
}

inline Json classes_to_json(const std::string& type, const std::string& twist, const std::vector<ClassRow>& rows) {
  Json recs = Json::array();
  for (const auto& r : rows)
    recs.push_back(Json{{"type", type},
                        {"twist", twist},
                        {"class_id", r.class_id},
                        {"size", r.size},
                        {"min_length", r.min_length},
                        {"elliptic", r.elliptic},
                        {"quasi_elliptic", r.quasi_elliptic},
                        {"num_approx_blocks", r.approx_blocks},
                        {"num_strong_blocks", r.strong_blocks},
                        {"tau_surjective", r.tau_surjective ? Json(*r.tau_surjective) : Json(nullptr)},
                        {"representative", one_based(r.representative)}});
  return Json{{"schema", schema::kClasses}, {"type", type}, {"twist", twist}, {"classes", recs}};
}

inline std::string classes_to_csv(const std::string& type, const std::string& twist, const std::vector<ClassRow>& rows) {
  std::ostringstream os;
  os << "type,twist,class_id,size,min_length,elliptic,quasi_elliptic,num_approx_blocks,num_strong_blocks,"
        "tau_surjective,representative\n";
  for (const auto& r : rows) {
    os << type << ',' << '"' << twist << '"' << ',' << r.class_id << ',' << r.size << ',' << r.min_length << ','
       << r.elliptic << ',' << r.quasi_elliptic << ',' << r.approx_blocks << ',' << r.strong_blocks << ','
       << (r.tau_surjective ? (*r.tau_surjective ? "1" : "0") : "") << ",\"";
    const auto w = one_based(r.representative);
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << "\"\n";
  }
  return os.str();
}

inline Json to_json(const CoxeterSystem& sys, const WalkResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back(Json{{"wall_root", s.root},
                         {"wall", s.wall + 1},
                         {"sign_digest", hex64(s.digest)},
                         {"length_before", s.length_before},
                         {"length_after", s.length_after}});
  return Json{{"schema", schema::kWalk},
              {"start_chamber", one_based(sys.reduced_word(r.start.x))},
              {"end_chamber", one_based(sys.reduced_word(r.end.x))},
              {"steps", steps},
              {"end_point", to_json(r.end_point)},
              {"attempts", r.attempts},
              {"fallback", r.fallback}};
}

inline Json to_json(const GoodCertificate& c, const std::string& type, const std::string& twist, std::size_t class_id) {
  Json subsets = Json::array();
  for (auto s : c.subsets) subsets.push_back(one_based(set_members(s)));
  return Json{{"schema", schema::kCertificate},
              {"type", type},
              {"twist", twist},
              {"class_id", class_id},
              {"order", c.order},
              {"subsets", subsets},
              {"exponents", c.exponents},
              {"sigma", c.sigma},
              {"dropped_zero_exponent", c.dropped_zero},
              {"very_good", c.very_good},
              {"sigma_half", c.sigma_half ? Json(*c.sigma_half) : Json(nullptr)},
              {"nf_digest_lhs", hex64(c.lhs_digest)},
              {"nf_digest_rhs", hex64(c.rhs_digest)}};
}

}  // namespace coxmin
