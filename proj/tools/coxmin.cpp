// coxmin: class tables, verification reports and walk traces.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coxmin/verify.hpp"

using namespace coxmin;

namespace {

struct Common {
  std::string type, matrix, twist = "id", out, format = "json", cache_dir;
  std::uint64_t max_group_order = 1000000;
};

struct Loaded {
  CoxeterMatrix cm;
  std::string type;
  std::shared_ptr<const RootSystem> rs;
  std::vector<DiagramTwist> twists;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--type", c.type, "named type, e.g. A3, I2(5), A1xB2");
  sub->add_option("--matrix", c.matrix, "Coxeter matrix JSON file");
  sub->add_option("--twist", c.twist, "id, flip, auto (every twist) or a 1-based permutation")->capture_default_str();
  sub->add_option("--max-group-order", c.max_group_order, "skip groups larger than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--cache-dir", c.cache_dir, "root-system cache directory (COXMIN_CACHE overrides)");
}

Loaded load(const Common& c) {
  if (c.type.empty() == c.matrix.empty()) fail(ErrorKind::InvalidInput, "give exactly one of --type and --matrix");
  Loaded l;
  if (!c.type.empty()) {
    l.cm = parse_type(c.type);
    l.type = c.type;
  } else {
    l.cm = matrix_from_json(read_json_file(c.matrix));
    l.type = l.cm.name.empty() ? std::filesystem::path(c.matrix).stem().string() : l.cm.name;
  }
  if (c.twist == "auto")
    l.twists = enumerate_twists(l.cm);
  else
    l.twists = {parse_twist(l.cm, c.twist)};
  l.rs = cached_root_system(l.cm, resolve_cache_dir(c.cache_dir));
  return l;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_text_file(c.out, text);
}

std::string csv_field(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

int run_classes(const Common& c) {
  const auto l = load(c);
  Json docs = Json::array();
  std::string csv;
  for (const auto& d : l.twists) {
    const CoxeterSystem sys(l.rs, d);
    if (sys.group_order() > c.max_group_order)
      fail(ErrorKind::TooLarge, "group order " + std::to_string(sys.group_order()) + " exceeds bound " +
                                    std::to_string(c.max_group_order));
    const GroupTable t(sys, c.max_group_order);
    const unsigned k = default_coset(sys);
    const auto rows = class_rows(t, k, enumerate_classes(t, k));
    docs.push_back(classes_to_json(l.type, d.label(), rows));
    auto part = classes_to_csv(l.type, d.label(), rows);
    if (!csv.empty()) part.erase(0, part.find('\n') + 1);
    csv += part;
  }
  if (c.format == "csv")
    emit(c, csv);
  else
    emit(c, (docs.size() == 1 ? docs[0] : docs).dump(1) + "\n");
  return 0;
}

int run_verify(const Common& c, const std::string& checks, unsigned jobs) {
  const auto l = load(c);
  VerifyOptions opt;
  opt.max_group_order = c.max_group_order;
  opt.jobs = jobs;
  if (!checks.empty() && checks != "all") {
    opt.checks.clear();
    std::stringstream ss(checks);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (std::find(all_checks().begin(), all_checks().end(), tok) == all_checks().end())
        fail(ErrorKind::InvalidInput, "unknown check '" + tok + "'");
      opt.checks.insert(tok);
    }
  }
  Json docs = Json::array();
  std::ostringstream csv;
  csv << "type,twist,class_id,check,status,detail\n";
  bool failed = false, skipped = false;
  for (const auto& d : l.twists) {
    const CoxeterSystem sys(l.rs, d);
    const auto rep = verify_system(sys, opt, l.type, d.label());
    failed |= rep.any(Status::Fail);
    skipped |= rep.any(Status::Skip);
    docs.push_back(rep.to_json());
    for (const auto& r : rep.records)
      csv << l.type << ',' << csv_field(d.label()) << ',' << (r.class_id ? std::to_string(*r.class_id) : "") << ','
          << r.check << ',' << to_string(r.status) << ',' << csv_field(r.detail) << '\n';
  }
  if (c.format == "csv")
    emit(c, csv.str());
  else
    emit(c, (docs.size() == 1 ? docs[0] : docs).dump(1) + "\n");
  return failed ? 1 : skipped ? 3 : 0;
}

int run_walk(const Common& c, const std::string& word, const std::string& chamber, std::size_t seed) {
  if (c.twist == "auto") fail(ErrorKind::InvalidInput, "walk needs a single twist");
  if (c.format != "json") fail(ErrorKind::InvalidInput, "walk traces are JSON only");
  const auto l = load(c);
  const CoxeterSystem sys(l.rs, l.twists[0]);
  if (sys.group_order() > c.max_group_order)
    fail(ErrorKind::TooLarge, "group order " + std::to_string(sys.group_order()) + " exceeds bound " +
                                  std::to_string(c.max_group_order));
  const auto wi = parse_index_list(word, sys.rank());
  const auto xi = parse_index_list(chamber, sys.rank());
  const Element w = sys.from_word(wi, default_coset(sys));
  WalkOptions opt;
  opt.seed = seed;
  const auto r = check_walk(sys, w, Chamber{sys.from_word(xi)}, opt);
  Json j{{"schema", schema::kWalk},
         {"type", l.type},
         {"twist", l.twists[0].label()},
         {"word", one_based(wi)},
         {"length_start", sys.length(conjugate_by_chamber(sys, w, r.start))},
         {"length_end", sys.length(conjugate_by_chamber(sys, w, r.end))}};
  const Json trace = to_json(sys, r);
  for (const auto& [key, v] : trace.items())
    if (key != "schema") j[key] = v;
  emit(c, j.dump(1) + "\n");
  return 0;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NotFinite: return 2;
    case ErrorKind::TooLarge:
    case ErrorKind::SearchBound: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-length elements of twisted finite Coxeter groups"};
  app.require_subcommand(1);
  Common common;
  std::string checks = "all", word, chamber;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t seed = 0;

  auto* classes = app.add_subcommand("classes", "twisted conjugacy class table");
  add_common(classes, common);
  auto* verify = app.add_subcommand("verify", "run checks over every class");
  add_common(verify, common);
  verify->add_option("--checks", checks, "comma list of gp1,gp2,elliptic,tau,good,quasi,walk,formulas,eigen")
      ->capture_default_str();
  verify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* walk = app.add_subcommand("walk", "chamber walk for one element");
  add_common(walk, common);
  walk->add_option("--word", word, "element as 1-based simple reflections, e.g. 1,2,1,3")->required();
  walk->add_option("--chamber", chamber, "starting chamber as a word (default: fundamental)");
  walk->add_option("--seed", seed, "start points to skip")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*classes) return run_classes(common);
    if (*verify) return run_verify(common, checks, jobs);
    return run_walk(common, word, chamber, seed);
  } catch (const Error& e) {
    std::cerr << "coxmin: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "coxmin: " << e.what() << "\n";
    return 2;
  }
}
