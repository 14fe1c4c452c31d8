#pragma once

// Per-class verification runs shared by the command line and the acceptance
// driver.

#include <atomic>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "coxmin/io.hpp"

namespace coxmin {

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{"gp1", "gp2", "elliptic", "tau", "good", "quasi", "walk", "formulas", "eigen"};
  return names;
}

enum class Status { Pass, Fail, Skip, NotApplicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
    case Status::NotApplicable: return "n/a";
  }
  return "?";
}

struct CheckRecord {
  std::optional<std::size_t> class_id;
  std::string check;
  Status status = Status::Pass;
  std::string detail;
  Json data;  // certificates and counters
};

struct FormulaCounts {
  std::size_t special = 0, decomposed = 0, connected = 0;
};

struct VerifyOptions {
  std::set<std::string> checks{all_checks().begin(), all_checks().end()};
  std::uint64_t max_group_order = 1000000;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t walk_chambers = 4;    // walks per class
  std::size_t formula_chambers = 200;  // sampled chambers per class
};

struct VerifyReport {
  std::string type, twist;
  std::uint64_t group_order = 0;
  std::size_t num_classes = 0;
  std::vector<CheckRecord> records;

  bool any(Status s) const {
    for (const auto& r : records)
      if (r.status == s) return true;
    return false;
  }
  std::size_t count(const std::string& check, Status s) const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.check == check && r.status == s;
    return n;
  }

  Json to_json() const {
    Json recs = Json::array();
    for (const auto& r : records) {
      Json j{{"class_id", r.class_id ? Json(*r.class_id) : Json(nullptr)},
             {"check", r.check},
             {"status", coxmin::to_string(r.status)},
             {"detail", r.detail}};
      if (!r.data.is_null()) j["data"] = r.data;
      recs.push_back(j);
    }
    return Json{{"schema", schema::kReport},
                {"type", type},
                {"twist", twist},
                {"group_order", group_order},
                {"num_classes", num_classes},
                {"records", recs}};
  }
};

namespace detail {

inline std::vector<GroupTable::Index> spread(std::size_t n, std::size_t want) {
  std::vector<GroupTable::Index> out;
  if (n == 0) return out;
  if (want >= n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<GroupTable::Index>(i));
  } else {
    for (std::size_t i = 0; i < want; ++i) out.push_back(static_cast<GroupTable::Index>((i * n) / want));
  }
  return out;
}

}  // namespace detail

/// Length formulas on every accepted input for w over the given chambers.
inline FormulaCounts check_formulas(const CoxeterSystem& sys, const Element& w,
                                    const std::vector<Chamber>& chambers) {
  FormulaCounts n;
  const auto eig = eigen_decomposition(sys, w);
  std::vector<PairingTable> tables;
  for (const auto& sp : eig.spaces) tables.emplace_back(sys.roots(), sp.basis);
  for (const auto& a : chambers) {
    for (std::size_t s = 0; s < eig.spaces.size(); ++s) {
      const auto& sp = eig.spaces[s];
      if (!closure_has_regular_point(sys, a, tables[s], sp.basis.size())) continue;
      const auto dec = decompose_at_regular(sys, w, sp.basis, sp.theta, a);
      ++n.decomposed;
      if (sys.length(dec.u) != component_length(sys, w, sp.basis, a))
        fail(ErrorKind::TheoremViolation, "component length differs from l(u)");
      if (sys.length(dec.u) == 0) {
        special_length_formula(sys, w, sp.basis, sp.theta, a);
        ++n.special;
      }
    }
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      try {
        strongly_connected_step(sys, w, eig, a, i);
        ++n.connected;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::HypothesisFailed) throw;
      }
    }
  }
  return n;
}

/// Sound walk whose end satisfies the length formula for K = V_w.
inline WalkResult check_walk(const CoxeterSystem& sys, const Element& w, const Chamber& a, const WalkOptions& opt = {}) {
  const auto r = descent_walk(sys, w, a, opt);
  if (!walk_is_sound(sys, w, r)) fail(ErrorKind::TheoremViolation, "walk failed exact re-verification");
  const auto eig = eigen_decomposition(sys, w);
  const mpq_class expected = mpq_class(static_cast<long>(component_length(sys, w, eig.v_w(), r.end))) +
                             rotation_count(sys.roots(), eig.v_w(), eig.theta0());
  if (mpq_class(static_cast<long>(sys.length(conjugate_by_chamber(sys, w, r.end)))) != expected)
    fail(ErrorKind::TheoremViolation, "walk end length differs from the formula");
  return r;
}

inline std::vector<CheckRecord> verify_class(const CoxeterSystem& sys, const GroupTable& t, unsigned k,
                                             const ClassTable& ct, const ClassRecord& c, const VerifyOptions& opt,
                                             const std::string& type, const std::string& twist) {
  std::vector<CheckRecord> out;
  const Element rep = t.twisted_element(k, c.representative());
  auto run = [&](const std::string& name, bool applicable, const std::function<std::string(CheckRecord&)>& body) {
    if (!opt.checks.count(name)) return;
    CheckRecord rec;
    rec.class_id = c.id;
    rec.check = name;
    if (!applicable) {
      rec.status = Status::NotApplicable;
      out.push_back(rec);
      return;
    }
    try {
      rec.detail = body(rec);
      rec.status = Status::Pass;
    } catch (const Error& e) {
      rec.status = e.kind() == ErrorKind::TooLarge ? Status::Skip : Status::Fail;
      rec.detail = e.what();
    }
    out.push_back(rec);
  };

  run("gp1", true, [&](CheckRecord&) {
    for (auto g : c.members) {
      const auto chain = arrow_reduce(t, k, g, &ct);
      if (t.length(chain.end()) != c.min_length) fail(ErrorKind::TheoremViolation, "reduction ended above O_min");
    }
    return std::to_string(c.members.size()) + " elements reduced";
  });
  run("gp2", true, [&](CheckRecord&) {
    const auto blocks = strong_partition(t, k, c.omin).size();
    if (blocks != 1) fail(ErrorKind::TheoremViolation, "O_min splits into " + std::to_string(blocks) + " strong blocks");
    return std::to_string(c.omin.size()) + " minimal elements, one block";
  });
  run("elliptic", c.elliptic, [&](CheckRecord&) {
    const auto blocks = approx_partition(t, k, c.omin).size();
    if (blocks != 1) fail(ErrorKind::TheoremViolation, "O_min splits into " + std::to_string(blocks) + " approx blocks");
    return std::string("one approx block");
  });
  run("tau", c.elliptic, [&](CheckRecord& rec) {
    const auto pg = path_graph(t, k, c.representative());
    rec.data = Json{{"vertices", pg.vertices}, {"centralizer", pg.centralizer}};
    if (!pg.surjective()) fail(ErrorKind::TheoremViolation, "path map is not surjective");
    if (!pg.centralizer_ok()) fail(ErrorKind::TheoremViolation, "centralizer not reached by closed paths");
    return std::string("surjective, centralizer reached");
  });
  run("good", true, [&](CheckRecord& rec) {
    const auto g = good_min_element(sys, rep, c.min_length);
    rec.data = to_json(g.certificate, type, twist, c.id);
    return "d = " + std::to_string(g.certificate.order) + (g.certificate.very_good ? ", very good" : "");
  });
  run("quasi", c.quasi_elliptic, [&](CheckRecord& rec) {
    const auto g = quasi_elliptic_good_element(sys, rep);
    rec.data = to_json(g.certificate, type, twist, c.id);
    return std::string("power divisible by the square of w0");
  });
  run("walk", true, [&](CheckRecord& rec) {
    std::size_t steps = 0, fallbacks = 0, walks = 0;
    const auto ms = detail::spread(c.members.size(), opt.walk_chambers);
    const auto xs = detail::spread(t.size(), opt.walk_chambers);
    for (std::size_t i = 0; i < ms.size() && i < xs.size(); ++i) {
      const Element w = t.twisted_element(k, c.members[ms[i]]);
      const auto xi = static_cast<GroupTable::Index>((xs[i] + 7 * c.id) % t.size());
      const auto r = check_walk(sys, w, Chamber{t.element(xi)});
      steps += r.steps.size();
      fallbacks += r.fallback;
      ++walks;
    }
    rec.data = Json{{"walks", walks}, {"steps", steps}, {"fallbacks", fallbacks}};
    return std::to_string(walks) + " walks";
  });
  run("formulas", true, [&](CheckRecord& rec) {
    std::vector<Chamber> chambers;
    for (auto x : detail::spread(t.size(), opt.formula_chambers)) chambers.push_back(Chamber{t.element(x)});
    const auto n = check_formulas(sys, rep, chambers);
    rec.data = Json{{"special", n.special}, {"decomposed", n.decomposed}, {"connected", n.connected}};
    return std::to_string(n.decomposed + n.special + n.connected) + " formula inputs";
  });
  run("eigen", true, [&](CheckRecord&) {
    const auto eig = eigen_decomposition(sys, rep);
    std::size_t total = 0;
    for (const auto& s : eig.spaces) {
      total += s.dim;
      if (!s.theta.is_zero() && !s.theta.is_pi() && s.dim % 2 != 0)
        fail(ErrorKind::TheoremViolation, "odd dimension for a non-real angle");
    }
    if (total != sys.rank()) fail(ErrorKind::TheoremViolation, "dimensions do not add up");
    return std::string("dimensions add up");
  });
  return out;
}

inline VerifyReport verify_system(const CoxeterSystem& sys, const VerifyOptions& opt, const std::string& type,
                                  const std::string& twist) {
  VerifyReport rep;
  rep.type = type;
  rep.twist = twist;
  rep.group_order = sys.group_order();
  if (rep.group_order > opt.max_group_order) {
    rep.records.push_back(CheckRecord{std::nullopt, "all", Status::Skip,
                                      "group order " + std::to_string(rep.group_order) + " exceeds bound " +
                                          std::to_string(opt.max_group_order),
                                      Json()});
    return rep;
  }
  const GroupTable t(sys, opt.max_group_order);
  const unsigned k = default_coset(sys);
  ClassTable ct;
  try {
    ct = enumerate_classes(t, k);
  } catch (const Error& e) {
    rep.records.push_back(CheckRecord{std::nullopt, "classes", Status::Fail, e.what(), Json()});
    return rep;
  }
  rep.num_classes = ct.classes.size();
  std::vector<std::vector<CheckRecord>> per(ct.classes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < ct.classes.size();)
      per[i] = verify_class(sys, t, k, ct, ct.classes[i], opt, type, twist);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(ct.classes.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& v : per)
    for (auto& r : v) rep.records.push_back(std::move(r));
  return rep;
}

}  // namespace coxmin
