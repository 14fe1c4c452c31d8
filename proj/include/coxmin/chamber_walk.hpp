#pragma once

// The time-reversed gradient flow of f(v) = |w v - v|^2 and the chamber walk
// it induces, plus the length formulas for chambers whose closure meets a
// regular point of a w-stable subspace.
//
// Crossing times are located with interval arithmetic. Every accepted step
// and the end condition are re-checked exactly.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "coxmin/eigen.hpp"

namespace coxmin {

/// sign of D_v f(h) = 2 (w h - h, w v - v)
inline int derivative_test(const CoxeterSystem& sys, const Element& w, const Vec& h, const Vec& v) {
  const Vec a = vec_sub(sys.apply(w, h), h);
  const Vec b = vec_sub(sys.apply(w, v), v);
  return sys.roots().inner(a, b).sign();
}

/// Inverse of the matrix whose columns are the eigenbases in order.
inline Mat eigen_coordinates(const CoxeterSystem& sys, const EigenDecomposition& eig) {
  const std::size_t n = sys.rank();
  Mat basis = zero_matrix(n, n);
  std::size_t col = 0;
  for (const auto& sp : eig.spaces)
    for (const auto& b : sp.basis) {
      for (std::size_t r = 0; r < n; ++r) basis[r][col] = b[r];
      ++col;
    }
  return inverse(basis);
}

/// C(v, t) = sum_theta exp(4 t (1 - cos theta)) v_theta, split by angle.
class FlowCurve {
 public:
  FlowCurve(const CoxeterSystem& sys, const EigenDecomposition& eig, const Vec& v)
      : FlowCurve(eig, eigen_coordinates(sys, eig), v) {}

  FlowCurve(const EigenDecomposition& eig, const Mat& coords, const Vec& v) : eig_(&eig) {
    const Vec coeff = mat_vec(coords, v);
    std::size_t col = 0;
    for (const auto& sp : eig.spaces) {
      Vec part(v.size());
      for (const auto& b : sp.basis) part = vec_add(part, vec_scale(b, coeff[col++]));
      parts_.push_back(part);
    }
  }

  /// Component of v in V^theta for the a-th angle.
  const Vec& component(std::size_t a) const { return parts_[a]; }
  std::size_t num_components() const { return parts_.size(); }
  const Vec& limit_component() const { return parts_[eig_->theta0_index]; }

  /// Sum of the components, which must give back v.
  Vec at_zero() const {
    Vec s(parts_.empty() ? 0 : parts_[0].size());
    for (const auto& p : parts_) s = vec_add(s, p);
    return s;
  }

 private:
  const EigenDecomposition* eig_;
  std::vector<Vec> parts_;
};

struct WalkStep {
  std::size_t wall = 0;       // simple index i with A_{k+1} = A_k s_i
  std::size_t root = 0;       // positive root of the crossed hyperplane
  std::uint64_t digest = 0;   // of the sign vector of the new chamber
  std::size_t length_before = 0, length_after = 0;
};

struct WalkResult {
  Chamber start, end;
  std::vector<WalkStep> steps;
  Vec end_point;              // regular point of V_w in the closure of end
  std::size_t attempts = 0;   // start points tried
  bool fallback = false;      // finished by exhaustive adjacent-chamber search
};

inline std::uint64_t sign_digest(const std::vector<int>& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (int v : s) {
    h ^= static_cast<std::uint64_t>(v > 0 ? 1 : 2);
    h *= 1099511628211ull;
  }
  return h;
}

namespace detail {

// g(s) = sum_j c_j exp(-nu_j s) with nu_0 = 0 for the dominant term
struct ExpPoly {
  std::vector<Interval> c;
  std::vector<Interval> nu;

  Interval eval(const Interval& s, bool derivative) const {
    Interval acc(s.precision());
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == 0) {
        if (!derivative) acc += c[0];
        continue;
      }
      Interval term = c[j] * (-(nu[j] * s)).exp();
      if (derivative) term = -(nu[j] * term);
      acc += term;
    }
    return acc;
  }
};

inline Interval span(const mpq_class& a, const mpq_class& b, mpfr_prec_t prec) {
  return Interval::hull(Interval::from_rational(a, prec), Interval::from_rational(b, prec));
}

struct Zero {
  mpq_class lo, hi;  // sign change strictly inside (lo, hi)
  int sign_lo = 0;   // sign of g at lo
};

enum class Isolation { Ok, Ambiguous };

// Zeros of g on [a, b]; recursion by bisection with a monotonicity test.
inline Isolation isolate(const ExpPoly& g, const mpq_class& a, const mpq_class& b, mpfr_prec_t prec, int depth,
                         std::vector<Zero>& out) {
  const Interval whole = g.eval(span(a, b, prec), false);
  if (whole.sign() != 0) return Isolation::Ok;
  const Interval d = g.eval(span(a, b, prec), true);
  if (d.sign() != 0) {
    const int sa = g.eval(Interval::from_rational(a, prec), false).sign();
    const int sb = g.eval(Interval::from_rational(b, prec), false).sign();
    if (sa != 0 && sb != 0) {
      if (sa != sb) out.push_back({a, b, sa});
      return Isolation::Ok;
    }
  }
  if (depth > 80) return Isolation::Ambiguous;
  const mpq_class m = (a + b) / 2;
  if (isolate(g, a, m, prec, depth + 1, out) == Isolation::Ambiguous) return Isolation::Ambiguous;
  return isolate(g, m, b, prec, depth + 1, out);
}

// The point m lies left of the zero in z when g(m) has the sign g has at lo.
inline bool refine(const ExpPoly& g, Zero& z, mpfr_prec_t prec) {
  const mpq_class m = (z.lo + z.hi) / 2;
  const int s = g.eval(Interval::from_rational(m, prec), false).sign();
  if (s == 0) return false;
  if (s == z.sign_lo)
    z.lo = m;
  else
    z.hi = m;
  return true;
}

struct Event {
  std::size_t root;
  Zero zero;
};

}  // namespace detail

/// Chambers adjacent through walls whose crossing does not increase the
/// length of w_A, searched breadth-first until the end condition holds.
inline std::optional<std::vector<std::size_t>> descent_search(const CoxeterSystem& sys, const Element& w,
                                                              const Chamber& a, const std::vector<Vec>& k) {
  std::map<Perm, std::pair<Perm, std::size_t>> from;
  from.emplace(a.x.perm, std::make_pair(a.x.perm, sys.rank()));
  std::deque<Chamber> queue{a};
  const PairingTable pk(sys.roots(), k);
  while (!queue.empty()) {
    const Chamber c = queue.front();
    queue.pop_front();
    if (closure_has_regular_point(sys, c, pk, k.size())) {
      std::vector<std::size_t> walls;
      for (Perm p = c.x.perm; p != a.x.perm;) {
        auto [prev, i] = from.at(p);
        walls.push_back(i);
        p = prev;
      }
      std::reverse(walls.begin(), walls.end());
      return walls;
    }
    const std::size_t lc = sys.length(conjugate_by_chamber(sys, w, c));
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      const Chamber nb = adjacent(sys, c, i);
      if (sys.length(conjugate_by_chamber(sys, w, nb)) > lc) continue;
      if (from.emplace(nb.x.perm, std::make_pair(c.x.perm, i)).second) queue.push_back(nb);
    }
  }
  return std::nullopt;
}

struct WalkOptions {
  std::size_t seed = 0;          // start points skipped in the enumeration
  std::size_t max_attempts = 8;
  mpfr_prec_t min_prec = 128, max_prec = 4096;
  bool allow_fallback = true;
};

/// Follows the time-reversed flow from a point of A until a chamber whose
/// closure contains a regular point of V_w.
inline WalkResult descent_walk(const CoxeterSystem& sys, const Element& w, const Chamber& a,
                               const WalkOptions& opt = {}) {
  const auto eig = eigen_decomposition(sys, w);
  const auto& kw = eig.v_w();
  const RootSystem& rs = sys.roots();
  const std::size_t n = sys.rank();
  const PairingTable pk(rs, kw);
  auto at_end = [&](const Chamber& c) { return closure_has_regular_point(sys, c, pk, kw.size()); };
  WalkResult res;
  res.start = a;
  res.end = a;

  auto finish = [&](const Chamber& c) {
    res.end = c;
    res.end_point = regular_point(sys, kw, c);
    return res;
  };
  if (at_end(a)) return finish(a);

  // interior points of A: x_A(u) with <alpha_i, u> = t_i > 0
  const Mat ginv = inverse(rs.gram());
  const Mat xa = sys.matrix_of(a.x);
  const Mat coords = eigen_coordinates(sys, eig);
  // positive integer tuples t by max-norm shell, lexicographic inside a shell
  std::vector<long> t(n, 1);
  long shell = 1;
  std::size_t skipped = 0;
  auto next_start = [&]() -> std::optional<Vec> {
    while (shell < 64) {
      std::optional<Vec> found;
      if (*std::max_element(t.begin(), t.end()) == shell) {
        Vec tv(n);
        for (std::size_t i = 0; i < n; ++i) tv[i] = Scalar(t[i]);
        const Vec y = mat_vec(xa, mat_vec(ginv, tv));
        const FlowCurve fc(eig, coords, y);
        if (is_regular_in(rs, pk, fc.limit_component()) && !is_zero_vec(fc.limit_component()) && skipped++ >= opt.seed)
          found = y;
      }
      std::size_t p = n;
      while (p > 0 && t[p - 1] == shell) t[--p] = 1;
      if (p == 0) {
        ++shell;
      } else {
        ++t[p - 1];
      }
      if (found) return found;
    }
    return std::nullopt;
  };

  // nu_j = mu_j - mu_dom = 4 (cos theta_dom - cos theta_j)
  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const auto start = next_start();
    if (!start) break;
    const Vec& y = *start;
    ++res.attempts;
    const FlowCurve fc(eig, coords, y);
    std::vector<std::vector<Scalar>> coeff(rs.num_positive(), std::vector<Scalar>(fc.num_components()));
    for (std::size_t p = 0; p < rs.num_positive(); ++p)
      for (std::size_t j = 0; j < fc.num_components(); ++j) coeff[p][j] = rs.pair(p, fc.component(j));

    bool ok = false;
    std::vector<detail::Event> events;
    for (mpfr_prec_t prec = opt.min_prec; prec <= opt.max_prec && !ok; prec *= 2) {
      events.clear();
      bool ambiguous = false;
      for (std::size_t p = 0; p < rs.num_positive() && !ambiguous; ++p) {
        detail::ExpPoly g;
        std::size_t dom = fc.num_components();
        for (std::size_t j = 0; j < fc.num_components(); ++j)
          if (!coeff[p][j].is_zero()) {
            dom = j;
            break;
          }
        const Interval cd = Interval::cos_pi(eig.spaces[dom].theta.ratio(), prec);
        g.c.push_back(coeff[p][dom].to_interval(prec));
        g.nu.push_back(Interval(prec));
        for (std::size_t j = dom + 1; j < fc.num_components(); ++j) {
          if (coeff[p][j].is_zero()) continue;
          g.c.push_back(coeff[p][j].to_interval(prec));
          g.nu.push_back((cd - Interval::cos_pi(eig.spaces[j].theta.ratio(), prec)) * Interval::from_long(4, prec));
        }
        // beyond s_max the dominant term wins
        mpq_class s_max(0);
        if (g.c.size() > 1) {
          const Interval abs0 = g.c[0].sign() > 0 ? g.c[0] : -g.c[0];
          for (s_max = 1;; s_max *= 2) {
            if (g.c[0].sign() == 0 || s_max > mpq_class(1 << 20)) {
              ambiguous = true;
              break;
            }
            Interval tail(prec);
            const Interval s = Interval::from_rational(s_max, prec);
            for (std::size_t j = 1; j < g.c.size(); ++j) {
              const Interval mag = g.c[j].sign() >= 0 ? g.c[j] : -g.c[j];
              tail += Interval::hull(mag, -mag) * (-(g.nu[j] * s)).exp();
            }
            if (certainly_less(Interval::hull(tail, -tail), abs0)) break;
          }
        }
        if (ambiguous) break;
        if (s_max > 0) {
          std::vector<detail::Zero> zs;
          if (detail::isolate(g, mpq_class(0), s_max, prec, 0, zs) == detail::Isolation::Ambiguous) {
            ambiguous = true;
            break;
          }
          for (auto& z : zs) events.push_back({p, z});
        }
      }
      if (ambiguous) continue;
      // order the crossing times; overlapping enclosures are refined
      auto rebuild = [&](std::size_t p, mpfr_prec_t pr) {
        detail::ExpPoly g;
        std::size_t dom = 0;
        while (coeff[p][dom].is_zero()) ++dom;
        const Interval cd = Interval::cos_pi(eig.spaces[dom].theta.ratio(), pr);
        g.c.push_back(coeff[p][dom].to_interval(pr));
        g.nu.push_back(Interval(pr));
        for (std::size_t j = dom + 1; j < fc.num_components(); ++j) {
          if (coeff[p][j].is_zero()) continue;
          g.c.push_back(coeff[p][j].to_interval(pr));
          g.nu.push_back((cd - Interval::cos_pi(eig.spaces[j].theta.ratio(), pr)) * Interval::from_long(4, pr));
        }
        return g;
      };
      std::vector<detail::ExpPoly> polys;
      for (auto& e : events) polys.push_back(rebuild(e.root, prec));
      bool separated = false;
      for (int round = 0; round < 200 && !separated; ++round) {
        std::vector<std::size_t> order(events.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return events[x].zero.lo < events[y].zero.lo; });
        separated = true;
        for (std::size_t q = 0; q + 1 < order.size(); ++q) {
          auto& e1 = events[order[q]];
          auto& e2 = events[order[q + 1]];
          if (e1.zero.hi > e2.zero.lo) {
            separated = false;
            if (!detail::refine(polys[order[q]], e1.zero, prec) || !detail::refine(polys[order[q + 1]], e2.zero, prec)) {
              round = 200;
              break;
            }
          }
        }
        if (separated) {
          std::vector<detail::Event> sorted;
          for (auto o : order) sorted.push_back(events[o]);
          events = std::move(sorted);
        }
      }
      ok = separated;
    }
    if (!ok) continue;

    // follow the events, checking every step exactly
    Chamber cur = a;
    std::vector<WalkStep> steps;
    bool fine = true, done = false;
    for (const auto& e : events) {
      const auto wi = wall_index(sys, cur, e.root);
      if (!wi) {
        fine = false;
        break;
      }
      const Chamber nxt = adjacent(sys, cur, *wi);
      WalkStep st;
      st.wall = *wi;
      st.root = e.root;
      st.length_before = sys.length(conjugate_by_chamber(sys, w, cur));
      st.length_after = sys.length(conjugate_by_chamber(sys, w, nxt));
      st.digest = sign_digest(sign_vector(sys, nxt));
      if (st.length_after > st.length_before) {
        fine = false;
        break;
      }
      steps.push_back(st);
      cur = nxt;
      if (at_end(cur)) {
        done = true;
        break;
      }
    }
    if (fine && (done || at_end(cur))) {
      res.steps = std::move(steps);
      return finish(cur);
    }
  }

  if (!opt.allow_fallback) fail(ErrorKind::WalkStuck, "flow walk did not certify within the attempt budget");
  auto walls = descent_search(sys, w, a, kw);
  if (!walls) fail(ErrorKind::WalkStuck, "no non-increasing chamber path reaches a regular point of V_w");
  res.fallback = true;
  Chamber cur = a;
  for (auto i : *walls) {
    const Chamber nxt = adjacent(sys, cur, i);
    WalkStep st;
    st.wall = i;
    st.root = wall_root(sys, cur, i);
    st.length_before = sys.length(conjugate_by_chamber(sys, w, cur));
    st.length_after = sys.length(conjugate_by_chamber(sys, w, nxt));
    st.digest = sign_digest(sign_vector(sys, nxt));
    res.steps.push_back(st);
    cur = nxt;
  }
  return finish(cur);
}

inline bool in_span(const std::vector<Vec>& basis, const Vec& v) {
  Mat m(basis.begin(), basis.end());
  const std::size_t r = rank(m);
  m.push_back(v);
  return rank(m) == r;
}

/// The chain of a walk conjugates w_A into w_{A'} one simple reflection at a time.
inline bool walk_is_sound(const CoxeterSystem& sys, const Element& w, const WalkResult& r) {
  Element cur = conjugate_by_chamber(sys, w, r.start);
  Chamber c = r.start;
  for (const auto& st : r.steps) {
    const Element nxt = sys.conjugate_simple(cur, st.wall);
    if (sys.length(cur) != st.length_before || sys.length(nxt) != st.length_after) return false;
    if (st.length_after > st.length_before) return false;
    cur = nxt;
    c = adjacent(sys, c, st.wall);
  }
  if (c.x != r.end.x || cur != conjugate_by_chamber(sys, w, r.end)) return false;
  const auto eig = eigen_decomposition(sys, w);
  return in_span(eig.v_w(), r.end_point) && is_regular_in(sys.roots(), eig.v_w(), r.end_point) &&
         in_closed_chamber(sys, r.end, r.end_point);
}

// ---------------------------------------------------------------------------
// Length formulas

/// Positive roots whose hyperplane contains K.
inline std::vector<bool> containing_mask(const RootSystem& rs, const std::vector<Vec>& k) {
  std::vector<bool> m(rs.num_positive(), false);
  for (auto p : hyperplanes_containing(rs, k)) m[p] = true;
  return m;
}

/// w(K) = K and K inside V^theta.
inline bool stable_in_eigenspace(const CoxeterSystem& sys, const Element& w, const std::vector<Vec>& k,
                                 const Angle& theta) {
  const Scalar two_cos = Field::get(std::lcm(sys.roots().field()->level(), static_cast<unsigned>(theta.den)))
                             ->two_cos_pi(theta.ratio());
  const Element wi = sys.inverse(w);
  for (const auto& b : k) {
    const Vec img = sys.apply(w, b);
    if (!in_span(k, img)) return false;
    if (vec_add(img, sys.apply(wi, b)) != vec_scale(b, two_cos)) return false;
  }
  return true;
}

/// (theta/pi) #(H - H_K) as an exact rational.
inline mpq_class rotation_count(const RootSystem& rs, const std::vector<Vec>& k, const Angle& theta) {
  const std::size_t outside = rs.num_positive() - hyperplanes_containing(rs, k).size();
  return theta.ratio() * mpq_class(static_cast<long>(outside));
}

/// Hyperplanes of H_K separating A and w(A).
inline std::size_t separated_in(const CoxeterSystem& sys, const Element& w, const Chamber& a,
                                const std::vector<bool>& mask) {
  const auto sa = sign_vector(sys, a);
  const auto sb = sign_vector(sys, image_chamber(sys, w, a));
  std::size_t c = 0;
  for (std::size_t p = 0; p < sa.size(); ++p) c += mask[p] && sa[p] != sb[p];
  return c;
}

/// l(w_A) = (theta/pi) #(H - H_K) when A and w(A) lie in one component of
/// V minus H_K and the closure of A contains a regular point of K.
inline std::size_t special_length_formula(const CoxeterSystem& sys, const Element& w, const std::vector<Vec>& k,
                                          const Angle& theta, const Chamber& a) {
  const RootSystem& rs = sys.roots();
  if (k.empty() || !stable_in_eigenspace(sys, w, k, theta))
    fail(ErrorKind::HypothesisFailed, "K is not a nonzero w-stable subspace of V^theta");
  const auto mask = containing_mask(rs, k);
  if (separated_in(sys, w, a, mask) != 0)
    fail(ErrorKind::HypothesisFailed, "A and w(A) lie in different components");
  if (!closure_has_regular_point(sys, a, k)) fail(ErrorKind::HypothesisFailed, "closure of A has no regular point of K");
  const mpq_class value = rotation_count(rs, k, theta);
  if (value.get_den() != 1 || value < 0) fail(ErrorKind::TheoremViolation, "(theta/pi)#(H - H_K) is not an integer");
  const std::size_t direct = sys.length(conjugate_by_chamber(sys, w, a));
  if (direct != value.get_num().get_ui())
    fail(ErrorKind::TheoremViolation, "special length formula disagrees with the length of w_A");
  return direct;
}

struct RegularDecomposition {
  Element w_k;  // in ^J W^J with w_k(J) = J
  Element u;    // in W_J
  IndexSet j = 0;
};

/// w_A = w_{K,A} u for A whose closure contains a regular point of K.
inline RegularDecomposition decompose_at_regular(const CoxeterSystem& sys, const Element& w,
                                                 const std::vector<Vec>& k, const Angle& theta, const Chamber& a) {
  const RootSystem& rs = sys.roots();
  if (k.empty() || !stable_in_eigenspace(sys, w, k, theta))
    fail(ErrorKind::HypothesisFailed, "K is not a nonzero w-stable subspace of V^theta");
  auto v = regular_point_in(rs, k, chamber_constraints(sys, a));
  if (!v) fail(ErrorKind::HypothesisFailed, "closure of A has no regular point of K");
  RegularDecomposition out;
  for (std::size_t i = 0; i < sys.rank(); ++i)
    if (rs.pair(wall_root(sys, a, i), *v).is_zero()) out.j |= singleton(i);
  const Element wa = conjugate_by_chamber(sys, w, a);
  const auto dec = sys.coset_decompose(wa, out.j);
  out.w_k = dec.middle;
  out.u = sys.multiply(sys.multiply(sys.multiply(sys.inverse(dec.middle), dec.left), dec.middle), dec.right);
  // checks
  if (sys.multiply(out.w_k, out.u) != wa) fail(ErrorKind::TheoremViolation, "decomposition does not recompose");
  if (!sys.maps_set_to(out.w_k, out.j, out.j)) fail(ErrorKind::TheoremViolation, "w_{K,A} does not preserve J");
  for (auto i : sys.reduced_word(out.u))
    if (!in_set(out.j, i)) fail(ErrorKind::TheoremViolation, "u is not in W_J");
  const auto mask = containing_mask(rs, k);
  if (sys.length(out.u) != separated_in(sys, w, a, mask))
    fail(ErrorKind::TheoremViolation, "l(u) differs from the count of separating hyperplanes in H_K");
  const mpq_class value = rotation_count(rs, k, theta);
  if (value.get_den() != 1 || mpq_class(static_cast<long>(sys.length(out.w_k))) != value)
    fail(ErrorKind::TheoremViolation, "l(w_{K,A}) differs from (theta/pi)#(H - H_K)");
  if (sys.length(wa) != sys.length(out.u) + sys.length(out.w_k))
    fail(ErrorKind::TheoremViolation, "lengths are not additive");
  return out;
}

/// l(U) for the component U of V minus H_K containing A.
inline std::size_t component_length(const CoxeterSystem& sys, const Element& w, const std::vector<Vec>& k,
                                    const Chamber& a) {
  return separated_in(sys, w, a, containing_mask(sys.roots(), k));
}

/// l(w_A) = l(w_{A'}) = #H(A, wA)_K + (theta_0/pi)#(H - H_K) for K = V_w and
/// A' = A s_i across a wall H_0 with the hypotheses of the strong connection.
inline std::size_t strongly_connected_step(const CoxeterSystem& sys, const Element& w, const EigenDecomposition& eig,
                                           const Chamber& a, std::size_t i) {
  const RootSystem& rs = sys.roots();
  const auto& k = eig.v_w();
  const auto mask = containing_mask(rs, k);
  const std::size_t h0 = wall_root(sys, a, i);
  if (mask[h0]) fail(ErrorKind::HypothesisFailed, "A and A' lie in different components");
  // P = H_0 cap K
  std::vector<Vec> p;
  {
    Mat m;
    Vec row(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) row[j] = rs.pair(h0, k[j]);
    m.push_back(row);
    for (const auto& c : kernel(m, k.size())) p.push_back(combine(k, c, sys.rank()));
  }
  if (p.size() + 1 != k.size()) fail(ErrorKind::HypothesisFailed, "H_0 cap V_w is not a hyperplane of V_w");
  // w(P) != P
  bool moved = false;
  for (const auto& b : p)
    if (!in_span(p, sys.apply(w, b))) moved = true;
  if (!moved) fail(ErrorKind::HypothesisFailed, "w fixes H_0 cap V_w");
  if (!closure_has_regular_point(sys, a, p))
    fail(ErrorKind::HypothesisFailed, "common face does not span H_0 cap V_w");
  const Chamber b = adjacent(sys, a, i);
  const std::size_t la = sys.length(conjugate_by_chamber(sys, w, a));
  const std::size_t lb = sys.length(conjugate_by_chamber(sys, w, b));
  const mpq_class value = mpq_class(static_cast<long>(separated_in(sys, w, a, mask))) + rotation_count(rs, k, eig.theta0());
  if (la != lb || mpq_class(static_cast<long>(la)) != value)
    fail(ErrorKind::TheoremViolation, "strongly connected chambers give different lengths");
  return la;
}

inline std::size_t strongly_connected_step(const CoxeterSystem& sys, const Element& w, const Chamber& a,
                                           std::size_t i) {
  return strongly_connected_step(sys, w, eigen_decomposition(sys, w), a, i);
}

}  // namespace coxmin
