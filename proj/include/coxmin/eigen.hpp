#pragma once

// Spectral data of a twisted element on V: the angles, the real eigenspaces
// V^theta = ker(M + M^-1 - 2cos(theta)), theta_0 and V_w, regular points, and
// filtrations used for chambers in good position.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coxmin/coxeter.hpp"
#include "coxmin/interval.hpp"
#include "coxmin/linalg.hpp"

namespace coxmin {

/// theta = (num/den) pi, in lowest terms, 0 <= theta <= pi.
struct Angle {
  long num = 0;
  long den = 1;

  static Angle of(long num, long den) {
    const long g = std::gcd(num, den);
    return g ? Angle{num / g, den / g} : Angle{0, 1};
  }
  mpq_class ratio() const { return mpq_class(num, den); }
  bool is_zero() const { return num == 0; }
  bool is_pi() const { return num == den; }
  friend bool operator==(const Angle& a, const Angle& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Angle& a, const Angle& b) { return a.num * b.den < b.num * a.den; }
  std::string to_string() const {
    if (num == 0) return "0";
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

/// Least d >= 1 with a^d = 1.
inline unsigned element_order(const CoxeterSystem& sys, const Element& a) {
  const Element e = sys.identity();
  Element cur = a;
  for (unsigned d = 1;; ++d) {
    if (cur == e) return d;
    cur = sys.multiply(cur, a);
    if (d > 100000) fail(ErrorKind::SearchBound, "element order search exceeded bound");
  }
}

struct EigenSpace {
  Angle theta;
  std::size_t dim = 0;
  std::vector<Vec> basis;
};

struct EigenDecomposition {
  Element owner;
  unsigned order = 1;
  std::vector<EigenSpace> spaces;  // ascending theta, nonzero spaces only
  std::size_t theta0_index = 0;
  std::vector<std::size_t> dft_dims;  // parallel to spaces

  const Angle& theta0() const { return spaces[theta0_index].theta; }
  const std::vector<Vec>& v_w() const { return spaces[theta0_index].basis; }

  const EigenSpace* find(const Angle& t) const {
    for (const auto& s : spaces)
      if (s.theta == t) return &s;
    return nullptr;
  }
};

namespace detail {

/// Multiplicity of theta = 2 pi k / d from traces, in interval arithmetic.
inline Interval dft_dimension(const std::vector<Scalar>& traces, unsigned d, unsigned k, mpfr_prec_t prec) {
  Interval acc(prec);
  for (unsigned t = 0; t < d; ++t) {
    const Interval c = Interval::cos_pi(mpq_class(2 * static_cast<long>(k) * t, d), prec);
    acc += traces[t].to_interval(prec) * c;
  }
  const bool real_pair = !(k == 0 || 2 * k == d);
  if (real_pair) acc = acc + acc;
  return acc.divided_by(d);
}

}  // namespace detail

inline EigenDecomposition eigen_decomposition(const CoxeterSystem& sys, const Element& w) {
  EigenDecomposition out;
  out.owner = w;
  out.order = element_order(sys, w);
  const std::size_t n = sys.rank();
  const unsigned d = out.order;
  const Mat m = sys.matrix_of(w);
  const Mat minv = sys.matrix_of(sys.inverse(w));
  // Work in a field containing every 2cos(2 pi k / d).
  const Field* base = sys.roots().field();
  const Field* f = Field::get(std::lcm(base->level(), d));

  std::vector<Scalar> traces(d);
  {
    Element p = sys.identity();
    for (unsigned t = 0; t < d; ++t) {
      const Mat mt = sys.matrix_of(p);
      Scalar tr;
      for (std::size_t i = 0; i < n; ++i) tr += mt[i][i];
      traces[t] = tr;
      p = sys.multiply(p, w);
    }
  }

  std::size_t total = 0;
  for (unsigned k = 0; 2 * k <= d; ++k) {
    const Angle theta = Angle::of(2 * static_cast<long>(k), d);
    Scalar two_cos;
    try {
      two_cos = f->two_cos_pi(theta.ratio());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FieldTooSmall) throw;
      two_cos = Field::get(std::lcm(f->level(), static_cast<unsigned>(theta.den)))->two_cos_pi(theta.ratio());
    }
    Mat a = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = m[i][j] + minv[i][j];
        if (i == j) a[i][j] -= two_cos;
      }
    auto basis = kernel(a, n);
    // interval cross-check
    std::size_t dft = 0;
    for (mpfr_prec_t prec = 128;; prec *= 2) {
      const Interval est = detail::dft_dimension(traces, d, k, prec);
      if (est.radius() < 1e-6) {
        const double mid = est.midpoint();
        const double rounded = std::round(mid);
        if (std::fabs(mid - rounded) > 1e-6 || rounded < 0)
          fail(ErrorKind::MultiplicityMismatch, "trace transform is not an integer");
        dft = static_cast<std::size_t>(rounded);
        break;
      }
      if (prec > 4096) fail(ErrorKind::MultiplicityMismatch, "trace transform did not converge");
    }
    if (dft != basis.size())
      fail(ErrorKind::MultiplicityMismatch, "kernel dimension " + std::to_string(basis.size()) +
                                                " differs from trace multiplicity " + std::to_string(dft) +
                                                " at angle " + theta.to_string());
    if (basis.empty()) continue;
    total += basis.size();
    EigenSpace sp;
    sp.theta = theta;
    sp.dim = basis.size();
    sp.basis = std::move(basis);
    out.spaces.push_back(std::move(sp));
    out.dft_dims.push_back(dft);
  }
  if (total != n) fail(ErrorKind::MultiplicityMismatch, "eigenspace dimensions do not add up to the rank");
  // V^W = 0 for the span of the simple roots, so theta_0 is the smallest angle.
  out.theta0_index = 0;
  return out;
}

/// Positive roots whose hyperplane contains the span of `basis`.
inline std::vector<std::size_t> hyperplanes_containing(const RootSystem& rs, const std::vector<Vec>& basis) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < rs.num_positive(); ++p) {
    bool all = true;
    for (const auto& b : basis)
      if (!rs.pair(p, b).is_zero()) {
        all = false;
        break;
      }
    if (all) out.push_back(p);
  }
  return out;
}

/// Simple system of the reflection subgroup generated by the given positive
/// roots (which must form a closed subsystem).
inline std::vector<std::size_t> subsystem_simple_roots(const CoxeterSystem& sys, const std::vector<std::size_t>& pos) {
  std::vector<bool> inside(sys.nroots(), false);
  for (auto p : pos) inside[p] = true;
  std::vector<std::size_t> simple;
  for (auto a : pos) {
    const Perm& s = sys.roots().reflection(a);
    bool ok = true;
    for (auto b : pos)
      if (b != a && !sys.roots().is_positive(s[b])) {
        ok = false;
        break;
      }
    if (ok) simple.push_back(a);
  }
  return simple;
}

/// Longest element of the reflection subgroup W_K given its positive roots.
inline Element reflection_subgroup_longest(const CoxeterSystem& sys, const std::vector<std::size_t>& pos) {
  const auto simple = subsystem_simple_roots(sys, pos);
  Element u = sys.identity();
  for (bool moved = true; moved;) {
    moved = false;
    for (auto a : simple)
      if (sys.roots().is_positive(u.perm[a])) {
        u = sys.multiply(u, sys.reflection(a));
        moved = true;
      }
  }
  return u;
}

inline std::vector<Vec> fixed_space(const CoxeterSystem& sys, const Element& w) {
  Mat m = sys.matrix_of(w);
  for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= Scalar(1);
  return kernel(m, sys.rank());
}

/// Orthogonal complement under the invariant form.
inline std::vector<Vec> orthogonal_complement(const RootSystem& rs, const std::vector<Vec>& basis) {
  Mat rows;
  for (const auto& b : basis) rows.push_back(mat_vec(rs.gram(), b));
  return kernel(rows, rs.rank());
}

inline bool is_elliptic(const CoxeterSystem& sys, const Element& w) { return fixed_space(sys, w).empty(); }

inline bool is_quasi_elliptic(const CoxeterSystem& sys, const Element& w) {
  const auto comp = orthogonal_complement(sys.roots(), fixed_space(sys, w));
  if (comp.empty()) return sys.rank() == 0;
  return hyperplanes_containing(sys.roots(), comp).empty();
}

/// Integer tuples in shells of growing max-norm; within a shell in
/// lexicographic order. Index 0 is the first tuple of shell 1.
class SpiralTuples {
 public:
  explicit SpiralTuples(std::size_t dim) : dim_(dim) {}

  /// Calls f on tuples until it returns true or `limit` tuples were produced.
  template <class F>
  bool search(F&& f, std::size_t limit = 200000) const {
    if (dim_ == 0) return false;
    std::size_t produced = 0;
    for (long r = 1;; ++r) {
      std::vector<long> t(dim_, -r);
      for (;;) {
        long mx = 0;
        for (long v : t) mx = std::max(mx, std::labs(v));
        if (mx == r) {
          if (f(t)) return true;
          if (++produced >= limit) return false;
        }
        std::size_t k = dim_;
        while (k > 0) {
          --k;
          if (t[k] < r) {
            ++t[k];
            for (std::size_t j = k + 1; j < dim_; ++j) t[j] = -r;
            break;
          }
          if (k == 0) goto next_shell;
        }
      }
    next_shell:;
    }
  }

 private:
  std::size_t dim_;
};

/// Pairings <alpha_p, b_j> for every positive root p.
struct PairingTable {
  std::vector<Vec> rows;          // rows[p][j]
  std::vector<bool> vanishing;    // K inside H_p

  PairingTable(const RootSystem& rs, const std::vector<Vec>& basis) {
    rows.resize(rs.num_positive());
    vanishing.resize(rs.num_positive());
    for (std::size_t p = 0; p < rs.num_positive(); ++p) {
      rows[p].resize(basis.size());
      bool z = true;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        rows[p][j] = rs.pair(p, basis[j]);
        z = z && rows[p][j].is_zero();
      }
      vanishing[p] = z;
    }
  }
};

/// A regular point of K = span(basis) satisfying sign(p) * <alpha_p, v> >= 0
/// for the given (positive root, sign) constraints. Returns the coefficient
/// vector relative to `basis`.
inline std::optional<Vec> regular_point_coeffs(const RootSystem& rs, const std::vector<Vec>& basis,
                                               const std::vector<std::pair<std::size_t, int>>& constraints,
                                               std::size_t skip = 0) {
  const std::size_t m = basis.size();
  if (m == 0) return std::nullopt;
  PairingTable pt(rs, basis);
  std::vector<Vec> strict;
  for (auto [p, s] : constraints) {
    if (pt.vanishing[p]) continue;
    strict.push_back(s > 0 ? pt.rows[p] : vec_scale(pt.rows[p], Scalar(-1)));
  }
  Vec t0(m);
  if (!strict.empty()) {
    auto t = strict_feasible(strict, m);
    if (!t) return std::nullopt;
    t0 = *t;
  }
  // Perturb t0 inside the open cone so it avoids every remaining hyperplane.
  std::vector<Scalar> base_vals(rs.num_positive());
  for (std::size_t p = 0; p < rs.num_positive(); ++p)
    if (!pt.vanishing[p]) base_vals[p] = dot(pt.rows[p], t0);
  std::optional<Vec> result;
  std::size_t seen = 0;
  SpiralTuples(m).search([&](const std::vector<long>& tup) {
    Vec u(m);
    for (std::size_t j = 0; j < m; ++j) u[j] = Scalar(tup[j]);
    // roots vanishing at t0 must be nonzero along u
    std::vector<Scalar> du(rs.num_positive());
    for (std::size_t p = 0; p < rs.num_positive(); ++p) {
      if (pt.vanishing[p]) continue;
      du[p] = dot(pt.rows[p], u);
      if (base_vals[p].is_zero() && du[p].is_zero()) return false;
    }
    if (strict.empty() && seen++ < skip) return false;
    // eps below every positive threshold where a sign could change
    std::optional<Scalar> bound;
    auto consider = [&](const Scalar& b) {
      if (b.sign() > 0 && (!bound || b < *bound)) bound = b;
    };
    for (std::size_t p = 0; p < rs.num_positive(); ++p) {
      if (pt.vanishing[p] || base_vals[p].is_zero() || du[p].is_zero()) continue;
      consider(-base_vals[p] / du[p]);
    }
    Scalar eps = strict.empty() ? Scalar(1) : Scalar(mpq_class(1, 2));
    if (!strict.empty()) {
      while (bound && eps >= *bound) eps = eps * Scalar(mpq_class(1, 2));
    } else if (bound && eps >= *bound) {
      // v = u alone already works when t0 = 0; bound is empty in that case
      eps = *bound * Scalar(mpq_class(1, 2));
    }
    Vec t(m);
    for (std::size_t j = 0; j < m; ++j) t[j] = t0[j] + eps * u[j];
    // exact verification
    for (std::size_t p = 0; p < rs.num_positive(); ++p)
      if (!pt.vanishing[p] && dot(pt.rows[p], t).is_zero()) return false;
    for (const auto& row : strict)
      if (dot(row, t).sign() <= 0) return false;
    result = t;
    return true;
  });
  return result;
}

inline std::optional<Vec> regular_point_in(const RootSystem& rs, const std::vector<Vec>& basis,
                                           const std::vector<std::pair<std::size_t, int>>& constraints,
                                           std::size_t skip = 0) {
  auto t = regular_point_coeffs(rs, basis, constraints, skip);
  if (!t) return std::nullopt;
  return combine(basis, *t, rs.rank());
}

/// The wall constraints of the closed chamber A.
inline std::vector<std::pair<std::size_t, int>> chamber_constraints(const CoxeterSystem& sys, const Chamber& a) {
  std::vector<std::pair<std::size_t, int>> cons;
  for (std::size_t i = 0; i < sys.rank(); ++i) {
    const std::size_t r = a.x.perm[i];
    cons.emplace_back(sys.roots().positive_part(r), sys.roots().is_positive(r) ? 1 : -1);
  }
  return cons;
}

/// Constraints for the closure of the component of V minus the hyperplanes
/// `roots` that contains A.
inline std::vector<std::pair<std::size_t, int>> component_constraints(const CoxeterSystem& sys, const Chamber& a,
                                                                      const std::vector<std::size_t>& roots) {
  const Perm inv = invert(a.x.perm);
  std::vector<std::pair<std::size_t, int>> cons;
  for (auto p : roots) cons.emplace_back(p, inv[p] < sys.npos() ? 1 : -1);
  return cons;
}

/// Regular point of K, optionally inside the closed chamber.
inline Vec regular_point(const CoxeterSystem& sys, const std::vector<Vec>& basis,
                         const std::optional<Chamber>& inside = std::nullopt) {
  if (basis.empty()) fail(ErrorKind::NoRegularPoint, "the zero subspace has no regular point");
  auto cons = inside ? chamber_constraints(sys, *inside) : std::vector<std::pair<std::size_t, int>>{};
  auto v = regular_point_in(sys.roots(), basis, cons);
  if (!v) fail(ErrorKind::NoRegularPoint, "no regular point of the subspace in the closed chamber");
  return *v;
}

inline bool is_regular_in(const RootSystem& rs, const PairingTable& pt, const Vec& v) {
  for (std::size_t p = 0; p < rs.num_positive(); ++p)
    if (!pt.vanishing[p] && rs.pair(p, v).is_zero()) return false;
  return true;
}

inline bool is_regular_in(const RootSystem& rs, const std::vector<Vec>& basis, const Vec& v) {
  PairingTable pt(rs, basis);
  for (std::size_t p = 0; p < rs.num_positive(); ++p)
    if (!pt.vanishing[p] && rs.pair(p, v).is_zero()) return false;
  return true;
}

inline bool in_closed_chamber(const CoxeterSystem& sys, const Chamber& a, const Vec& v) {
  for (auto [p, s] : chamber_constraints(sys, a))
    if (sys.roots().pair(p, v).sign() * s < 0) return false;
  return true;
}

/// Same test with the pairings of K = span of dim vectors precomputed.
inline bool closure_has_regular_point(const CoxeterSystem& sys, const Chamber& a, const PairingTable& pt,
                                      std::size_t dim) {
  if (dim == 0) return true;
  std::vector<Vec> strict;
  for (auto [p, s] : chamber_constraints(sys, a))
    if (!pt.vanishing[p]) strict.push_back(s > 0 ? pt.rows[p] : vec_scale(pt.rows[p], Scalar(-1)));
  return strict.empty() || strict_feasible(strict, dim).has_value();
}

inline bool closure_has_regular_point(const CoxeterSystem& sys, const Chamber& a, const std::vector<Vec>& basis) {
  if (basis.empty()) return true;
  return closure_has_regular_point(sys, a, PairingTable(sys.roots(), basis), basis.size());
}

struct Filtration {
  std::vector<Angle> angles;                      // theta_1 < ... < theta_r
  std::vector<std::vector<Vec>> spaces;           // F_0 = 0, F_1, ..., F_r
  std::vector<std::vector<std::size_t>> hyper;    // positive roots containing F_i
  std::vector<std::size_t> irredundant;           // indices 1..r where W_i shrinks
  bool admissible = false;

  std::vector<Angle> irredundant_angles() const {
    std::vector<Angle> out;
    for (auto i : irredundant) out.push_back(angles[i - 1]);
    return out;
  }
};

inline Filtration admissible_filtration(const CoxeterSystem& sys, const EigenDecomposition& eig,
                                        const std::vector<Angle>& angles) {
  Filtration f;
  f.angles = angles;
  for (std::size_t i = 1; i < angles.size(); ++i)
    if (!(angles[i - 1] < angles[i])) fail(ErrorKind::InvalidInput, "angles must be strictly increasing");
  const RootSystem& rs = sys.roots();
  f.spaces.push_back({});
  std::vector<std::size_t> all(rs.num_positive());
  std::iota(all.begin(), all.end(), 0);
  f.hyper.push_back(all);
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    // an angle outside Gamma contributes the zero space
    if (const EigenSpace* sp = eig.find(angles[i]))
      for (const auto& b : sp->basis) gens.push_back(b);
    f.spaces.push_back(gens);
    f.hyper.push_back(hyperplanes_containing(rs, gens));
    if (f.hyper.back() != f.hyper[f.hyper.size() - 2]) f.irredundant.push_back(i + 1);
  }
  f.admissible = !angles.empty() && f.hyper.back().empty();
  return f;
}

inline std::vector<Angle> all_angles(const EigenDecomposition& eig) {
  std::vector<Angle> out;
  for (const auto& s : eig.spaces) out.push_back(s.theta);
  return out;
}

inline std::vector<Angle> nonzero_angles(const EigenDecomposition& eig) {
  std::vector<Angle> out;
  for (const auto& s : eig.spaces)
    if (!s.theta.is_zero()) out.push_back(s.theta);
  return out;
}

/// Chamber with sign pattern given by the first nonzero of <alpha, points[j]>.
inline Chamber chamber_from_lex_points(const CoxeterSystem& sys, const std::vector<Vec>& points) {
  const RootSystem& rs = sys.roots();
  std::vector<int> sign(rs.num_positive(), 0);
  for (std::size_t p = 0; p < rs.num_positive(); ++p) {
    for (const auto& x : points) {
      const int s = rs.pair(p, x).sign();
      if (s != 0) {
        sign[p] = s;
        break;
      }
    }
    if (sign[p] == 0) fail(ErrorKind::ConstructionFailed, "lexicographic signs leave a root undecided");
  }
  Element x = sys.identity();
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      const std::size_t r = x.perm[i];
      const int s = rs.is_positive(r) ? sign[r] : -sign[rs.negate(r)];
      if (s < 0) {
        x = sys.right_simple(x, i);
        moved = true;
      }
    }
  }
  return Chamber{x};
}

/// For each i < r: the closure of the component of A for hyper[i] contains a
/// regular point of F_{i+1}.
inline bool is_good_position(const CoxeterSystem& sys, const Filtration& f, const Chamber& a) {
  for (std::size_t i = 0; i + 1 < f.spaces.size(); ++i) {
    const auto cons = component_constraints(sys, a, f.hyper[i]);
    PairingTable pt(sys.roots(), f.spaces[i + 1]);
    std::vector<Vec> strict;
    for (auto [p, s] : cons)
      if (!pt.vanishing[p]) strict.push_back(s > 0 ? pt.rows[p] : vec_scale(pt.rows[p], Scalar(-1)));
    if (!strict.empty() && !strict_feasible(strict, f.spaces[i + 1].size())) return false;
  }
  return true;
}

inline Chamber good_position_chamber(const CoxeterSystem& sys, const Filtration& f) {
  if (!f.admissible) fail(ErrorKind::NotAdmissible, "filtration is not admissible");
  for (std::size_t attempt = 0; attempt < 4; ++attempt) {
    std::vector<Vec> pts;
    for (std::size_t i = 1; i < f.spaces.size(); ++i) {
      auto v = regular_point_in(sys.roots(), f.spaces[i], {}, attempt);
      if (!v) fail(ErrorKind::ConstructionFailed, "no regular point found in a filtration step");
      pts.push_back(*v);
    }
    if (auto v = regular_point_in(sys.roots(), identity_matrix(sys.rank()), {}, attempt)) pts.push_back(*v);
    const Chamber a = chamber_from_lex_points(sys, pts);
    if (is_good_position(sys, f, a)) return a;
  }
  fail(ErrorKind::ConstructionFailed, "good-position chamber failed verification");
}

}  // namespace coxmin
