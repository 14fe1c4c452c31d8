#pragma once

// Positive braid monoid of a finite Coxeter system extended by the twist,
// with the left-greedy normal form over the simple elements j(W).

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coxmin/chamber_walk.hpp"

namespace coxmin {

/// delta^twist followed by a positive word.
struct TwistedBraid {
  unsigned twist = 0;
  std::vector<std::size_t> word;
};

struct NormalForm {
  unsigned twist = 0;
  std::vector<Element> factors;  // left-weighted, none trivial

  friend bool operator==(const NormalForm& a, const NormalForm& b) {
    return a.twist == b.twist && a.factors == b.factors;
  }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(twist);
    for (const auto& f : factors) {
      mix(0xff);
      for (auto p : f.perm) mix(p);
    }
    return h;
  }
};

inline TwistedBraid lift(const CoxeterSystem& sys, const Element& w) {
  return TwistedBraid{w.twist % sys.twist_order(), sys.reduced_word(w)};
}

/// (delta^a F)(delta^b G) = delta^{a+b} delta^{-b}(F) G
inline TwistedBraid multiply(const CoxeterSystem& sys, const TwistedBraid& a, const TwistedBraid& b) {
  const unsigned ord = sys.twist_order();
  TwistedBraid out;
  out.twist = (a.twist + b.twist) % ord;
  const unsigned back = (ord - b.twist % ord) % ord;
  for (auto i : a.word) out.word.push_back(sys.twist_index(back, i));
  out.word.insert(out.word.end(), b.word.begin(), b.word.end());
  return out;
}

inline TwistedBraid power(const CoxeterSystem& sys, const TwistedBraid& b, std::size_t k) {
  TwistedBraid out;
  for (std::size_t i = 0; i < k; ++i) out = multiply(sys, out, b);
  return out;
}

/// Untwisted product of lifts x_0^{e_0} x_1^{e_1} ...
inline TwistedBraid lift_product(const CoxeterSystem& sys, const std::vector<std::pair<Element, std::size_t>>& parts) {
  TwistedBraid out;
  for (const auto& [x, e] : parts) {
    const auto w = sys.reduced_word(x);
    for (std::size_t i = 0; i < e; ++i) out.word.insert(out.word.end(), w.begin(), w.end());
  }
  return out;
}

namespace detail {

// move left descents of b into a until L(b) is inside R(a)
inline void left_weight(const CoxeterSystem& sys, Element& a, Element& b) {
  for (;;) {
    const IndexSet move = sys.left_descents(b) & ~sys.right_descents(a);
    if (move == 0) return;
    const std::size_t t = set_members(move).front();
    a = sys.right_simple(a, t);
    b = sys.left_simple(t, b);
  }
}

inline bool is_trivial(const CoxeterSystem& sys, const Element& x) { return sys.length(x) == 0; }

}  // namespace detail

inline bool left_weighted(const CoxeterSystem& sys, const Element& a, const Element& b) {
  return (sys.left_descents(b) & ~sys.right_descents(a)) == 0;
}

inline NormalForm normal_form(const CoxeterSystem& sys, const TwistedBraid& b) {
  NormalForm nf;
  nf.twist = b.twist % sys.twist_order();
  std::vector<Element>& f = nf.factors;
  for (auto t : b.word) {
    // right multiplication by s_t sweeps leftwards once
    Element carry = sys.simple(t);
    std::vector<Element> tail;
    for (std::size_t j = f.size(); j-- > 0;) {
      Element a = f[j];
      detail::left_weight(sys, a, carry);
      tail.push_back(carry);
      carry = a;
    }
    f.clear();
    f.push_back(carry);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
      if (!detail::is_trivial(sys, *it)) f.push_back(*it);
  }
  // repeated sweeps until every adjacent pair is left-weighted
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j + 1 < f.size(); ++j)
      if (!left_weighted(sys, f[j], f[j + 1])) {
        detail::left_weight(sys, f[j], f[j + 1]);
        changed = true;
      }
    std::vector<Element> kept;
    for (auto& x : f)
      if (!detail::is_trivial(sys, x)) kept.push_back(x);
    if (kept.size() != f.size()) changed = true;
    f = std::move(kept);
  }
  return nf;
}

inline TwistedBraid expand(const CoxeterSystem& sys, const NormalForm& nf) {
  TwistedBraid b{nf.twist, {}};
  for (const auto& x : nf.factors) {
    const auto w = sys.reduced_word(x);
    b.word.insert(b.word.end(), w.begin(), w.end());
  }
  return b;
}

inline bool braid_equal(const CoxeterSystem& sys, const TwistedBraid& a, const TwistedBraid& b) {
  return normal_form(sys, a) == normal_form(sys, b);
}

/// Leading factors equal to w_0.
inline std::size_t infimum(const CoxeterSystem& sys, const NormalForm& nf) {
  const Element w0 = sys.longest();
  std::size_t k = 0;
  while (k < nf.factors.size() && nf.factors[k] == w0) ++k;
  return k;
}

inline bool divisible_by_delta_squared(const CoxeterSystem& sys, const TwistedBraid& b) {
  return infimum(sys, normal_form(sys, b)) >= 2;
}

// ---------------------------------------------------------------------------
// Good elements

struct GoodCertificate {
  unsigned order = 0;                   // d
  std::vector<IndexSet> subsets;        // S_0 > S_1 > ...
  std::vector<std::size_t> exponents;   // d_0, d_1, ...
  unsigned sigma = 0;                   // twist on the right-hand side
  bool dropped_zero = false;            // a zero leading exponent was removed
  bool very_good = false;
  std::optional<unsigned> sigma_half;   // for d even
  std::uint64_t lhs_digest = 0, rhs_digest = 0;
};

/// Simple reflections whose roots vanish on F, when W_F is standard parabolic.
inline IndexSet standard_support(const CoxeterSystem& sys, const std::vector<Vec>& f,
                                 const std::vector<std::size_t>& hyper) {
  IndexSet s = 0;
  for (std::size_t i = 0; i < sys.rank(); ++i) {
    bool vanish = true;
    for (const auto& b : f) vanish = vanish && sys.roots().pair(i, b).is_zero();
    if (vanish) s |= singleton(i);
  }
  if (sys.length(sys.parabolic_max(s)) != hyper.size())
    fail(ErrorKind::NotGoodPosition, "reflection subgroup of a filtration step is not standard parabolic");
  return s;
}

/// w^d = sigma w_0^{d theta_1/pi} w_1^{d(theta_2 - theta_1)/pi} ... for w whose
/// fundamental chamber is in good position with respect to the filtration f.
inline GoodCertificate certify_good(const CoxeterSystem& sys, const Element& w, const Filtration& f) {
  if (!f.admissible) fail(ErrorKind::NotAdmissible, "filtration is not admissible");
  if (!is_good_position(sys, f, Chamber{sys.identity()}))
    fail(ErrorKind::NotGoodPosition, "fundamental chamber is not in good position");
  GoodCertificate cert;
  cert.order = element_order(sys, w);
  const mpq_class d(cert.order);
  // W_{i_0} = W, then the irredundant steps
  std::vector<std::size_t> steps{0};
  for (auto i : f.irredundant) steps.push_back(i);
  mpq_class prev(0);
  for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
    const mpq_class next = f.angles[steps[j + 1] - 1].ratio();
    const mpq_class e = d * (next - prev);
    prev = next;
    if (e.get_den() != 1 || e.get_num() % 2 != 0 || e < 0)
      fail(ErrorKind::TheoremViolation, "exponent is not an even non-negative integer");
    if (e == 0) {
      if (j != 0) fail(ErrorKind::TheoremViolation, "zero exponent after the first step");
      cert.dropped_zero = true;
      continue;
    }
    cert.subsets.push_back(standard_support(sys, f.spaces[steps[j]], f.hyper[steps[j]]));
    cert.exponents.push_back(e.get_num().get_ui());
  }
  for (std::size_t j = 1; j < cert.subsets.size(); ++j)
    if ((cert.subsets[j] & ~cert.subsets[j - 1]) != 0 || cert.subsets[j] == cert.subsets[j - 1])
      fail(ErrorKind::TheoremViolation, "subsets are not strictly decreasing");
  std::size_t letters = 0;
  std::vector<std::pair<Element, std::size_t>> parts, halves;
  for (std::size_t j = 0; j < cert.subsets.size(); ++j) {
    const Element wj = sys.parabolic_max(cert.subsets[j]);
    letters += cert.exponents[j] * sys.length(wj);
    parts.emplace_back(wj, cert.exponents[j]);
    halves.emplace_back(wj, cert.exponents[j] / 2);
  }
  if (letters != cert.order * sys.length(w)) fail(ErrorKind::TheoremViolation, "letter counts of the two sides differ");

  const TwistedBraid one = lift(sys, w);
  const NormalForm lhs = normal_form(sys, power(sys, one, cert.order));
  TwistedBraid rhs = lift_product(sys, parts);
  rhs.twist = lhs.twist;
  cert.sigma = lhs.twist;
  const NormalForm rnf = normal_form(sys, rhs);
  cert.lhs_digest = lhs.digest();
  cert.rhs_digest = rnf.digest();
  if (lhs != rnf) fail(ErrorKind::IdentityFailed, "power of w differs from the predicted product");
  if (cert.order % 2 == 0) {
    const NormalForm lh = normal_form(sys, power(sys, one, cert.order / 2));
    TwistedBraid rh = lift_product(sys, halves);
    rh.twist = lh.twist;
    if (normal_form(sys, rh) != lh) fail(ErrorKind::IdentityFailed, "half power differs from the predicted product");
    cert.sigma_half = lh.twist;
    cert.very_good = true;
  }
  return cert;
}

struct GoodElement {
  Chamber chamber;
  Element element;  // w_A
  Filtration filtration;
  GoodCertificate certificate;
};

namespace detail {

inline GoodElement good_conjugate(const CoxeterSystem& sys, const Element& w, bool nonzero_only) {
  const auto eig = eigen_decomposition(sys, w);
  const auto angles = nonzero_only ? nonzero_angles(eig) : all_angles(eig);
  const Filtration f = admissible_filtration(sys, eig, angles);
  GoodElement g;
  g.chamber = good_position_chamber(sys, f);
  g.element = conjugate_by_chamber(sys, w, g.chamber);
  g.filtration = admissible_filtration(sys, eigen_decomposition(sys, g.element), angles);
  g.certificate = certify_good(sys, g.element, g.filtration);
  return g;
}

}  // namespace detail

/// Conjugates w by a chamber in good position for all of its angles and
/// certifies the result, which must be of minimal length.
inline GoodElement good_min_element(const CoxeterSystem& sys, const Element& w, std::size_t min_length) {
  GoodElement g = detail::good_conjugate(sys, w, false);
  if (sys.length(g.element) != min_length)
    fail(ErrorKind::TheoremViolation, "good-position conjugate is not of minimal length");
  return g;
}

/// Same with the nonzero angles only; for quasi-elliptic w the power w^d is
/// then left-divisible by the square of w_0.
inline GoodElement quasi_elliptic_good_element(const CoxeterSystem& sys, const Element& w) {
  if (!is_quasi_elliptic(sys, w)) fail(ErrorKind::HypothesisFailed, "element is not quasi-elliptic");
  GoodElement g = detail::good_conjugate(sys, w, true);
  if (!divisible_by_delta_squared(sys, power(sys, lift(sys, g.element), g.certificate.order)))
    fail(ErrorKind::TheoremViolation, "power is not divisible by the square of w_0");
  return g;
}

struct RotationReport {
  std::size_t exponent = 0;  // d theta / 2 pi
  Element w1;
  unsigned sigma = 0;
  std::optional<unsigned> sigma_half;
};

/// w^d = sigma (w_1 w_0 . w_0 w_1)^{d theta/2pi} with w_1 the longest element
/// of the reflection subgroup fixing K = V^theta pointwise.
inline RotationReport verify_rotation_identity(const CoxeterSystem& sys, const Element& w, const EigenSpace& k,
                                               std::size_t d = 0) {
  const RootSystem& rs = sys.roots();
  if (d == 0) d = element_order(sys, w);
  const mpq_class p = mpq_class(static_cast<long>(d)) * k.theta.ratio() / 2;
  if (p.get_den() != 1) fail(ErrorKind::HypothesisFailed, "d theta / 2 pi is not an integer");
  const Chamber c{sys.identity()};
  const auto mask = containing_mask(rs, k.basis);
  if (separated_in(sys, w, c, mask) != 0)
    fail(ErrorKind::HypothesisFailed, "C and w(C) lie in different components");
  if (!closure_has_regular_point(sys, c, k.basis)) fail(ErrorKind::HypothesisFailed, "closure of C has no regular point of K");
  RotationReport r;
  r.exponent = p.get_num().get_ui();
  const auto hyper = hyperplanes_containing(rs, k.basis);
  r.w1 = reflection_subgroup_longest(sys, hyper);
  if (r.w1 != sys.parabolic_max(standard_support(sys, k.basis, hyper)))
    fail(ErrorKind::HypothesisFailed, "W_K is not standard parabolic");
  const Element w0 = sys.longest();
  const Element a = sys.multiply(r.w1, w0), b = sys.multiply(w0, r.w1);
  const TwistedBraid one = lift(sys, w);
  const NormalForm lhs = normal_form(sys, power(sys, one, d));
  std::vector<std::pair<Element, std::size_t>> parts;
  for (std::size_t i = 0; i < r.exponent; ++i) {
    parts.emplace_back(a, 1);
    parts.emplace_back(b, 1);
  }
  TwistedBraid rhs = lift_product(sys, parts);
  rhs.twist = lhs.twist;
  r.sigma = lhs.twist;
  if (normal_form(sys, rhs) != lhs) fail(ErrorKind::IdentityFailed, "rotation identity fails");
  if (sys.twist_conjugate(r.sigma, r.w1) != r.w1) fail(ErrorKind::IdentityFailed, "sigma does not fix w_1");
  if (d % 2 == 0 && r.exponent % 2 == 1) {
    const NormalForm lh = normal_form(sys, power(sys, one, d / 2));
    std::vector<std::pair<Element, std::size_t>> hp{{b, 1}};
    for (std::size_t i = 0; i < (r.exponent - 1) / 2; ++i) {
      hp.emplace_back(a, 1);
      hp.emplace_back(b, 1);
    }
    TwistedBraid rh = lift_product(sys, hp);
    rh.twist = lh.twist;
    if (normal_form(sys, rh) != lh) fail(ErrorKind::IdentityFailed, "half-power rotation identity fails");
    if (sys.twist_conjugate(lh.twist, b) != a) fail(ErrorKind::IdentityFailed, "sigma' does not carry w_0 w_1 to w_1 w_0");
    r.sigma_half = lh.twist;
  }
  return r;
}

}  // namespace coxmin
