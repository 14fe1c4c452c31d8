#pragma once

// Exact arithmetic in the real cyclotomic fields Q(c), c = 2cos(pi/L).
//
// A Field is identified by its level L and owns the minimal polynomial of c.
// Fields live in a process-wide registry and are never destroyed, so scalars
// store a plain pointer. Mixed-level arithmetic embeds both operands into the
// field of level lcm(L1, L2) using c_L = D_{L'/L}(c_{L'}), where D_k is the
// polynomial with D_k(2cos t) = 2cos(kt).

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxmin/error.hpp"
#include "coxmin/interval.hpp"

namespace coxmin {

/// Dense polynomial over Q; entry i is the coefficient of x^i.
using QPoly = std::vector<mpq_class>;

namespace poly {

inline void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline QPoly scale(const QPoly& a, const mpq_class& s) {
  if (sgn(s) == 0) return {};
  QPoly r(a);
  for (auto& c : r) c *= s;
  return r;
}

/// Euclidean division a = q*b + r with deg r < deg b. b must be nonzero.
inline void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  trim(r);
  q.clear();
  if (r.size() < b.size()) return;
  q.assign(r.size() - b.size() + 1, mpq_class(0));
  const mpq_class lead = b.back();
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const mpq_class f = r.back() / lead;
    q[shift] = f;
    for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= f * b[j];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

inline QPoly mod(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

/// D_k with D_0 = 2, D_1 = x, D_{k+1} = x D_k - D_{k-1}.
inline QPoly chebyshev_d(unsigned k) {
  QPoly prev{mpq_class(2)};
  if (k == 0) return prev;
  QPoly cur{mpq_class(0), mpq_class(1)};
  const QPoly x{mpq_class(0), mpq_class(1)};
  for (unsigned i = 1; i < k; ++i) {
    QPoly next = sub(mul(x, cur), prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline int mobius(unsigned n) {
  int result = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

/// n-th cyclotomic polynomial via the Moebius product of x^d - 1.
inline QPoly cyclotomic(unsigned n) {
  QPoly num{mpq_class(1)};
  QPoly den{mpq_class(1)};
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(n / d);
    if (mu == 0) continue;
    QPoly f(d + 1, mpq_class(0));
    f[0] = -1;
    f[d] = 1;
    if (mu > 0)
      num = mul(num, f);
    else
      den = mul(den, f);
  }
  QPoly q, r;
  divmod(num, den, q, r);
  return q;
}

/// Minimal polynomial of 2cos(2pi/n).
inline QPoly minimal_poly_two_cos(unsigned n) {
  if (n == 1) return {mpq_class(-2), mpq_class(1)};
  if (n == 2) return {mpq_class(2), mpq_class(1)};
  const QPoly phi = cyclotomic(n);
  const std::size_t m = (phi.size() - 1) / 2;
  QPoly psi{phi[m]};
  for (std::size_t k = 1; k <= m; ++k)
    psi = add(psi, scale(chebyshev_d(static_cast<unsigned>(k)), phi[m + k]));
  return psi;
}

}  // namespace poly

class Scalar;

/// The real field Q(2cos(pi/L)).
class Field {
 public:
  static const Field* get(unsigned level);
  static const Field* rational() { return get(1); }

  unsigned level() const { return level_; }
  std::size_t degree() const { return minpoly_.size() - 1; }
  const QPoly& minpoly() const { return minpoly_; }

  /// Floating approximation of the generator, used only by the fast sign path.
  double generator_value() const { return generator_double_; }

  Interval generator_interval(mpfr_prec_t prec) const {
    if (level_ == 1) return Interval::from_long(-2, prec);
    Interval c = Interval::cos_pi(mpq_class(1, level_), prec);
    return c + c;
  }

  void reduce(QPoly& p) const {
    poly::trim(p);
    if (p.size() > degree()) p = poly::mod(p, minpoly_);
  }

  /// 2cos(q*pi) as an element of this field; throws FieldTooSmall if the
  /// value does not belong to it.
  Scalar two_cos_pi(const mpq_class& q) const;

  /// Image of this field's generator inside `target` (level must divide).
  const QPoly& generator_image_in(const Field* target) const;

 private:
  explicit Field(unsigned level);

  unsigned level_;
  QPoly minpoly_;
  double generator_double_;
  mutable std::mutex embed_mutex_;
  mutable std::map<unsigned, QPoly> embed_cache_;
};

/// Element of Q(2cos(pi/L)), stored as a reduced coefficient vector in the
/// power basis of the generator. Zero is the empty vector. Default-constructed
/// scalars are the rational zero; rationals embed into any field for free.
class Scalar {
 public:
  Scalar() : field_(Field::rational()) {}
  Scalar(long v) : field_(Field::rational()) {  // NOLINT(google-explicit-constructor)
    if (v != 0) coeffs_.push_back(mpq_class(v));
  }
  Scalar(const mpq_class& v) : field_(Field::rational()) {  // NOLINT
    if (sgn(v) != 0) coeffs_.push_back(v);
  }
  Scalar(const Field* field, const mpq_class& v) : field_(field) {
    if (sgn(v) != 0) coeffs_.push_back(v);
  }
  Scalar(const Field* field, QPoly coeffs) : field_(field), coeffs_(std::move(coeffs)) {
    field_->reduce(coeffs_);
  }

  static Scalar generator(const Field* field) {
    return Scalar(field, QPoly{mpq_class(0), mpq_class(1)});
  }

  const Field* field() const { return field_; }
  const QPoly& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_rational() const { return coeffs_.size() <= 1; }
  mpq_class rational_value() const { return coeffs_.empty() ? mpq_class(0) : coeffs_[0]; }

  /// Re-express in a field whose level is a multiple of this one's.
  Scalar embedded_in(const Field* target) const {
    if (target == field_) return *this;
    if (target->level() % field_->level() != 0)
      fail(ErrorKind::FieldTooSmall, "cannot embed level " + std::to_string(field_->level()) +
                                         " into level " + std::to_string(target->level()));
    if (is_rational()) {
      Scalar r;
      r.field_ = target;
      r.coeffs_ = coeffs_;
      return r;
    }
    const QPoly& image = field_->generator_image_in(target);
    QPoly acc;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      acc = poly::mul(acc, image);
      acc = poly::add(acc, QPoly{coeffs_[i]});
      target->reduce(acc);
    }
    return Scalar(target, std::move(acc));
  }

  static const Field* common_field(const Field* a, const Field* b) {
    if (a == b) return a;
    const unsigned l = std::lcm(a->level(), b->level());
    return Field::get(l);
  }

  Scalar operator-() const {
    Scalar r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Scalar& operator+=(const Scalar& o) {
    if (o.field_ != field_) return *this = *this + o;
    coeffs_ = poly::add(coeffs_, o.coeffs_);
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    if (o.field_ != field_) return *this = *this - o;
    coeffs_ = poly::sub(coeffs_, o.coeffs_);
    return *this;
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.field_ == b.field_) return Scalar(a.field_, poly::add(a.coeffs_, b.coeffs_));
    const Field* f = pick_field(a, b);
    return Scalar(f, poly::add(a.embedded_in(f).coeffs_, b.embedded_in(f).coeffs_));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.field_ == b.field_) return Scalar(a.field_, poly::sub(a.coeffs_, b.coeffs_));
    const Field* f = pick_field(a, b);
    return Scalar(f, poly::sub(a.embedded_in(f).coeffs_, b.embedded_in(f).coeffs_));
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_zero() || b.is_zero()) return Scalar(pick_field(a, b), mpq_class(0));
    if (a.is_rational()) return Scalar(b.field_ == a.field_ ? a.field_ : pick_field(a, b),
                                       poly::scale(b.embedded_in(pick_field(a, b)).coeffs_, a.coeffs_[0]));
    if (b.is_rational()) return Scalar(pick_field(a, b),
                                       poly::scale(a.embedded_in(pick_field(a, b)).coeffs_, b.coeffs_[0]));
    const Field* f = pick_field(a, b);
    if (a.field_ == f && b.field_ == f) return Scalar(f, poly::mul(a.coeffs_, b.coeffs_));
    return Scalar(f, poly::mul(a.embedded_in(f).coeffs_, b.embedded_in(f).coeffs_));
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  Scalar inverse() const {
    if (is_zero()) fail(ErrorKind::InvalidInput, "division by zero in number field");
    if (is_rational()) return Scalar(field_, mpq_class(1) / coeffs_[0]);
    // Extended Euclid: s*a + t*m = g with g a nonzero constant.
    QPoly r0 = field_->minpoly(), r1 = coeffs_;
    QPoly s0{}, s1{mpq_class(1)};
    while (r1.size() > 1) {
      QPoly q, r;
      poly::divmod(r0, r1, q, r);
      QPoly s = poly::sub(s0, poly::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    // r1 is a nonzero constant because the minimal polynomial is irreducible.
    return Scalar(field_, poly::scale(s1, mpq_class(1) / r1[0]));
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return (a - b).sign() >= 0; }

  /// Exact sign. A nonzero reduced element is a nonzero real number, so
  /// refining the enclosure always terminates.
  int sign() const {
    if (coeffs_.empty()) return 0;
    if (coeffs_.size() == 1) return sgn(coeffs_[0]);
    // Fast path: double Horner with a bound far above its rounding error.
    const double c = field_->generator_value();
    double value = 0.0, magnitude = 0.0, cpow = 1.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) value = value * c + coeffs_[i].get_d();
    for (const auto& a : coeffs_) {
      magnitude += std::fabs(a.get_d()) * cpow;
      cpow *= 2.0;
    }
    if (std::isfinite(value) && std::fabs(value) > 1e-10 * magnitude) return value > 0 ? 1 : -1;
    for (mpfr_prec_t prec = 128;; prec *= 2) {
      const int s = to_interval(prec).sign();
      if (s != 0) return s;
    }
  }

  Interval to_interval(mpfr_prec_t prec = Interval::kDefaultPrecision) const {
    if (coeffs_.empty()) return Interval(prec);
    const Interval c = field_->generator_interval(prec);
    Interval acc = Interval::from_rational(coeffs_.back(), prec);
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;)
      acc = acc * c + Interval::from_rational(coeffs_[i], prec);
    return acc;
  }

  double to_double() const { return to_interval(64).midpoint(); }

  /// Human readable form, e.g. "1/2 + 3c - c^2" where c is the generator.
  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (sgn(coeffs_[i]) == 0) continue;
      mpq_class a = coeffs_[i];
      if (!first) {
        os << (a < 0 ? " - " : " + ");
        a = abs(a);
      }
      if (i == 0 || a != 1 || (first && a == -1)) {
        if (i > 0 && a == -1) os << "-";
        else os << a.get_str();
      }
      if (i >= 1) os << "c";
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os.str();
  }

  /// Canonical key, stable across runs, used for hashing vectors of scalars.
  std::string key() const {
    std::string k;
    for (const auto& c : coeffs_) {
      k += c.get_str();
      k += ',';
    }
    return k;
  }

 private:
  static const Field* pick_field(const Scalar& a, const Scalar& b) {
    if (a.field_ == b.field_) return a.field_;
    if (a.is_rational() && b.field_->level() % a.field_->level() == 0) return b.field_;
    if (b.is_rational() && a.field_->level() % b.field_->level() == 0) return a.field_;
    return common_field(a.field_, b.field_);
  }

  const Field* field_;
  QPoly coeffs_;
};

inline Field::Field(unsigned level)
    : level_(level),
      minpoly_(poly::minimal_poly_two_cos(2 * level)),
      generator_double_(2.0 * std::cos(M_PI / static_cast<double>(level))) {}

inline const Field* Field::get(unsigned level) {
  if (level == 0) fail(ErrorKind::InvalidInput, "field level must be positive");
  static std::mutex registry_mutex;
  static std::map<unsigned, std::unique_ptr<Field>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto it = registry.find(level);
  if (it == registry.end())
    it = registry.emplace(level, std::unique_ptr<Field>(new Field(level))).first;
  return it->second.get();
}

inline const QPoly& Field::generator_image_in(const Field* target) const {
  std::lock_guard<std::mutex> lock(embed_mutex_);
  auto it = embed_cache_.find(target->level());
  if (it != embed_cache_.end()) return it->second;
  QPoly image = poly::chebyshev_d(target->level() / level_);
  target->reduce(image);
  return embed_cache_.emplace(target->level(), std::move(image)).first->second;
}

inline Scalar Field::two_cos_pi(const mpq_class& q_in) const {
  mpq_class q = q_in;
  q.canonicalize();
  if (q < 0) q = -q;
  // reduce mod 2
  mpz_class whole = q.get_num() / q.get_den();
  q -= mpq_class(whole - (whole % 2));
  const mpz_class& den = q.get_den();
  if (den == 1) return Scalar(this, mpq_class(q == 0 ? 2 : -2));
  if (den == 2) return Scalar(this, mpq_class(0));
  if (den == 3) {
    const mpz_class num = q.get_num();
    // 1/3 -> 1, 2/3 -> -1, 4/3 -> -1, 5/3 -> 1
    return Scalar(this, mpq_class((num == 1 || num == 5) ? 1 : -1));
  }
  if (mpz_class(level_) % den != 0)
    fail(ErrorKind::FieldTooSmall, "2cos(" + q.get_str() + " pi) not in level " + std::to_string(level_));
  const mpz_class k = q.get_num() * (mpz_class(level_) / den);
  QPoly p = poly::chebyshev_d(static_cast<unsigned>(k.get_ui()));
  return Scalar(this, std::move(p));
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace coxmin
