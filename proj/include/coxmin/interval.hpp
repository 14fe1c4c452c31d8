#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

namespace coxmin {

/// Closed real interval [lo, hi] with MPFR endpoints. Every operation rounds
/// lo down and hi up, so the true value of any expression evaluated through
/// this type lies inside the result.
class Interval {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 128;

  explicit Interval(mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(const Interval& other) {
    mpfr_init2(lo_, other.precision());
    mpfr_init2(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }

  Interval(Interval&& other) noexcept {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }

  Interval& operator=(const Interval& other) {
    if (this != &other) {
      mpfr_set_prec(lo_, other.precision());
      mpfr_set_prec(hi_, other.precision());
      mpfr_set(lo_, other.lo_, MPFR_RNDD);
      mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
  }

  Interval& operator=(Interval&& other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    return *this;
  }

  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  static Interval from_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
  }

  static Interval from_rational(const mpq_class& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static Interval hull(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  static Interval pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  /// cos(r*pi) for rational r.
  static Interval cos_pi(mpq_class r, mpfr_prec_t prec) {
    // Reduce to r in [0, 1] using periodicity and evenness.
    if (r < 0) r = -r;
    mpz_class whole = r.get_num() / r.get_den();
    mpz_class two_turns = whole - (whole % 2);
    r -= mpq_class(two_turns);
    if (r > 1) r = mpq_class(2) - r;
    if (r == 0) return from_long(1, prec);
    if (r == 1) return from_long(-1, prec);
    if (r == mpq_class(1, 2)) return from_long(0, prec);
    Interval arg = pi(prec);
    mpfr_mul_q(arg.lo_, arg.lo_, r.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(arg.hi_, arg.hi_, r.get_mpq_t(), MPFR_RNDU);
    // cos is decreasing on [0, pi].
    Interval out(prec);
    mpfr_cos(out.lo_, arg.hi_, MPFR_RNDD);
    mpfr_cos(out.hi_, arg.lo_, MPFR_RNDU);
    return out;
  }

  Interval operator-() const {
    Interval r(precision());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const mpfr_t* xs[2] = {&a.lo_, &a.hi_};
    const mpfr_t* ys[2] = {&b.lo_, &b.hi_};
    bool first = true;
    for (auto* x : xs) {
      for (auto* y : ys) {
        mpfr_mul(t, *x, *y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, *x, *y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }

  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  Interval exp() const {
    Interval r(precision());
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  /// Division by a positive integer.
  Interval divided_by(unsigned long d) const {
    Interval r(precision());
    mpfr_div_ui(r.lo_, lo_, d, MPFR_RNDD);
    mpfr_div_ui(r.hi_, hi_, d, MPFR_RNDU);
    return r;
  }

  /// +1 / -1 when the interval excludes zero, 0 when it straddles or touches it.
  int sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return 0;
  }

  bool contains_zero() const { return sign() == 0; }

  /// a < b for every pair of points.
  friend bool certainly_less(const Interval& a, const Interval& b) {
    return mpfr_less_p(a.hi_, b.lo_);
  }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double midpoint() const { return 0.5 * (lower() + upper()); }
  double radius() const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double r = 0.5 * mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return r;
  }

  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }
  mpfr_t& lo() { return lo_; }
  mpfr_t& hi() { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace coxmin
