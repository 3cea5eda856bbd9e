#pragma once

// Numeric carriers: exact integers/rationals on GMP, high-precision reals on
// MPFR, directed-rounding helpers, and a pairwise (binary splitting) reduction
// for long exact sums.

#include <mpfr.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <future>
#include <ios>
#include <string>
#include <utility>

#include "fqsums/errors.hpp"

namespace fqsums {

namespace mp = boost::multiprecision;

using Int = mp::mpz_int;
using Rational = mp::mpq_rational;
using Real = mp::mpfr_float_50;   // fixed 50 significant decimal digits
using RealVar = mp::mpfr_float;   // runtime-chosen precision

inline constexpr unsigned kDefaultDigits = 50;

// Reference values used by tests to pin the runtime-computed constants.
inline constexpr const char* kEulerGamma50 =
    "0.57721566490153286060651209008240243104215933593992";
inline constexpr const char* kPi50 =
    "3.1415926535897932384626433832795028841971693993751";

inline const Real& euler_gamma() {
  static const Real g = boost::math::constants::euler<Real>();
  return g;
}

inline const Real& pi_const() {
  static const Real p = boost::math::constants::pi<Real>();
  return p;
}

// Scoped default precision (decimal digits) for RealVar temporaries.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits)
      : saved_(RealVar::default_precision()) {
    RealVar::default_precision(digits < 20 ? 20 : digits);
  }
  ~PrecisionGuard() { RealVar::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// ---- directed rounding on Real ------------------------------------------

inline Real to_real(const Rational& q, mpfr_rnd_t rnd) {
  Real out;
  mpfr_set_q(out.backend().data(), q.backend().data(), rnd);
  return out;
}

inline Real add_dir(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real out;
  mpfr_add(out.backend().data(), a.backend().data(), b.backend().data(), rnd);
  return out;
}

inline Real sub_dir(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real out;
  mpfr_sub(out.backend().data(), a.backend().data(), b.backend().data(), rnd);
  return out;
}

inline Real mul_dir(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real out;
  mpfr_mul(out.backend().data(), a.backend().data(), b.backend().data(), rnd);
  return out;
}

inline Real div_dir(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real out;
  mpfr_div(out.backend().data(), a.backend().data(), b.backend().data(), rnd);
  return out;
}

inline Real log_dir(const Real& a, mpfr_rnd_t rnd) {
  Real out;
  mpfr_log(out.backend().data(), a.backend().data(), rnd);
  return out;
}

inline Real pow_dir(const Real& base, const Real& exp, mpfr_rnd_t rnd) {
  Real out;
  mpfr_pow(out.backend().data(), base.backend().data(), exp.backend().data(), rnd);
  return out;
}

// ---- decimal rendering ---------------------------------------------------

// Scientific-notation string with `digits` significant digits, rounded in the
// given direction. Used for interval endpoints that must stay outward.
inline std::string decimal_string(const Real& v, unsigned digits, mpfr_rnd_t rnd) {
  if (digits < 2) digits = 2;
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*R*e", static_cast<int>(digits - 1), rnd, v.backend().data());
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

inline std::string decimal_string(const Real& v, unsigned digits) {
  return decimal_string(v, digits, MPFR_RNDN);
}

inline std::string decimal_string(const Rational& q, unsigned digits) {
  PrecisionGuard guard(digits + 8);
  RealVar v(q);
  return v.str(digits, std::ios_base::scientific);
}

// ---- integer roots -------------------------------------------------------

inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

inline std::uint64_t icbrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r > n / r) --r;
  while ((r + 1) * (r + 1) <= n / (r + 1)) ++r;
  return r;
}

// ---- pairwise exact summation -------------------------------------------

namespace detail {

template <class TermFn>
Rational split_sum_rec(std::uint64_t lo, std::uint64_t hi, TermFn& term, unsigned budget) {
  if (lo == hi) return term(lo);
  std::uint64_t mid = lo + (hi - lo) / 2;
  if (budget > 1) {
    unsigned left_budget = budget / 2;
    auto fut = std::async(std::launch::async, [&term, lo, mid, left_budget] {
      return split_sum_rec(lo, mid, term, left_budget);
    });
    Rational right = split_sum_rec(mid + 1, hi, term, budget - left_budget);
    return fut.get() + right;
  }
  return split_sum_rec(lo, mid, term, 1) + split_sum_rec(mid + 1, hi, term, 1);
}

}  // namespace detail

// Sum of term(i) for i in [lo, hi], combined pairwise so intermediate
// denominators stay balanced. `threads` > 1 splits the top of the tree
// across std::async tasks.
template <class TermFn>
Rational split_rational_sum(std::uint64_t lo, std::uint64_t hi, TermFn term, unsigned threads = 1) {
  if (lo > hi) return Rational(0);
  return detail::split_sum_rec(lo, hi, term, threads == 0 ? 1 : threads);
}

}  // namespace fqsums
