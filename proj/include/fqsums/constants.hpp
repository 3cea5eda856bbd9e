#pragma once

// Interval enclosures for the limiting constant C_f = sum_{m >= 1}
// f(m) / (m^2 (m + 1)). The partial sum to M is exact; the tail is dominated
// via a monotone decreasing majorant, so [lo, hi] is certified to contain C_f
// whenever the growth declaration for g is certified.

#include <cstdint>
#include <optional>
#include <string>

#include "fqsums/arith.hpp"
#include "fqsums/numeric.hpp"

namespace fqsums {

// Exact sum_{m <= M} f(m) / (m^2 (m + 1)).
inline Rational partial_constant_sum(const ValueTable& table, std::uint64_t M,
                                     unsigned threads = 1) {
  if (M < 1) throw std::domain_error("M must be >= 1");
  if (table.limit < M) throw std::domain_error("partial_constant_sum needs a table covering M");
  auto term = [&](std::uint64_t m) {
    return Rational(Int(table.f[m]), Int(m) * m * (m + 1));
  };
  return split_rational_sum(1, M, term, threads);
}

struct TailBound {
  Real value;      // upper bound on |sum_{m > M} f(m) / (m^2 (m + 1))|
  bool certified;  // false when it rests on an uncertified growth declaration
};

// For |g| <= 1 we have |f(m)| <= m (1 + ln m), so the tail past M is at most
// (2 + ln M) / M: each term is below (1 + ln m) / (m (m + 1)), which telescopes
// against (2 + ln m) / m. Subpolynomial growth uses the declared
// |g(n)| <= C n^eps, giving a tail below C' M^(eps - 1); the declaration's
// certified flag is passed through.
inline TailBound tail_bound(std::uint64_t M, Growth growth,
                            const std::optional<SubpolyBound>& subpoly = {}) {
  if (M < 2) throw std::domain_error("tail bound needs M >= 2");
  Real m(M);
  if (growth == Growth::Bounded) {
    Real num = add_dir(log_dir(m, MPFR_RNDU), Real(2), MPFR_RNDU);
    return {div_dir(num, m, MPFR_RNDU), true};
  }
  if (!subpoly)
    throw std::invalid_argument(
        "subpolynomial growth needs a declared (coeff, epsilon) bound; refusing an "
        "uncertified tail");
  if (!(subpoly->epsilon >= 0.0 && subpoly->epsilon < 0.5) || !(subpoly->coeff > 0.0))
    throw std::invalid_argument("subpolynomial declaration out of range");
  // |f(m)| <= C m^(1+eps) (1 + ln m), so each tail term is below
  // C (1 + ln m) / m^(2-eps), a decreasing function of m; comparing with the
  // integral from M gives C M^(eps-1) (1 + ln M + 1/(1-eps)) / (1-eps).
  Real c(subpoly->coeff);
  Real e(subpoly->epsilon);
  Real one_minus_e = sub_dir(Real(1), e, MPFR_RNDD);
  Real lnM = log_dir(m, MPFR_RNDU);
  Real num = add_dir(add_dir(lnM, Real(1), MPFR_RNDU),
                     div_dir(Real(1), one_minus_e, MPFR_RNDU), MPFR_RNDU);
  num = mul_dir(c, num, MPFR_RNDU);
  Real scale = pow_dir(m, sub_dir(e, Real(1), MPFR_RNDU), MPFR_RNDU);
  Real value = div_dir(mul_dir(num, scale, MPFR_RNDU), one_minus_e, MPFR_RNDU);
  return {value, subpoly->certified};
}

struct Enclosure {
  GKind kind = GKind::Moebius;
  std::string name;          // kind tag used in serialized output
  std::uint64_t truncation = 0;
  Rational partial;          // exact partial sum
  Real tail;                 // certified-or-declared tail majorant
  Real lo, hi;               // outward-rounded interval endpoints
  Real slack;                // (hi - lo) - tail, the rounding/widening surplus
  bool certified = false;
  unsigned digits = kDefaultDigits;
};

// Interval for C_f. Named kinds have f >= 0 (each is a sum of positive
// divisor terms), so the tail only pushes the upper end. Custom g may be
// signed; both ends are widened there, trading sharpness for correctness.
inline Enclosure enclose_constant(const GSpec& spec, const ValueTable& table, std::uint64_t M,
                                  unsigned digits = kDefaultDigits, unsigned threads = 1) {
  Enclosure e;
  e.kind = spec.kind;
  e.name = kind_name(spec.kind);
  e.truncation = M;
  e.digits = digits;
  e.partial = partial_constant_sum(table, M, threads);
  TailBound tb = tail_bound(M, spec.growth, spec.subpoly);
  e.tail = tb.value;
  e.certified = tb.certified;
  if (spec.named()) {
    e.lo = to_real(e.partial, MPFR_RNDD);
    e.hi = add_dir(to_real(e.partial, MPFR_RNDU), e.tail, MPFR_RNDU);
  } else {
    e.lo = sub_dir(to_real(e.partial, MPFR_RNDD), e.tail, MPFR_RNDD);
    e.hi = add_dir(to_real(e.partial, MPFR_RNDU), e.tail, MPFR_RNDU);
  }
  Real width = sub_dir(e.hi, e.lo, MPFR_RNDU);
  e.slack = sub_dir(width, e.tail, MPFR_RNDU);
  if (e.slack < 0) e.slack = Real(0);
  return e;
}

// Serialized form: {"kind", "M", "lo", "hi", "tail_bound", "certified"},
// endpoints rendered outward so the printed interval still encloses C_f.
inline std::string enclosure_json(const Enclosure& e) {
  std::string out = "{";
  out += "\"kind\": \"" + e.name + "\", ";
  out += "\"M\": " + std::to_string(e.truncation) + ", ";
  out += "\"lo\": \"" + decimal_string(e.lo, e.digits, MPFR_RNDD) + "\", ";
  out += "\"hi\": \"" + decimal_string(e.hi, e.digits, MPFR_RNDU) + "\", ";
  out += "\"tail_bound\": \"" + decimal_string(e.tail, e.digits, MPFR_RNDU) + "\", ";
  out += std::string("\"certified\": ") + (e.certified ? "true" : "false");
  out += "}";
  return out;
}

}  // namespace fqsums
