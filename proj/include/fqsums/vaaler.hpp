#pragma once

// Trigonometric approximation of the sawtooth psi(t) = t - [t] - 1/2:
// psi_H(x) = -sum_{h <= H} w_h sin(2 pi h x) / (pi h) with the weights
// w_h = W(h / (H+1)), W(t) = pi t (1 - |t|) cot(pi t) + |t|. The pointwise
// error is bounded by the Fejer kernel: |psi - psi_H|(x) <= K_H(x) / (2H + 2),
// K_H(u) = (sin(pi (H+1) u) / sin(pi u))^2 / (H + 1).

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "fqsums/numeric.hpp"

namespace fqsums {

template <class RealT = double>
RealT psi(RealT t) {
  using std::floor;
  return t - floor(t) - RealT(0.5);
}

// W(t) on 0 < |t| < 1. Even in t. The removable singularity of
// pi t cot(pi t) at 0 is handled by its Taylor series below |t| = 0.01
// (double path; the multiprecision path stays safely away from 0 in use).
template <class RealT = double>
RealT taper_weight(RealT t) {
  using std::abs;
  using std::cos;
  using std::sin;
  RealT a = abs(t);
  if (!(a > RealT(0) && a < RealT(1)))
    throw std::domain_error("taper_weight needs 0 < |t| < 1");
  RealT pi = boost::math::constants::pi<RealT>();
  RealT u = pi * a;
  RealT ucotu;
  if (a < RealT(0.01)) {
    // u cot u = 1 - u^2/3 - u^4/45 - 2 u^6/945 - ...
    RealT u2 = u * u;
    ucotu = RealT(1) - u2 / RealT(3) - u2 * u2 / RealT(45) -
            RealT(2) * u2 * u2 * u2 / RealT(945);
  } else {
    ucotu = u * cos(u) / sin(u);
  }
  return ucotu * (RealT(1) - a) + a;
}

template <class RealT = double>
class SawtoothPoly {
 public:
  explicit SawtoothPoly(unsigned degree) : degree_(degree) {
    if (degree == 0) throw std::domain_error("degree must be >= 1");
    weights_.reserve(degree);
    for (unsigned h = 1; h <= degree; ++h)
      weights_.push_back(taper_weight(RealT(h) / RealT(degree + 1)));
  }

  // Evaluate at x. The argument is reduced mod 1 first so the value is
  // exactly periodic and exactly zero at integers regardless of |x|.
  RealT operator()(RealT x) const {
    using std::floor;
    using std::sin;
    RealT u = x - floor(x);
    RealT pi = boost::math::constants::pi<RealT>();
    RealT two_pi_u = RealT(2) * pi * u;
    RealT acc(0);
    for (unsigned h = 1; h <= degree_; ++h)
      acc += weights_[h - 1] * sin(RealT(h) * two_pi_u) / RealT(h);
    return -acc / pi;
  }

  unsigned degree() const { return degree_; }
  const std::vector<RealT>& weights() const { return weights_; }

 private:
  unsigned degree_;
  std::vector<RealT> weights_;
};

template <class RealT = double>
RealT psi_truncated(RealT x, unsigned degree) {
  return SawtoothPoly<RealT>(degree)(x);
}

// Normalized Fejer kernel K_H (mean 1 over a period, peak H+1 at integers).
template <class RealT = double>
RealT fejer_kernel(RealT x, unsigned degree) {
  using std::abs;
  using std::floor;
  using std::sin;
  RealT pi = boost::math::constants::pi<RealT>();
  RealT u = x - floor(x);
  RealT s = sin(pi * u);
  if (abs(s) < RealT(1e-8)) return RealT(degree + 1);  // limit at integers
  RealT v = sin(pi * RealT(degree + 1) * u);
  RealT r = v / s;
  return r * r / RealT(degree + 1);
}

// Pointwise error majorant for psi_truncated; equals 1/2 at integers, where
// the sawtooth jump makes the bound sharp.
template <class RealT = double>
RealT fejer_bound(RealT x, unsigned degree) {
  return fejer_kernel(x, degree) / RealT(2 * degree + 2);
}

}  // namespace fqsums
