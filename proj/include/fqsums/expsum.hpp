#pragma once

// Sawtooth-weighted window sums, their exponent-pair bounds, and the
// triple exponential sums behind those bounds.
//
// window_sum(x, D, delta) = sum_{D < d <= 2D} (f(d)/d) psi(x/(d + delta)).
// For integer delta the summand is rational and the sum is exact; otherwise
// it is evaluated in MPFR at a requested precision. window_bound gives the
// three-term majorant predicted for an exponent pair (kappa, lambda), and
// ratio_scan tabulates observed/predicted over a dyadic ladder of D.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqsums/arith.hpp"
#include "fqsums/errors.hpp"
#include "fqsums/floorsum.hpp"
#include "fqsums/numeric.hpp"
#include "fqsums/vaaler.hpp"

namespace fqsums {

struct ExponentPair {
  double kappa = 0.5;
  double lambda = 0.5;

  void validate() const {
    if (!(0.0 <= kappa && kappa <= 0.5 && 0.5 <= lambda && lambda <= 1.0))
      throw std::invalid_argument("exponent pair needs 0 <= kappa <= 1/2 <= lambda <= 1");
  }
};

template <class RealT = double>
struct WindowBound {
  RealT term1;  // (x^kappa D^(lambda - kappa))^(1 / (1 + kappa))
  RealT term2;  // x^kappa D^(lambda - 2 kappa) log x
  RealT term3;  // D^2 / x
  RealT total() const { return term1 + term2 + term3; }
};

template <class RealT = double>
WindowBound<RealT> window_bound(RealT x, RealT D, const ExponentPair& pair, Growth growth,
                                double epsilon = 0.01) {
  using std::log;
  using std::pow;
  pair.validate();
  if (!(x >= 2) || !(D >= 1) || !(D <= x))
    throw std::domain_error("window_bound needs x >= 2 and 1 <= D <= x");
  RealT k(pair.kappa), l(pair.lambda);
  WindowBound<RealT> b;
  b.term1 = pow(pow(x, k) * pow(D, l - k), RealT(1) / (RealT(1) + k));
  b.term2 = pow(x, k) * pow(D, l - RealT(2) * k) * log(x);
  b.term3 = D * D / x;
  if (growth == Growth::Subpolynomial) {
    RealT fudge = pow(D, RealT(epsilon));
    b.term1 *= fudge;
    b.term2 *= fudge;
    b.term3 *= fudge;
  }
  return b;
}

namespace detail {

inline void window_range(std::uint64_t x, double D, std::uint64_t* d_lo, std::uint64_t* d_hi) {
  if (!(D >= 1.0) || !(D <= static_cast<double>(x)))
    throw std::domain_error("window needs 1 <= D <= x");
  *d_lo = static_cast<std::uint64_t>(std::floor(D)) + 1;
  *d_hi = static_cast<std::uint64_t>(std::floor(2.0 * D));
}

}  // namespace detail

// Exact value for integer delta; psi(x/(d+delta)) = r/(d+delta) - 1/2 with
// r = x mod (d+delta).
inline Rational window_sum_exact(const GSpec& spec, const ValueTable& table, std::uint64_t x,
                                 double D, std::uint64_t delta, unsigned threads = 1) {
  std::uint64_t d_lo = 0, d_hi = 0;
  detail::window_range(x, D, &d_lo, &d_hi);
  if (d_lo > d_hi) return Rational(0);
  auto term = [&](std::uint64_t d) {
    std::uint64_t den = d + delta;
    std::uint64_t r = x % den;
    Rational saw(Int(2 * r) - Int(den), Int(2) * den);
    return Rational(Int(f_value(d, spec, table)), Int(d)) * saw;
  };
  return split_rational_sum(d_lo, d_hi, term, threads);
}

// General delta >= 0. Integer delta routes through the exact path and is
// merely rounded once at the end.
inline RealVar window_sum(const GSpec& spec, const ValueTable& table, std::uint64_t x, double D,
                          double delta, unsigned digits = kDefaultDigits, unsigned threads = 1) {
  if (!(delta >= 0.0)) throw std::domain_error("delta must be >= 0");
  PrecisionGuard guard(digits + 10);
  if (delta == std::floor(delta)) {
    Rational exact =
        window_sum_exact(spec, table, x, D, static_cast<std::uint64_t>(delta), threads);
    return RealVar(exact);
  }
  std::uint64_t d_lo = 0, d_hi = 0;
  detail::window_range(x, D, &d_lo, &d_hi);
  RealVar acc(0);
  RealVar xr(x);
  RealVar dl(delta);
  for (std::uint64_t d = d_lo; d <= d_hi; ++d) {
    RealVar t = xr / (RealVar(d) + dl);
    RealVar saw = t - floor(t) - RealVar(0.5);
    acc += RealVar(Rational(Int(f_value(d, spec, table)), Int(d))) * saw;
  }
  return acc;
}

struct WindowSample {
  std::uint64_t x = 0;
  double D = 0;
  double delta = 0;
  std::string value;  // decimal at the scan precision
  double abs_value = 0;
  double term1 = 0, term2 = 0, term3 = 0;
  double ratio = 0;  // |value| / (term1 + term2 + term3)
};

struct RatioScan {
  std::uint64_t x = 0;
  std::uint64_t cut = 0;  // x^(1/3), base of the dyadic ladder
  std::vector<WindowSample> rows;
  double max_ratio = 0;
};

// Dyadic ladder D_j = x / (2^j cut), j = 0 .. log2(x / cut^2), descending
// from x^(2/3) to about x^(1/3).
inline std::vector<double> dyadic_window_grid(std::uint64_t x) {
  std::uint64_t cut = icbrt(x);
  if (cut < 1) throw std::domain_error("x too small for a dyadic window grid");
  std::vector<double> grid;
  std::uint64_t denom = cut;
  while (denom * cut <= x) {  // D_j >= cut
    grid.push_back(static_cast<double>(x) / static_cast<double>(denom));
    if (denom > x / 2) break;
    denom *= 2;
  }
  return grid;
}

inline RatioScan ratio_scan(const GSpec& spec, const ValueTable& table, std::uint64_t x,
                            const ExponentPair& pair, double delta,
                            std::vector<double> grid = {}, unsigned digits = kDefaultDigits,
                            unsigned threads = 1) {
  pair.validate();
  RatioScan scan;
  scan.x = x;
  scan.cut = icbrt(x);
  if (grid.empty()) grid = dyadic_window_grid(x);
  for (double D : grid) {
    RealVar v = window_sum(spec, table, x, D, delta, digits, threads);
    WindowBound<double> b =
        window_bound<double>(static_cast<double>(x), D, pair, spec.growth);
    WindowSample row;
    row.x = x;
    row.D = D;
    row.delta = delta;
    row.value = v.str(digits, std::ios_base::scientific);
    row.abs_value = std::abs(v.convert_to<double>());
    row.term1 = b.term1;
    row.term2 = b.term2;
    row.term3 = b.term3;
    row.ratio = row.abs_value / b.total();
    scan.max_ratio = std::max(scan.max_ratio, row.ratio);
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

// ---- triple exponential sums ----------------------------------------------

// S = sum_{h ~ H} sum_{m ~ M} sum_{n ~ N} a(h,n) b(m) e(phase), with
// phase = X (M^beta N^gamma / H^alpha) h^alpha / (m^beta n^gamma + delta)
// and y ~ Y meaning y in (Y, 2Y]. Coefficients must satisfy |a|, |b| <= 1.
struct TripleSumSpec {
  std::uint64_t h_base = 1, m_base = 1, n_base = 1;
  double scale_x = 1.0;  // X
  double alpha = 1.0, beta = 1.0, gamma = 1.0;
  double delta = 0.0;
  double epsilon = 0.01;
  std::function<std::complex<double>(std::uint64_t, std::uint64_t)> a;
  std::function<std::complex<double>(std::uint64_t)> b;

  void validate() const {
    if (h_base < 1 || m_base < 1 || n_base < 1)
      throw std::domain_error("dyadic bases must be >= 1");
    if (!(scale_x >= 0)) throw std::domain_error("X must be >= 0");
    if (!(alpha > 0) || !(beta > 0) || !(gamma > 0))
      throw std::domain_error("alpha, beta, gamma must be positive");
    if (!(delta >= 0)) throw std::domain_error("delta must be >= 0");
    if (!(epsilon > 0)) throw std::domain_error("epsilon must be positive");
    if (!a || !b) throw std::invalid_argument("coefficient functions are required");
  }
};

inline constexpr std::uint64_t kTripleSumTermCap = 100'000'000;

inline std::complex<double> triple_sum(const TripleSumSpec& s) {
  s.validate();
  if (s.h_base > kTripleSumTermCap || s.m_base > kTripleSumTermCap ||
      s.n_base > kTripleSumTermCap ||
      s.h_base * s.m_base > kTripleSumTermCap / s.n_base)
    throw refused_size_error("triple sum has more than 1e8 terms; shrink H, M or N");
  double two_pi = 2.0 * boost::math::constants::pi<double>();
  double scale = s.scale_x * std::pow(static_cast<double>(s.m_base), s.beta) *
                 std::pow(static_cast<double>(s.n_base), s.gamma) /
                 std::pow(static_cast<double>(s.h_base), s.alpha);
  std::vector<double> n_pow(s.n_base);
  for (std::uint64_t j = 0; j < s.n_base; ++j)
    n_pow[j] = std::pow(static_cast<double>(s.n_base + 1 + j), s.gamma);
  std::complex<double> acc(0, 0);
  for (std::uint64_t h = s.h_base + 1; h <= 2 * s.h_base; ++h) {
    double hp = scale * std::pow(static_cast<double>(h), s.alpha);
    for (std::uint64_t m = s.m_base + 1; m <= 2 * s.m_base; ++m) {
      std::complex<double> bm = s.b(m);
      if (std::abs(bm) > 1.0 + 1e-9)
        throw std::invalid_argument("coefficient |b(m)| exceeds 1");
      double mp = std::pow(static_cast<double>(m), s.beta);
      for (std::uint64_t n = s.n_base + 1; n <= 2 * s.n_base; ++n) {
        std::complex<double> ahn = s.a(h, n);
        if (std::abs(ahn) > 1.0 + 1e-9)
          throw std::invalid_argument("coefficient |a(h,n)| exceeds 1");
        double theta = hp / (mp * n_pow[n - s.n_base - 1] + s.delta);
        double arg = two_pi * theta;
        acc += ahn * bm * std::complex<double>(std::cos(arg), std::sin(arg));
      }
    }
  }
  return acc;
}

// Majorant for |S| under an exponent pair, valid when H <= N^(gamma-1) M^beta
// and 0 <= delta <= 1/epsilon:
// ((X^kappa H^(2+kappa) M^(1+kappa+lambda) N^(2+kappa))^(1/(2+2kappa))
//   + H M^(1/2) N + H^(1/2) M N^(1/2) + X^(-1/2) H M N) * X^epsilon.
inline double triple_bound(const TripleSumSpec& s, const ExponentPair& pair) {
  s.validate();
  pair.validate();
  double H = static_cast<double>(s.h_base);
  double M = static_cast<double>(s.m_base);
  double N = static_cast<double>(s.n_base);
  double X = s.scale_x;
  if (!(X > 0)) throw std::domain_error("bound not applicable: needs X > 0");
  if (!(H <= std::pow(N, s.gamma - 1.0) * std::pow(M, s.beta)))
    throw std::domain_error("bound not applicable: H exceeds N^(gamma-1) M^beta");
  if (!(s.delta <= 1.0 / s.epsilon))
    throw std::domain_error("bound not applicable: delta exceeds 1/epsilon");
  double k = pair.kappa, l = pair.lambda;
  double lead = std::pow(std::pow(X, k) * std::pow(H, 2.0 + k) * std::pow(M, 1.0 + k + l) *
                             std::pow(N, 2.0 + k),
                         1.0 / (2.0 + 2.0 * k));
  double value = lead + H * std::sqrt(M) * N + std::sqrt(H) * M * std::sqrt(N) +
                 H * M * N / std::sqrt(X);
  return value * std::pow(X, s.epsilon);
}

// Deterministic unimodular coefficients: phases drawn from a seeded
// mt19937_64, mapped to [0,1) by the top 53 bits so results are identical
// across platforms.
inline TripleSumSpec random_unimodular_spec(std::uint64_t h_base, std::uint64_t m_base,
                                            std::uint64_t n_base, double scale_x, double alpha,
                                            double beta, double gamma, double delta,
                                            double epsilon, std::uint64_t seed) {
  if (h_base * n_base > 10'000'000 || m_base > 10'000'000)
    throw refused_size_error("coefficient tables over 1e7 entries; shrink the spec");
  TripleSumSpec s;
  s.h_base = h_base;
  s.m_base = m_base;
  s.n_base = n_base;
  s.scale_x = scale_x;
  s.alpha = alpha;
  s.beta = beta;
  s.gamma = gamma;
  s.delta = delta;
  s.epsilon = epsilon;
  std::mt19937_64 rng(seed);
  double two_pi = 2.0 * boost::math::constants::pi<double>();
  auto unit = [&rng, two_pi]() {
    double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return std::complex<double>(std::cos(two_pi * u), std::sin(two_pi * u));
  };
  auto a_tab = std::make_shared<std::vector<std::complex<double>>>();
  a_tab->reserve(h_base * n_base);
  for (std::uint64_t i = 0; i < h_base * n_base; ++i) a_tab->push_back(unit());
  auto b_tab = std::make_shared<std::vector<std::complex<double>>>();
  b_tab->reserve(m_base);
  for (std::uint64_t i = 0; i < m_base; ++i) b_tab->push_back(unit());
  s.a = [a_tab, h_base, n_base](std::uint64_t h, std::uint64_t n) {
    return (*a_tab)[(h - h_base - 1) * n_base + (n - n_base - 1)];
  };
  s.b = [b_tab, m_base](std::uint64_t m) { return (*b_tab)[m - m_base - 1]; };
  return s;
}

}  // namespace fqsums
