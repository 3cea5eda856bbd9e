#pragma once

// Scan-level drivers: error scans of S_f(x) - C_f x against the conjectured
// x^(1/3) scale, slope fits, classical summatory cross-checks, and the
// sawtooth-approximation certificate sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fqsums/arith.hpp"
#include "fqsums/constants.hpp"
#include "fqsums/csv.hpp"
#include "fqsums/floorsum.hpp"
#include "fqsums/numeric.hpp"
#include "fqsums/vaaler.hpp"

namespace fqsums {

// Geometrically spaced integer grid, deduplicated, endpoints included.
inline std::vector<std::uint64_t> log_spaced_grid(std::uint64_t lo, std::uint64_t hi,
                                                  unsigned count) {
  if (lo < 1 || hi < lo) throw std::domain_error("grid needs 1 <= lo <= hi");
  if (count == 0) throw std::domain_error("grid needs at least one point");
  if (count < 2 || lo == hi) return {lo};
  std::vector<std::uint64_t> xs;
  double llo = std::log(static_cast<double>(lo));
  double lhi = std::log(static_cast<double>(hi));
  for (unsigned i = 0; i < count; ++i) {
    double t = llo + (lhi - llo) * i / (count - 1);
    auto x = static_cast<std::uint64_t>(std::llround(std::exp(t)));
    x = std::clamp<std::uint64_t>(x, lo, hi);
    if (xs.empty() || x > xs.back()) xs.push_back(x);
  }
  return xs;
}

struct ScanRow {
  std::uint64_t x = 0;
  Rational s_exact;       // S_f(x)
  Real e_lo, e_hi;        // interval for E(x) = S_f(x) - C_f x
  Real e_mid;
  Real e_norm;            // |e_mid| / (x^(1/3) ln x)
  bool wide = false;      // enclosure-induced E width exceeds x^(1/3)
};

struct FitReport {
  bool defined = false;
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;
  unsigned points_used = 0;
};

struct ErrorScan {
  std::string kind;
  std::uint64_t truncation = 0;  // M used for the constant enclosure
  Enclosure enclosure;
  std::vector<ScanRow> rows;
  FitReport fit;
  unsigned digits = kDefaultDigits;
};

// Least squares of ln|E_mid| against ln x over rows whose |E_mid| clears the
// interval width; rows inside the noise say nothing about the exponent.
inline FitReport fit_error_rows(const std::vector<ScanRow>& rows) {
  FitReport fit;
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    Real width = sub_dir(r.e_hi, r.e_lo, MPFR_RNDU);
    Real mag = abs(r.e_mid);
    if (mag <= width || mag == 0) continue;
    lx.push_back(std::log(static_cast<double>(r.x)));
    ly.push_back(std::log(mag.convert_to<double>()));
  }
  fit.points_used = static_cast<unsigned>(lx.size());
  if (lx.size() < 2) return fit;
  double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.defined = true;
  return fit;
}

inline ErrorScan error_scan(const GSpec& spec, std::span<const std::uint64_t> xs,
                            std::uint64_t truncation, unsigned digits = kDefaultDigits,
                            unsigned threads = 1) {
  if (xs.empty()) throw std::domain_error("error_scan needs at least one x");
  std::uint64_t x_max = *std::max_element(xs.begin(), xs.end());
  std::uint64_t table_limit = std::max<std::uint64_t>(truncation, isqrt(x_max) + 1);
  ValueTable table = build_table(spec, table_limit);
  ErrorScan scan;
  scan.kind = kind_name(spec.kind);
  scan.truncation = truncation;
  scan.digits = digits;
  scan.enclosure = enclose_constant(spec, table, truncation, digits, threads);
  const Real& c_lo = scan.enclosure.lo;
  const Real& c_hi = scan.enclosure.hi;
  for (std::uint64_t x : xs) {
    ScanRow row;
    row.x = x;
    row.s_exact = block_sum(spec, table, x, threads);
    Real xr(x);
    row.e_lo = sub_dir(to_real(row.s_exact, MPFR_RNDD), mul_dir(c_hi, xr, MPFR_RNDU), MPFR_RNDD);
    row.e_hi = sub_dir(to_real(row.s_exact, MPFR_RNDU), mul_dir(c_lo, xr, MPFR_RNDD), MPFR_RNDU);
    row.e_mid = (row.e_lo + row.e_hi) / 2;
    Real scale = pow_dir(xr, Real(1) / 3, MPFR_RNDN) * log_dir(xr, MPFR_RNDN);
    row.e_norm = (x == 1) ? Real(0) : Real(abs(row.e_mid) / scale);
    Real width = sub_dir(row.e_hi, row.e_lo, MPFR_RNDU);
    row.wide = width > pow_dir(xr, Real(1) / 3, MPFR_RNDN);
    scan.rows.push_back(std::move(row));
  }
  scan.fit = fit_error_rows(scan.rows);
  return scan;
}

// CSV emission: columns x, S_exact, C_lo, C_hi, E_lo, E_hi, E_norm. S_exact
// is exact decimal-rendered; endpoints are rendered outward.
inline csv::Table error_scan_csv(const ErrorScan& scan) {
  csv::Table t;
  t.header = {"x", "S_exact", "C_lo", "C_hi", "E_lo", "E_hi", "E_norm"};
  std::string clo = decimal_string(scan.enclosure.lo, scan.digits, MPFR_RNDD);
  std::string chi = decimal_string(scan.enclosure.hi, scan.digits, MPFR_RNDU);
  for (const auto& r : scan.rows) {
    t.rows.push_back({std::to_string(r.x), decimal_string(r.s_exact, scan.digits), clo, chi,
                      decimal_string(r.e_lo, scan.digits, MPFR_RNDD),
                      decimal_string(r.e_hi, scan.digits, MPFR_RNDU),
                      decimal_string(r.e_norm, scan.digits)});
  }
  return t;
}

// Re-fit from a serialized scan: rebuilds the fit inputs from the E columns.
inline FitReport fit_from_csv(const csv::Table& t) {
  std::vector<std::string> expect = {"x", "S_exact", "C_lo", "C_hi", "E_lo", "E_hi", "E_norm"};
  if (t.header != expect) throw std::runtime_error("not an error-scan table: bad header");
  std::vector<ScanRow> rows;
  for (const auto& cells : t.rows) {
    ScanRow r;
    r.x = std::stoull(cells[0]);
    r.e_lo = Real(cells[4]);
    r.e_hi = Real(cells[5]);
    r.e_mid = (r.e_lo + r.e_hi) / 2;
    rows.push_back(std::move(r));
  }
  return fit_error_rows(rows);
}

// ---- classical cross-checks -------------------------------------------------

// sum_{n <= x} [x/n] via the block decomposition.
inline Int floor_quotient_total(std::uint64_t x) {
  BlockDecomposition d = enumerate_blocks(x);
  Int acc(0);
  for (const Block& b : d.blocks) acc += Int(b.q) * b.count;
  return acc;
}

inline constexpr std::uint64_t kSieveMemoryCap = 50'000'000;

// sum_{n <= x} phi(n), exact, via the sieved table.
inline Int totient_summatory(std::uint64_t x) {
  if (x > kSieveMemoryCap)
    throw refused_size_error("totient summatory beyond 5e7 needs more memory than the sieve "
                             "budget; lower x");
  ValueTable t = build_table(GSpec::moebius(), x);
  Int acc(0);
  for (std::uint64_t n = 1; n <= x; ++n) acc += t.f[n];
  return acc;
}

// sum_{n <= x} phi([x/n]) via blocks.
inline Int totient_floor_total(std::uint64_t x) {
  GSpec spec = GSpec::moebius();
  ValueTable table = build_table(spec, std::max<std::uint64_t>(isqrt(x) + 1, 2));
  BlockDecomposition d = enumerate_blocks(x);
  Int acc(0);
  for (const Block& b : d.blocks) acc += Int(f_value(b.q, spec, table)) * b.count;
  return acc;
}

struct ClassicReport {
  std::string which;  // "divisor", "totient-summatory", "totient-floor"
  std::uint64_t x = 0;
  Int exact;
  Real main_term;
  Real difference;  // exact - main_term
  Real normalized;  // per-which normalization, see below
};

// divisor: D(x) vs x ln x + (2 gamma - 1) x, normalized by x^(1/3).
inline ClassicReport classic_divisor(std::uint64_t x) {
  if (x < 1) throw std::domain_error("x must be >= 1");
  ClassicReport r;
  r.which = "divisor";
  r.x = x;
  r.exact = floor_quotient_total(x);
  Real xr(x);
  r.main_term = xr * log(xr) + (2 * euler_gamma() - 1) * xr;
  r.difference = Real(r.exact) - r.main_term;
  r.normalized = abs(r.difference) / pow(xr, Real(1) / 3);
  return r;
}

// totient-summatory: sum phi(n) vs 3 x^2 / pi^2, normalized by x ln x.
inline ClassicReport classic_totient_summatory(std::uint64_t x) {
  if (x < 2) throw std::domain_error("x must be >= 2");
  ClassicReport r;
  r.which = "totient-summatory";
  r.x = x;
  r.exact = totient_summatory(x);
  Real xr(x);
  r.main_term = 3 * xr * xr / (pi_const() * pi_const());
  r.difference = Real(r.exact) - r.main_term;
  r.normalized = abs(r.difference) / (xr * log(xr));
  return r;
}

// totient-floor: sum phi([x/n]) vs (6/pi^2) x ln x; normalized is the plain
// ratio exact / main, the quantity expected to drift toward 1 slowly.
inline ClassicReport classic_totient_floor(std::uint64_t x) {
  if (x < 2) throw std::domain_error("x must be >= 2");
  ClassicReport r;
  r.which = "totient-floor";
  r.x = x;
  r.exact = totient_floor_total(x);
  Real xr(x);
  r.main_term = 6 / (pi_const() * pi_const()) * xr * log(xr);
  r.difference = Real(r.exact) - r.main_term;
  r.normalized = Real(r.exact) / r.main_term;
  return r;
}

// ---- sawtooth certificate sweep ---------------------------------------------

struct SawtoothCheck {
  std::vector<unsigned> degrees;
  std::size_t grid = 0;
  double max_excess = -1;          // max over all points of |psi - psi_H| - bound
  double integer_gap = 0;          // max deviation of error and bound from 1/2 at integers
  double periodicity_gap = 0;      // max |psi_H(x+1) - psi_H(x)|
  double kernel_gap = 0;           // closed-form vs direct Fejer kernel
  double min_weight = 1, max_weight = 0;
};

inline SawtoothCheck sawtooth_check(std::span<const unsigned> degrees, std::size_t grid) {
  if (grid < 2) throw std::domain_error("grid must have at least 2 points");
  SawtoothCheck out;
  out.degrees.assign(degrees.begin(), degrees.end());
  out.grid = grid;
  for (unsigned H : degrees) {
    SawtoothPoly<double> poly(H);
    for (double w : poly.weights()) {
      out.min_weight = std::min(out.min_weight, w);
      out.max_weight = std::max(out.max_weight, w);
    }
    auto probe = [&](double x) {
      double err = std::abs(psi(x) - poly(x));
      double bound = fejer_bound(x, H);
      out.max_excess = std::max(out.max_excess, err - bound);
    };
    for (std::size_t i = 0; i < grid; ++i) {
      double x = 1.0 + static_cast<double>(i) / static_cast<double>(grid);
      probe(x);
      probe(x + 0.5 / static_cast<double>(grid));  // off-lattice halves
    }
    probe(1.5);
    // Integer points: psi jumps, psi_H(k) = 0, so the error is exactly 1/2
    // and the bound degenerates to K_H(0)/(2H+2) = 1/2.
    for (double x : {1.0, 2.0, 7.0}) {
      double err = std::abs(psi(x) - poly(x));
      double bound = fejer_bound(x, H);
      out.integer_gap = std::max(out.integer_gap, std::abs(err - 0.5));
      out.integer_gap = std::max(out.integer_gap, std::abs(bound - 0.5));
    }
    for (std::size_t i = 0; i < 64; ++i) {
      double x = 1.0 + static_cast<double>(i) / 64.0;
      out.periodicity_gap = std::max(out.periodicity_gap, std::abs(poly(x + 1) - poly(x)));
      // Direct Fejer sum: 1 + 2 sum_{h <= H} (1 - h/(H+1)) cos(2 pi h x).
      double direct = 1;
      for (unsigned h = 1; h <= H; ++h)
        direct += 2 * (1 - static_cast<double>(h) / (H + 1)) *
                  std::cos(2 * boost::math::constants::pi<double>() * h * x);
      out.kernel_gap = std::max(out.kernel_gap, std::abs(direct - fejer_kernel(x, H)));
    }
  }
  return out;
}

}  // namespace fqsums
