#pragma once

// Arithmetic-function tables. A convolver spec names the function g; the
// working function is always f = id * g (Dirichlet convolution), so
// f(m) = sum_{d | m} (m/d) g(d). Tables are built by a linear sieve plus a
// divisor-pass convolution; isolated values come from factoring via a prime
// list and per-kind closed forms.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqsums/errors.hpp"
#include "fqsums/numeric.hpp"

namespace fqsums {

// g choices. The first five give f = phi, sigma, beta, Psi and the
// sum-over-prime-divisors function q * sum_{p | q} 1/p. Unit is the
// convolution identity (g(1) = 1, else 0), so f = id. Custom takes a
// caller-provided table of g values.
enum class GKind {
  Moebius,          // f = Euler phi
  One,              // f = sigma (divisor sum)
  Liouville,        // f = beta = id * lambda
  MoebiusSquared,   // f = Psi (Dedekind)
  PrimeIndicator,   // f(q) = sum over primes p | q of q / p
  Unit,             // f = id
  Custom,
};

enum class Growth { Bounded, Subpolynomial };

// Declared |g(n)| <= coeff * n^epsilon bound for Subpolynomial growth.
// `certified` records whether the declaration is backed by a proof; it is
// carried through to tail bounds, never assumed.
struct SubpolyBound {
  double coeff = 1.0;
  double epsilon = 0.0;
  bool certified = false;
};

struct GSpec {
  GKind kind = GKind::Moebius;
  Growth growth = Growth::Bounded;
  std::vector<std::int64_t> custom_g;  // g(1..N) when kind == Custom; [0] absent
  std::optional<SubpolyBound> subpoly;

  bool named() const { return kind != GKind::Custom; }

  static GSpec moebius() { return {GKind::Moebius, Growth::Bounded, {}, {}}; }
  static GSpec one() { return {GKind::One, Growth::Bounded, {}, {}}; }
  static GSpec liouville() { return {GKind::Liouville, Growth::Bounded, {}, {}}; }
  static GSpec moebius_squared() { return {GKind::MoebiusSquared, Growth::Bounded, {}, {}}; }
  static GSpec prime_indicator() { return {GKind::PrimeIndicator, Growth::Bounded, {}, {}}; }
  static GSpec unit() { return {GKind::Unit, Growth::Bounded, {}, {}}; }
  static GSpec custom(std::vector<std::int64_t> g, Growth growth = Growth::Bounded,
                      std::optional<SubpolyBound> bound = {}) {
    GSpec s;
    s.kind = GKind::Custom;
    s.growth = growth;
    s.custom_g = std::move(g);
    s.subpoly = std::move(bound);
    return s;
  }
};

inline const char* kind_name(GKind k) {
  switch (k) {
    case GKind::Moebius: return "phi";
    case GKind::One: return "sigma";
    case GKind::Liouville: return "beta";
    case GKind::MoebiusSquared: return "psi";
    case GKind::PrimeIndicator: return "primeconv";
    case GKind::Unit: return "id";
    case GKind::Custom: return "custom";
  }
  return "?";
}

// ---- sieve ----------------------------------------------------------------

struct SieveData {
  std::vector<std::uint64_t> primes;
  std::vector<std::int8_t> mu;         // Moebius function
  std::vector<std::uint8_t> big_omega; // prime factors counted with multiplicity
};

// Linear sieve: every composite is crossed once via its least prime factor.
inline SieveData linear_sieve(std::uint64_t limit) {
  if (limit < 1) throw std::domain_error("sieve limit must be >= 1");
  SieveData s;
  s.mu.assign(limit + 1, 0);
  s.big_omega.assign(limit + 1, 0);
  std::vector<char> composite(limit + 1, 0);
  s.mu[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (!composite[n]) {
      s.primes.push_back(n);
      s.mu[n] = -1;
      s.big_omega[n] = 1;
    }
    for (std::uint64_t p : s.primes) {
      if (p > limit / n) break;
      std::uint64_t m = n * p;
      composite[m] = 1;
      s.big_omega[m] = static_cast<std::uint8_t>(s.big_omega[n] + 1);
      if (n % p == 0) {
        s.mu[m] = 0;
        break;
      }
      s.mu[m] = static_cast<std::int8_t>(-s.mu[n]);
    }
  }
  return s;
}

// g(1..limit) for the spec'd kind; index 0 is unused and set to 0.
inline std::vector<std::int64_t> sieve_g(const GSpec& spec, std::uint64_t limit) {
  if (limit < 1) throw std::domain_error("sieve_g limit must be >= 1");
  std::vector<std::int64_t> g(limit + 1, 0);
  if (spec.kind == GKind::Custom) {
    if (spec.custom_g.size() < limit)
      throw std::invalid_argument("custom g table is shorter than the requested limit");
    for (std::uint64_t n = 1; n <= limit; ++n) g[n] = spec.custom_g[n - 1];
    return g;
  }
  if (spec.kind == GKind::Unit) {
    g[1] = 1;
    return g;
  }
  SieveData s = linear_sieve(limit);
  switch (spec.kind) {
    case GKind::Moebius:
      for (std::uint64_t n = 1; n <= limit; ++n) g[n] = s.mu[n];
      break;
    case GKind::One:
      for (std::uint64_t n = 1; n <= limit; ++n) g[n] = 1;
      break;
    case GKind::Liouville:
      for (std::uint64_t n = 1; n <= limit; ++n) g[n] = (s.big_omega[n] % 2 == 0) ? 1 : -1;
      break;
    case GKind::MoebiusSquared:
      for (std::uint64_t n = 1; n <= limit; ++n) g[n] = s.mu[n] ? 1 : 0;
      break;
    case GKind::PrimeIndicator:
      for (std::uint64_t p : s.primes) g[p] = 1;
      break;
    default:
      break;
  }
  return g;
}

// f = id * g over the whole table: f[k d] += k g[d].
inline std::vector<std::int64_t> convolve_with_id(std::span<const std::int64_t> g) {
  if (g.size() < 2) throw std::domain_error("g table must cover n = 1");
  std::uint64_t limit = g.size() - 1;
  std::vector<std::int64_t> f(limit + 1, 0);
  for (std::uint64_t d = 1; d <= limit; ++d) {
    std::int64_t gd = g[d];
    if (gd == 0) continue;
    for (std::uint64_t k = 1, m = d; k <= limit / d; ++k, m += d)
      f[m] += static_cast<std::int64_t>(k) * gd;
  }
  return f;
}

struct ValueTable {
  std::uint64_t limit = 0;
  std::vector<std::int64_t> g;  // g[0] unused
  std::vector<std::int64_t> f;  // f[0] unused
  std::vector<std::uint64_t> primes;  // all primes <= limit
};

inline ValueTable build_table(const GSpec& spec, std::uint64_t limit) {
  if (limit < 1) throw std::domain_error("table limit must be >= 1");
  ValueTable t;
  t.limit = limit;
  t.g = sieve_g(spec, limit);
  if (spec.growth == Growth::Bounded) {
    for (std::uint64_t n = 1; n <= limit; ++n)
      if (t.g[n] > 1 || t.g[n] < -1)
        throw std::invalid_argument("declared Bounded growth but |g| > 1 in table");
  }
  t.f = convolve_with_id(t.g);
  SieveData s = linear_sieve(limit);
  t.primes = std::move(s.primes);
  return t;
}

// ---- factoring and isolated values ----------------------------------------

struct PrimePower {
  std::uint64_t p;
  unsigned e;
};

// Trial division by the supplied primes. The list must be a complete initial
// segment of the primes; `complete_to` states the bound it is complete up to
// (0 means "up to primes.back()"). A leftover cofactor with no listed factor
// is certified prime only when every prime <= sqrt(cofactor) was available.
inline std::vector<PrimePower> factorize(std::uint64_t q, std::span<const std::uint64_t> primes,
                                         std::uint64_t complete_to = 0) {
  if (q == 0) throw std::domain_error("factorize requires q >= 1");
  std::uint64_t known = complete_to;
  if (known == 0 && !primes.empty()) known = primes.back();
  std::vector<PrimePower> out;
  std::uint64_t rem = q;
  std::size_t i = 0;
  while (rem > 1) {
    if (i >= primes.size()) {
      // a composite cofactor would have two factors above every known prime
      bool certified = known >= (std::uint64_t(1) << 32) || (known + 1) * (known + 1) > rem;
      if (certified) break;
      throw std::domain_error("prime table too small to factor q");
    }
    std::uint64_t p = primes[i];
    if (p * p > rem) break;  // all smaller primes were tested: leftover is prime
    if (rem % p == 0) {
      unsigned e = 0;
      while (rem % p == 0) {
        rem /= p;
        ++e;
      }
      out.push_back({p, e});
    }
    ++i;
  }
  if (rem > 1) out.push_back({rem, 1});
  return out;
}

namespace detail {

inline std::int64_t pow_sum(std::uint64_t p, unsigned e) {
  // 1 + p + ... + p^e
  std::int64_t acc = 1, pk = 1;
  for (unsigned k = 1; k <= e; ++k) {
    pk *= static_cast<std::int64_t>(p);
    acc += pk;
  }
  return acc;
}

inline std::int64_t ipow(std::uint64_t p, unsigned e) {
  std::int64_t acc = 1;
  for (unsigned k = 0; k < e; ++k) acc *= static_cast<std::int64_t>(p);
  return acc;
}

// Divisor-sum fallback for Custom: f(q) = sum_{d | q} (q/d) g(d), with every
// divisor enumerated from the factorization.
inline std::int64_t custom_f_from_divisors(std::uint64_t q, const GSpec& spec,
                                           std::span<const std::uint64_t> primes,
                                           std::uint64_t complete_to) {
  if (spec.custom_g.size() < q)
    throw std::domain_error("cannot evaluate custom g at isolated point: table ends before q");
  std::vector<PrimePower> fac = factorize(q, primes, complete_to);
  std::vector<std::uint64_t> divisors{1};
  for (const auto& pp : fac) {
    std::size_t base = divisors.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= pp.e; ++k) {
      pk *= pp.p;
      for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * pk);
    }
  }
  std::int64_t acc = 0;
  for (std::uint64_t d : divisors)
    acc += static_cast<std::int64_t>(q / d) * spec.custom_g[d - 1];
  return acc;
}

}  // namespace detail

// f(q) at an isolated point, closed form per kind.
inline std::int64_t f_at(std::uint64_t q, const GSpec& spec,
                         std::span<const std::uint64_t> primes,
                         std::uint64_t primes_complete_to = 0) {
  if (q == 0) throw std::domain_error("f_at requires q >= 1");
  if (spec.kind == GKind::Unit) return static_cast<std::int64_t>(q);
  if (spec.kind == GKind::Custom)
    return detail::custom_f_from_divisors(q, spec, primes, primes_complete_to);
  std::vector<PrimePower> fac = factorize(q, primes, primes_complete_to);
  std::int64_t acc = (spec.kind == GKind::PrimeIndicator) ? 0 : 1;
  for (const auto& pp : fac) {
    auto p = static_cast<std::int64_t>(pp.p);
    switch (spec.kind) {
      case GKind::Moebius:  // phi(p^e) = p^(e-1) (p - 1)
        acc *= detail::ipow(pp.p, pp.e - 1) * (p - 1);
        break;
      case GKind::One:  // sigma(p^e)
        acc *= detail::pow_sum(pp.p, pp.e);
        break;
      case GKind::MoebiusSquared:  // Psi(p^e) = p^(e-1) (p + 1)
        acc *= detail::ipow(pp.p, pp.e - 1) * (p + 1);
        break;
      case GKind::Liouville: {  // b_k = p b_{k-1} + (-1)^k, b_0 = 1
        std::int64_t b = 1;
        for (unsigned k = 1; k <= pp.e; ++k) b = p * b + ((k % 2) ? -1 : 1);
        acc *= b;
        break;
      }
      case GKind::PrimeIndicator:
        acc += static_cast<std::int64_t>(q / pp.p);
        break;
      default:
        break;
    }
  }
  return acc;
}

// ---- dump / restore --------------------------------------------------------

namespace detail {

inline void put_le64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

inline std::uint64_t get_le64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("truncated table file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline constexpr std::uint64_t kTableMagic = 0x46515442u;  // "FQTB"

// Binary layout: magic, limit, then limit records of (m, g(m), f(m)) as
// little-endian 64-bit values (g and f two's-complement).
inline void dump_table_binary(const ValueTable& t, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open table file for writing: " + path.string());
  detail::put_le64(os, kTableMagic);
  detail::put_le64(os, t.limit);
  for (std::uint64_t m = 1; m <= t.limit; ++m) {
    detail::put_le64(os, m);
    detail::put_le64(os, static_cast<std::uint64_t>(t.g[m]));
    detail::put_le64(os, static_cast<std::uint64_t>(t.f[m]));
  }
  if (!os) throw std::runtime_error("short write while dumping table");
}

inline ValueTable load_table_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open table file: " + path.string());
  if (detail::get_le64(is) != kTableMagic) throw std::runtime_error("not a table file");
  ValueTable t;
  t.limit = detail::get_le64(is);
  if (t.limit < 1) throw std::runtime_error("corrupt table: empty");
  t.g.assign(t.limit + 1, 0);
  t.f.assign(t.limit + 1, 0);
  for (std::uint64_t m = 1; m <= t.limit; ++m) {
    std::uint64_t idx = detail::get_le64(is);
    if (idx != m) throw std::runtime_error("corrupt table: row index mismatch");
    t.g[m] = static_cast<std::int64_t>(detail::get_le64(is));
    t.f[m] = static_cast<std::int64_t>(detail::get_le64(is));
  }
  SieveData s = linear_sieve(t.limit);
  t.primes = std::move(s.primes);
  return t;
}

inline void dump_table_csv(const ValueTable& t, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open table file for writing: " + path.string());
  os << "m,g,f\n";
  for (std::uint64_t m = 1; m <= t.limit; ++m)
    os << m << ',' << t.g[m] << ',' << t.f[m] << '\n';
  if (!os) throw std::runtime_error("short write while dumping table");
}

inline ValueTable load_table_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open table file: " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "m,g,f")
    throw std::runtime_error("not a table CSV: bad header");
  ValueTable t;
  std::uint64_t expect = 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("corrupt table CSV row");
    std::uint64_t m = std::stoull(line.substr(0, c1));
    if (m != expect) throw std::runtime_error("corrupt table CSV: row index mismatch");
    t.g.push_back(std::stoll(line.substr(c1 + 1, c2 - c1 - 1)));
    t.f.push_back(std::stoll(line.substr(c2 + 1)));
    ++expect;
  }
  if (expect == 1) throw std::runtime_error("corrupt table CSV: empty");
  t.limit = expect - 1;
  t.g.insert(t.g.begin(), 0);
  t.f.insert(t.f.begin(), 0);
  SieveData s = linear_sieve(t.limit);
  t.primes = std::move(s.primes);
  return t;
}

}  // namespace fqsums
