#pragma once

// Floor-quotient sums S_f(x) = sum_{n <= x} f([x/n]) / [x/n]. The quotient
// [x/n] takes O(sqrt x) distinct values; enumerate_blocks lists each value q
// with its multiplicity, block_sum folds f over the blocks exactly, and
// naive_sum is the literal loop kept as an oracle.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqsums/arith.hpp"
#include "fqsums/numeric.hpp"

namespace fqsums {

struct Block {
  std::uint64_t q;      // common quotient value
  std::uint64_t count;  // #{ n <= x : [x/n] = q }
};

struct BlockDecomposition {
  std::uint64_t x = 0;
  std::vector<Block> blocks;  // ascending in q
};

inline BlockDecomposition enumerate_blocks(std::uint64_t x) {
  if (x == 0) throw std::domain_error("x must be >= 1");
  BlockDecomposition d;
  d.x = x;
  for (std::uint64_t n = 1; n <= x;) {
    std::uint64_t q = x / n;
    std::uint64_t n_hi = x / q;  // largest n sharing this quotient
    d.blocks.push_back({q, n_hi - n + 1});
    n = n_hi + 1;
  }
  std::reverse(d.blocks.begin(), d.blocks.end());
  return d;
}

// Table-or-closed-form lookup shared by the block evaluators. The table's
// prime list is complete up to its limit, which certifies leftover cofactors.
inline std::int64_t f_value(std::uint64_t q, const GSpec& spec, const ValueTable& table) {
  if (q <= table.limit) return table.f[q];
  return f_at(q, spec, table.primes, table.limit);
}

// Literal n = 1..x loop. Requires table coverage of every quotient, i.e.
// table.limit >= x. Kept quadratic-free but term-by-term on purpose.
inline Rational naive_sum(const GSpec& spec, const ValueTable& table, std::uint64_t x) {
  if (x == 0) throw std::domain_error("x must be >= 1");
  if (table.limit < x) throw std::domain_error("naive_sum needs a value table covering x");
  (void)spec;
  Rational acc(0);
  for (std::uint64_t n = 1; n <= x; ++n) {
    std::uint64_t q = x / n;
    acc += Rational(table.f[q], q);
  }
  return acc;
}

// Exact block evaluation: sum over blocks of count * f(q) / q. Needs the
// table (and its prime list) to reach sqrt(x) so off-table quotients can be
// factored.
inline Rational block_sum(const GSpec& spec, const ValueTable& table, std::uint64_t x,
                          unsigned threads = 1) {
  if (x == 0) throw std::domain_error("x must be >= 1");
  if (table.limit < isqrt(x))
    throw std::domain_error("block_sum needs a value table covering sqrt(x)");
  BlockDecomposition d = enumerate_blocks(x);
  const auto& blocks = d.blocks;
  auto term = [&](std::uint64_t i) {
    const Block& b = blocks[i];
    std::int64_t fq = f_value(b.q, spec, table);
    return Rational(Int(fq) * b.count, Int(b.q));
  };
  return split_rational_sum(0, blocks.size() - 1, term, threads);
}

// Split of S_f(x) at n = cut: the head is the literal sum over n <= cut, the
// rest regroups n > cut by quotient value. remainder0/remainder1 are the
// sawtooth-weighted sums sum_{cut < m <= x/cut} (f(m)/m) psi(x/(m+delta)) for
// delta = 0, 1, where psi(t) = t - [t] - 1/2; both are exact rationals here
// and are reported as decimals at the stated precision.
struct SplitReport {
  std::uint64_t x = 0;
  std::uint64_t cut = 0;  // split point N
  Rational head;          // n <= cut
  Rational rest;          // n > cut
  std::string remainder0;
  std::string remainder1;
  unsigned precision = kDefaultDigits;
  bool degenerate = false;  // cut^3 > x: regrouped range dominates
};

namespace detail {

inline Rational sawtooth_weighted_sum(const GSpec& spec, const ValueTable& table,
                                      std::uint64_t x, std::uint64_t m_lo, std::uint64_t m_hi,
                                      std::uint64_t delta, unsigned threads) {
  if (m_lo > m_hi) return Rational(0);
  auto term = [&](std::uint64_t m) {
    std::uint64_t den = m + delta;
    std::uint64_t r = x % den;
    // psi(x/den) = r/den - 1/2 exactly for integer x, den
    Rational saw(Int(2 * r) - Int(den), Int(2) * den);
    return Rational(Int(f_value(m, spec, table)), Int(m)) * saw;
  };
  return split_rational_sum(m_lo, m_hi, term, threads);
}

}  // namespace detail

inline SplitReport split_report(const GSpec& spec, const ValueTable& table, std::uint64_t x,
                                std::uint64_t cut, unsigned digits = kDefaultDigits,
                                unsigned threads = 1) {
  if (x == 0) throw std::domain_error("x must be >= 1");
  if (cut < 1) throw std::domain_error("split point must be >= 1");
  // Admissible range: cut < x^(1/3) + 1, i.e. (cut - 1)^3 < x.
  if (cut - 1 > icbrt(x - 1))
    throw std::domain_error("split point out of range: need (cut - 1)^3 < x");
  if (table.limit < isqrt(x))
    throw std::domain_error("split_report needs a value table covering sqrt(x)");
  SplitReport rep;
  rep.x = x;
  rep.cut = cut;
  rep.precision = digits;
  rep.degenerate = cut > icbrt(x);

  auto head_term = [&](std::uint64_t n) {
    std::uint64_t q = x / n;
    return Rational(Int(f_value(q, spec, table)), Int(q));
  };
  rep.head = split_rational_sum(1, std::min(cut, x), head_term, threads);

  // Regrouped part: clip each quotient block to n > cut.
  Rational rest(0);
  if (cut < x) {
    BlockDecomposition d = enumerate_blocks(x);
    const auto& blocks = d.blocks;
    auto term = [&](std::uint64_t i) {
      const Block& b = blocks[i];
      std::uint64_t n_hi = x / b.q;
      std::uint64_t n_lo = x / (b.q + 1) + 1;
      std::uint64_t lo = std::max(n_lo, cut + 1);
      if (lo > n_hi) return Rational(0);
      std::uint64_t cnt = n_hi - lo + 1;
      return Rational(Int(f_value(b.q, spec, table)) * cnt, Int(b.q));
    };
    rest = split_rational_sum(0, blocks.size() - 1, term, threads);
  }
  rep.rest = rest;

  std::uint64_t m_hi = x / cut;
  Rational r0 = detail::sawtooth_weighted_sum(spec, table, x, cut + 1, m_hi, 0, threads);
  Rational r1 = detail::sawtooth_weighted_sum(spec, table, x, cut + 1, m_hi, 1, threads);
  rep.remainder0 = decimal_string(r0, digits);
  rep.remainder1 = decimal_string(r1, digits);
  return rep;
}

}  // namespace fqsums
