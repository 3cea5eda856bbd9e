#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fqsums/constants.hpp"

using namespace fqsums;

TEST_CASE("frozen partial sums") {
  ValueTable phi = build_table(GSpec::moebius(), 3);
  REQUIRE(partial_constant_sum(phi, 3) == Rational(23, 36));
  ValueTable sigma = build_table(GSpec::one(), 2);
  REQUIRE(partial_constant_sum(sigma, 2) == Rational(3, 4));
}

TEST_CASE("partial sum needs table coverage") {
  ValueTable t = build_table(GSpec::moebius(), 10);
  REQUIRE_THROWS_AS(partial_constant_sum(t, 11), std::domain_error);
  REQUIRE_THROWS_AS(partial_constant_sum(t, 0), std::domain_error);
}

TEST_CASE("threaded partial sum agrees with sequential") {
  ValueTable t = build_table(GSpec::one(), 5000);
  REQUIRE(partial_constant_sum(t, 5000, 4) == partial_constant_sum(t, 5000, 1));
}

TEST_CASE("frozen tail bound values") {
  TailBound t100 = tail_bound(100, Growth::Bounded);
  REQUIRE(t100.certified);
  REQUIRE(t100.value > Real("0.0660517"));
  REQUIRE(t100.value < Real("0.0660519"));
  TailBound t2 = tail_bound(2, Growth::Bounded);
  REQUIRE(t2.value > Real("1.34657"));
  REQUIRE(t2.value < Real("1.34658"));
  REQUIRE_THROWS_AS(tail_bound(1, Growth::Bounded), std::domain_error);
}

TEST_CASE("subpolynomial tails need a declaration") {
  REQUIRE_THROWS_AS(tail_bound(100, Growth::Subpolynomial), std::invalid_argument);
  TailBound declared =
      tail_bound(100, Growth::Subpolynomial, SubpolyBound{2.0, 0.25, false});
  REQUIRE_FALSE(declared.certified);
  REQUIRE(declared.value > 0);
  TailBound proved = tail_bound(100, Growth::Subpolynomial, SubpolyBound{2.0, 0.25, true});
  REQUIRE(proved.certified);
  REQUIRE_THROWS_AS(tail_bound(100, Growth::Subpolynomial, SubpolyBound{2.0, 0.7, true}),
                    std::invalid_argument);
}

TEST_CASE("tail bound dominates the brute-force tail for every named kind") {
  const std::uint64_t far = 10'000'000;
  std::vector<GSpec> specs = {GSpec::moebius(), GSpec::one(), GSpec::liouville(),
                              GSpec::moebius_squared(), GSpec::prime_indicator(),
                              GSpec::unit()};
  for (const GSpec& spec : specs) {
    ValueTable t = build_table(spec, far);
    for (std::uint64_t M : {100ull, 1000ull, 10000ull}) {
      double brute = 0;
      for (std::uint64_t m = far; m > M; --m) {
        double fm = static_cast<double>(t.f[m]);
        brute += std::abs(fm) / (static_cast<double>(m) * m * (m + 1));
      }
      double bound = tail_bound(M, Growth::Bounded).value.convert_to<double>();
      INFO("kind " << kind_name(spec.kind) << " M " << M << " brute " << brute
                   << " bound " << bound);
      REQUIRE(brute <= bound);
      // the majorant is within a log factor, not orders of magnitude slack
      REQUIRE(bound <= brute * 40.0 + 1e-12);
    }
  }
}

TEST_CASE("declared subpolynomial tail dominates a genuinely growing g") {
  // g(n) = floor(n^0.3) satisfies |g(n)| <= n^0.31 for n >= 1
  const std::uint64_t far = 1'000'000;
  std::vector<std::int64_t> g(far);
  for (std::uint64_t n = 1; n <= far; ++n)
    g[n - 1] = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 0.3)));
  GSpec spec = GSpec::custom(std::move(g), Growth::Subpolynomial, SubpolyBound{1.0, 0.31, true});
  ValueTable t = build_table(spec, far);
  for (std::uint64_t M : {100ull, 1000ull}) {
    double brute = 0;
    for (std::uint64_t m = M + 1; m <= far; ++m)
      brute += std::abs(static_cast<double>(t.f[m])) /
               (static_cast<double>(m) * m * (m + 1));
    double bound = tail_bound(M, spec.growth, spec.subpoly).value.convert_to<double>();
    INFO("M " << M << " brute " << brute << " bound " << bound);
    REQUIRE(brute <= bound);
  }
}

TEST_CASE("identity-kind enclosure straddles 1") {
  GSpec id = GSpec::unit();
  for (std::uint64_t M : {10ull, 100ull, 1000ull}) {
    ValueTable t = build_table(id, M);
    Enclosure e = enclose_constant(id, t, M);
    INFO("M " << M);
    REQUIRE(e.lo <= 1);
    REQUIRE(e.hi >= 1);
    REQUIRE(e.certified);
    // partial sum telescopes: sum_{m<=M} 1/(m(m+1)) = M/(M+1)
    REQUIRE(e.partial == Rational(M, M + 1));
  }
}

TEST_CASE("enclosures are nested as M grows, up to recorded slack") {
  std::vector<GSpec> specs = {GSpec::moebius(), GSpec::one(), GSpec::liouville(),
                              GSpec::moebius_squared(), GSpec::prime_indicator()};
  for (const GSpec& spec : specs) {
    ValueTable t = build_table(spec, 100000);
    Enclosure prev = enclose_constant(spec, t, 100);
    for (std::uint64_t M : {1000ull, 10000ull, 100000ull}) {
      Enclosure next = enclose_constant(spec, t, M);
      Real tol = prev.slack + next.slack;
      INFO("kind " << kind_name(spec.kind) << " M " << M);
      REQUIRE(next.lo >= prev.lo - tol);
      REQUIRE(next.hi <= prev.hi + tol);
      REQUIRE(next.lo <= next.hi);
      prev = next;
    }
  }
}

TEST_CASE("enclosure endpoints bracket the exact partial sum") {
  GSpec spec = GSpec::moebius();
  ValueTable t = build_table(spec, 1000);
  Enclosure e = enclose_constant(spec, t, 1000);
  Real partial_down = to_real(e.partial, MPFR_RNDD);
  Real partial_up = to_real(e.partial, MPFR_RNDU);
  REQUIRE(e.lo <= partial_down);
  REQUIRE(e.hi >= partial_up);
  REQUIRE(e.slack >= 0);
  REQUIRE(e.slack < Real("1e-40"));
  Real width = e.hi - e.lo;
  REQUIRE(width <= e.tail + e.slack + Real("1e-45"));
}

TEST_CASE("signed custom g widens both ends") {
  auto mu = sieve_g(GSpec::moebius(), 1000);
  GSpec custom = GSpec::custom(std::vector<std::int64_t>(mu.begin() + 1, mu.end()));
  ValueTable t = build_table(custom, 1000);
  Enclosure e = enclose_constant(custom, t, 1000);
  Real down = to_real(e.partial, MPFR_RNDD);
  Real up = to_real(e.partial, MPFR_RNDU);
  REQUIRE(e.lo < down);
  REQUIRE(e.hi > up);
  // compare against the named-kind enclosure: same partial, double width
  ValueTable tn = build_table(GSpec::moebius(), 1000);
  Enclosure en = enclose_constant(GSpec::moebius(), tn, 1000);
  REQUIRE(e.partial == en.partial);
  REQUIRE(e.hi - e.lo > en.hi - en.lo);
}

TEST_CASE("high-precision value of the partial sum is consistent") {
  // cross-check the exact rational against a plain double accumulation
  GSpec spec = GSpec::moebius();
  ValueTable t = build_table(spec, 1000);
  Rational exact = partial_constant_sum(t, 1000);
  double plain = 0;
  for (std::uint64_t m = 1; m <= 1000; ++m)
    plain += static_cast<double>(t.f[m]) / (static_cast<double>(m) * m * (m + 1));
  double exact_d = to_real(exact, MPFR_RNDN).convert_to<double>();
  REQUIRE(std::abs(plain - exact_d) < 1e-12);
}

TEST_CASE("serialized enclosure carries the contract fields") {
  GSpec spec = GSpec::one();
  ValueTable t = build_table(spec, 100);
  Enclosure e = enclose_constant(spec, t, 100, 30);
  std::string json = enclosure_json(e);
  REQUIRE(json.find("\"kind\": \"sigma\"") != std::string::npos);
  REQUIRE(json.find("\"M\": 100") != std::string::npos);
  REQUIRE(json.find("\"lo\": ") != std::string::npos);
  REQUIRE(json.find("\"hi\": ") != std::string::npos);
  REQUIRE(json.find("\"tail_bound\": ") != std::string::npos);
  REQUIRE(json.find("\"certified\": true") != std::string::npos);
  // printed endpoints must stay outward: parse back and compare
  auto grab = [&](const std::string& key) {
    std::size_t k = json.find("\"" + key + "\": \"");
    std::size_t start = k + key.size() + 5;
    std::size_t end = json.find('"', start);
    return json.substr(start, end - start);
  };
  REQUIRE(Real(grab("lo")) <= e.lo);
  REQUIRE(Real(grab("hi")) >= e.hi);
}

TEST_CASE("reference constants are pinned") {
  REQUIRE(abs(euler_gamma() - Real(kEulerGamma50)) < Real("1e-48"));
  REQUIRE(abs(pi_const() - Real(kPi50)) < Real("1e-47"));
}
