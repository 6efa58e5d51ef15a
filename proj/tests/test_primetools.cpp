#include <torsion/primetools.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <set>

using namespace torsion;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime(from_u64(n)) == trial_division_prime(n));
  std::mt19937_64 rng(1);
  for (int it = 0; it < 500; ++it) {
    const std::uint64_t n = 1'000'000 + rng() % 10'000'000'000ull;
    CHECK(is_prime(from_u64(n)) == trial_division_prime(n));
  }
}

TEST_CASE("primality: known values") {
  CHECK(primality(Int(258623)) == Primality::Prime);
  CHECK(primality(Int(106696591)) == Primality::Prime);
  CHECK(primality(Int(69529066111)) == Primality::Prime);
  CHECK(is_prime(Int("4491828078538834477370467060773855421")));
  // strong pseudoprimes to many small bases
  CHECK_FALSE(is_prime(Int("3215031751")));
  CHECK_FALSE(is_prime(Int("3825123056546413051")));
  CHECK_FALSE(is_prime(Int("318665857834031151167461")));
  // Mersenne prime above the deterministic range
  const Int m127 = pow_ui(Int(2), 127) - 1;
  CHECK(primality(m127) == Primality::ProbablePrime);
  CHECK_FALSE(is_prime(m127 * 3));
  CHECK_FALSE(is_prime(Int(1)));
  CHECK_FALSE(is_prime(Int(-7)));
}

TEST_CASE("progression primes") {
  auto p = find_progression_prime(Int(91), Int(255256));
  CHECK(p.c == 2832);
  CHECK(p.q == 257713);
  CHECK(p.q > 255256);
  p = find_progression_prime(Int(91), Int(0));
  CHECK(p.c == 6);
  CHECK(p.q == 547);
  CHECK(is_prime(Int(2842 * 91 + 1)));
  p = find_progression_prime(Int(1), Int(0));
  CHECK(p.q == 2);

  LinnikConfig tiny;
  tiny.cap_override = Int(1);
  CHECK_THROWS_AS(find_progression_prime(Int(7), Int(0), tiny), PrimeSearchExhausted);  // 8 composite
  CHECK(linnik_cap(Int(10), LinnikConfig{}) == 316227);
  CHECK(linnik_cap(Int(1), LinnikConfig{}) == 1);
}

TEST_CASE("progression sampling is reproducible") {
  std::mt19937_64 a(42), b(42);
  const auto s1 = sample_progression_prime(Int(210), Int(1000), Int(50), a);
  const auto s2 = sample_progression_prime(Int(210), Int(1000), Int(50), b);
  REQUIRE(s1.prime);
  CHECK(s1.prime->q == s2.prime->q);
  CHECK(s1.draws == s2.draws);
  CHECK(s1.prime->q == s1.prime->c * 210 + 1);
  for (const auto& d : s1.draws) CHECK((d >= 1 && d <= 1000));

  std::mt19937_64 c(7);
  const auto none = sample_progression_prime(Int(7), Int(1), Int(5), c);  // only j=1, q=8
  CHECK_FALSE(none.prime);
  CHECK(none.draws.size() == 5);
}

TEST_CASE("uniform_int covers big ranges") {
  std::mt19937_64 rng(9);
  const Int lo("100000000000000000000000000000"), hi("100000000000000000000000000009");
  std::set<Int> seen;
  for (int i = 0; i < 500; ++i) {
    const Int v = uniform_int(lo, hi, rng);
    CHECK(v >= lo);
    CHECK(v <= hi);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("factoring") {
  CHECK(factor(Int(510510)) == std::vector<Int>{2, 3, 5, 7, 11, 13, 17});
  CHECK(divisors(Int(510510)).size() == 128);
  CHECK(divisors(Int(4849845)).size() == 128);
  CHECK(divisors(Int(12)) == std::vector<Int>{1, 2, 3, 4, 6, 12});
  CHECK(factor(Int(1)).empty());
  CHECK(prime_divisors(Int(360)) == std::vector<Int>{2, 3, 5});
  CHECK(euler_phi(Int(210)) == 48);

  const Int p1("1000000000039"), p2("1000000000000000003");
  CHECK(factor(p1 * p2) == std::vector<Int>{p1, p2});
  std::mt19937_64 rng(2);
  for (int it = 0; it < 100; ++it) {
    const Int n = from_u64(2 + rng() % 10'000'000'000ull);
    const auto f = factor(n);
    Int prod = 1;
    for (const auto& p : f) {
      CHECK(is_prime(p));
      prod *= p;
    }
    CHECK(prod == n);
  }
  FactorConfig cfg;
  cfg.rho_iterations = 1;
  CHECK_THROWS_AS(factor(p2 * p2, cfg), FactorError);
}

TEST_CASE("roots of unity") {
  CHECK(primitive_root(Int(7)) == 3);
  CHECK(primitive_root(Int(2)) == 1);
  const auto r = roots_of_unity_mod(Int(7), Int(3));
  CHECK(std::set<Int>(r.begin(), r.end()) == std::set<Int>{1, 2, 4});
  CHECK_THROWS(subgroup_generator(Int(7), Int(4)));
  const Int q(106696591);
  const Int h = subgroup_generator(q, Int(4849845));
  CHECK(pow_mod(h, Int(4849845), q) == 1);
  for (const auto& p : prime_divisors(Int(4849845))) CHECK(pow_mod(h, Int(4849845) / p, q) != 1);
}
