#include <torsion/oracle.hpp>
#include <torsion/primetools.hpp>

#include <doctest.h>
#include <mpfr.h>

#include "test_support.hpp"

using namespace torsion;

namespace {

DensePoly dense(std::vector<long> c) {
  std::vector<Int> v;
  for (long x : c) v.emplace_back(x);
  return DensePoly(v);
}

// Sylvester matrix determinant by fraction-free Bareiss elimination.
Int sylvester_resultant(const DensePoly& a, const DensePoly& b) {
  const long m = a.degree(), n = b.degree();
  const std::size_t s = static_cast<std::size_t>(m + n);
  if (s == 0) return 1;
  std::vector<std::vector<Int>> A(s, std::vector<Int>(s, Int(0)));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= m; ++j) A[i][i + j] = a.coeffs[static_cast<std::size_t>(m - j)];
  for (long i = 0; i < m; ++i)
    for (long j = 0; j <= n; ++j) A[n + i][i + j] = b.coeffs[static_cast<std::size_t>(n - j)];
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < s; ++k) {
    if (A[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < s && A[r][k] == 0) ++r;
      if (r == s) return 0;
      std::swap(A[k], A[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < s; ++i) {
      for (std::size_t j = k + 1; j < s; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
      A[i][k] = 0;
    }
    prev = A[k][k];
  }
  return sign * A[s - 1][s - 1];
}

// prod over zeta^M = 1 of f(zeta), rounded; equals Res(x^M - 1, f).
Int complex_cyclic_product(const SparsePoly& f, std::uint64_t M, mpfr_prec_t prec) {
  mpfr_t pr, pi, re, im, ang, c, s, t, u, tw;
  for (auto* v : {&pr, &pi, &re, &im, &ang, &c, &s, &t, &u, &tw}) mpfr_init2(*v, prec);
  mpfr_set_ui(pr, 1, MPFR_RNDN);
  mpfr_set_ui(pi, 0, MPFR_RNDN);
  mpfr_const_pi(tw, MPFR_RNDN);
  mpfr_mul_ui(tw, tw, 2, MPFR_RNDN);
  for (std::uint64_t k = 0; k < M; ++k) {
    mpfr_set_ui(re, 0, MPFR_RNDN);
    mpfr_set_ui(im, 0, MPFR_RNDN);
    for (const auto& [e, coef] : f.terms()) {
      const std::uint64_t r = (k * e[0].get_ui()) % M;
      mpfr_mul_ui(ang, tw, r, MPFR_RNDN);
      mpfr_div_ui(ang, ang, M, MPFR_RNDN);
      mpfr_sin_cos(s, c, ang, MPFR_RNDN);
      mpfr_mul_z(c, c, coef.get_mpz_t(), MPFR_RNDN);
      mpfr_mul_z(s, s, coef.get_mpz_t(), MPFR_RNDN);
      mpfr_add(re, re, c, MPFR_RNDN);
      mpfr_add(im, im, s, MPFR_RNDN);
    }
    mpfr_mul(t, pr, re, MPFR_RNDN);
    mpfr_mul(u, pi, im, MPFR_RNDN);
    mpfr_sub(t, t, u, MPFR_RNDN);
    mpfr_mul(u, pr, im, MPFR_RNDN);
    mpfr_mul(pi, pi, re, MPFR_RNDN);
    mpfr_add(pi, pi, u, MPFR_RNDN);
    mpfr_set(pr, t, MPFR_RNDN);
  }
  mpfr_round(pr, pr);
  Int out;
  mpfr_get_z(out.get_mpz_t(), pr, MPFR_RNDN);
  for (auto* v : {&pr, &pi, &re, &im, &ang, &c, &s, &t, &u, &tw}) mpfr_clear(*v);
  return out;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == dense({-1, 1}));
  CHECK(cyclotomic(6) == dense({1, -1, 1}));
  CHECK(cyclotomic(12) == dense({1, 0, -1, 0, 1}));
  for (std::uint64_t M = 1; M <= 300; ++M) {
    DensePoly prod = dense({1});
    for (const auto& d : divisors(from_u64(M))) prod = dense_mul(prod, cyclotomic(d.get_ui()));
    std::vector<Int> xm(M + 1, Int(0));
    xm[0] = -1;
    xm[M] = 1;
    CHECK(prod == DensePoly(xm));
    CHECK(cyclotomic(M).degree() == euler_phi(from_u64(M)));
  }
}

TEST_CASE("division") {
  const auto d = divide_monic(dense({-1, 0, 0, 1}), dense({-1, 1}));
  CHECK(d.quotient == dense({1, 1, 1}));
  CHECK(d.remainder.is_zero());
  const auto r = divide_monic(dense({3, 2, 1}), dense({1, 1}));
  CHECK(r.remainder == dense({2}));
  CHECK(sparse_from_dense(dense({-1, 0, 2})) == parse_poly("2*x1^2 - 1", 1));
  CHECK(dense_sub(dense({1, 2}), dense({1, 2})).is_zero());
}

TEST_CASE("vanishing at roots of unity") {
  CHECK(vanishes_at_primitive_root(parse_poly("x1^2 + x1 + 1", 1), 3));
  CHECK_FALSE(vanishes_at_primitive_root(parse_poly("x1^2 + x1 + 1", 1), 6));
  CHECK(vanishes_at_primitive_root(parse_poly("x1^3 + 1", 1), 6));
  const SparsePoly f = parse_poly(testing::read_data("f255255.txt"), 1);
  CHECK_FALSE(vanishes_at_primitive_root(f, 91));

  CHECK(eval_at_torsion_point({parse_poly("1 + x1 + x2", 2)}, {Int(3), {Int(1), Int(2)}}));
  CHECK_FALSE(eval_at_torsion_point({parse_poly("1 + x1 + x2", 2)}, {Int(3), {Int(1), Int(1)}}));
  CHECK(eval_at_torsion_point({parse_poly("x1*x2 - 1", 2)}, {Int(5), {Int(2), Int(3)}}));
  CHECK(torsion_value(parse_poly("x1 + x2", 2), {Int(4), {Int(1), Int(3)}}).is_zero());
}

TEST_CASE("brute force enumeration") {
  const auto w = brute_force_torsion(TorsionInstance{2, {parse_poly("1 + x1 + x2", 2)}, {Int(3), Int(3)}});
  REQUIRE(w);
  CHECK(w->M == 3);
  CHECK(w->a == std::vector<Int>{1, 2});
  CHECK_FALSE(brute_force_torsion(TorsionInstance{1, {parse_poly("x1 - 2", 1)}, {Int(30)}}));
  CHECK_THROWS_AS(brute_force_torsion(TorsionInstance{2, {parse_poly("x1", 2)}, {Int(2000), Int(2000)}}),
                  OracleCapExceeded);

  ProductSystem sys{2, {{parse_poly("1 + x1 + x2", 2), parse_poly("1 + x1 + x2^2", 2),
                         parse_poly("x1 - 1", 2), parse_poly("x2 - 1", 2)}}};
  CHECK(brute_force_contains_subtorus(sys, {Int(3), Int(3)}));
  sys.products[0].erase(sys.products[0].begin() + 1);
  CHECK_FALSE(brute_force_contains_subtorus(sys, {Int(3), Int(3)}));
  // a free variable: x1^2 - 1 vanishes on mu_2 x C*
  CHECK(brute_force_contains_subtorus(ProductSystem{2, {{parse_poly("x1^2 - 1", 2)}}}, {Int(2)}));
  CHECK_FALSE(brute_force_contains_subtorus(ProductSystem{2, {{parse_poly("x1 - x2", 2)}}}, {Int(1)}));
}

TEST_CASE("vanishing agrees with complex evaluation") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 200; ++it) {
    const SparsePoly f = testing::random_poly(rng, 1, 1 + rng() % 5, 15, 3);
    const std::uint64_t M = 1 + rng() % 24;
    const std::uint64_t a = rng() % M;
    // |f(e^{2 pi i a/M})| in long double; torsion values are algebraic integers,
    // so a nonzero one is far from zero at this size
    long double re = 0, im = 0;
    for (const auto& [e, c] : f.terms()) {
      const long double ang = 2 * 3.14159265358979323846264338327950288L * static_cast<long double>((a * e[0].get_ui()) % M) / M;
      re += c.get_si() * std::cos(ang);
      im += c.get_si() * std::sin(ang);
    }
    const bool zero = std::hypot(re, im) < 1e-9L;
    CHECK(torsion_value(f, {from_u64(M), {from_u64(a)}}).is_zero() == zero);
  }
}

TEST_CASE("resultants") {
  CHECK(abs(resultant(dense({-2, 1}), dense({-1, 0, 1}))) == 3);
  CHECK(resultant(dense({-1, 1}), dense({-1, 0, 1})) == 0);
  CHECK(resultant(dense({5}), dense({1, 1, 1})) == 25);
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    std::vector<long> ca(1 + rng() % 7), cb(1 + rng() % 7);
    for (auto& x : ca) x = testing::uniform(rng, -9, 9);
    for (auto& x : cb) x = testing::uniform(rng, -9, 9);
    ca.back() = ca.back() == 0 ? 1 : ca.back();
    cb.back() = cb.back() == 0 ? -1 : cb.back();
    const DensePoly a = dense(ca), b = dense(cb);
    CHECK(resultant(a, b) == sylvester_resultant(a, b));
  }
}

TEST_CASE("cyclic resultant against a complex product") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 150; ++it) {
    const SparsePoly f = testing::random_poly(rng, 1, 1 + rng() % 5, 10, 5);
    if (f.is_zero()) continue;
    const std::uint64_t M = 1 + rng() % 30;
    const long deg = dense_from_sparse(f).degree();
    Int expect = complex_cyclic_product(f, M, 400);
    if ((deg * static_cast<long>(M)) % 2 == 1) expect = -expect;
    CHECK(cyclic_resultant(f, M).value() == expect);
  }
}

TEST_CASE("sparse degree-105 instance") {
  const SparsePoly f = parse_poly(testing::read_data("f105.txt"), 1);
  const auto r210 = cyclic_resultant(f, 210);
  CHECK(r210.value() == complex_cyclic_product(f, 210, 4096));
  CHECK(r210.sign < 0);
  const auto r105 = cyclic_resultant(f, 105);
  CHECK(r105.magnitude.get_str() ==
        "2227699600874096872564585144832612236369963246002360338615319497424201747782488174224095731882015016718028");
  CHECK(r105.magnitude.get_str().size() == 106);
  CHECK(r210.magnitude.get_str().size() == 199);

  for (const char* p : {"69529066111", "4491828078538834477370467060773855421"}) {
    CHECK(exceptional_prime_check(f, 210, Int(p)));
    CHECK(Int(p) % 210 == 1);
  }
  CHECK_THROWS(exceptional_prime_check(f, 210, Int(212)));
  CHECK_FALSE(exceptional_prime_check(f, 210, Int(211)));
}
