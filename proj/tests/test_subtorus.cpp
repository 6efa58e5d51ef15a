#include <torsion/oracle.hpp>
#include <torsion/subtorus.hpp>

#include <doctest.h>

#include "test_support.hpp"

using namespace torsion;

namespace {

ProductSystem one_product(std::size_t n, std::vector<std::string> factors) {
  ProductSystem sys{n, {{}}};
  for (const auto& f : factors) sys.products[0].push_back(parse_poly(f, n));
  return sys;
}

ProductSystem deg255255_system() {
  ProductSystem sys{1, {{}}};
  sys.products[0] = {parse_poly(testing::read_data("f255255.txt"), 1), parse_poly("x1^13 - 1", 1),
                     parse_poly("x1^7 - 1", 1)};
  return sys;
}

ProductSystem random_system(std::mt19937_64& rng, std::size_t n) {
  ProductSystem sys{n, {}};
  const int k = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < k; ++i) {
    std::vector<SparsePoly> factors;
    const int l = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < l; ++j) factors.push_back(testing::random_poly(rng, n, 1 + rng() % 4, 9, 3));
    sys.products.push_back(std::move(factors));
  }
  return sys;
}

}  // namespace

TEST_CASE("compute_params") {
  // norms are taken after f is folded mod x^91 - 1
  const AlgorithmParams p = compute_params(deg255255_system(), {Int(91)});
  CHECK(p.N == 464);
  CHECK(p.D == 93);
  CHECK(p.lcm == 91);
  CHECK(p.M == 546);

  for (long d : {1L, 2L, 5L, 12L}) {
    const auto q = compute_params(one_product(1, {"x1^" + std::to_string(d) + " - 1"}), {Int(d)});
    CHECK(q.D == d + 2);
    CHECK(q.M == (2 * d + 1) / d * d);  // ceil((d + 2) / d) * d
    CHECK(q.N == 0);  // the reduced factor is zero
    CHECK(q.zero_product[0]);
  }
  const auto c = compute_params(one_product(1, {"1"}), {Int(1)});
  CHECK(c.N == 1);
  CHECK(c.D == 3);
  CHECK(c.M == 3);

  // free variable degrees count toward D
  const auto f = compute_params(one_product(2, {"x2^4 + x1", "x2^5 - 1"}), {Int(3)});
  CHECK(f.D == 11);
}

TEST_CASE("deterministic containment") {
  CHECK(contains_subtorus_deterministic(
      one_product(2, {"1 + x1 + x2", "1 + x1 + x2^2", "x1 - 1", "x2 - 1"}), {Int(3), Int(3)}));
  CHECK_FALSE(contains_subtorus_deterministic(one_product(2, {"1 + x1 + x2", "x1 - 1", "x2 - 1"}),
                                              {Int(3), Int(3)}));
  CHECK(contains_subtorus_deterministic(one_product(1, {"x1^6 - 1"}), {Int(3)}));
  CHECK_FALSE(contains_subtorus_deterministic(deg255255_system(), {Int(91)}));
  CHECK_THROWS(contains_subtorus_deterministic(one_product(1, {"x1"}), {Int(2), Int(3)}));
}

TEST_CASE("pinned certificate at q = 258623") {
  const ProductSystem sys = deg255255_system();
  CertificateSearchConfig cfg;
  cfg.pin_c = Int(2842);
  cfg.samples = 0;
  NonContainmentCertificate cert{Int(91), Int(2842), Int(258623), {Int(3)}, 0, Int(76177)};
  CHECK(verify_certificate(cert, sys, {Int(91)}));
  CHECK(format_certificate(cert) == "q=258623 c=2842 t=(3) i=1 value=76177");

  auto bad = cert;
  bad.value = 0;
  CHECK_FALSE(verify_certificate(bad, sys, {Int(91)}));
  bad = cert;
  bad.value = 76178;
  CHECK_FALSE(verify_certificate(bad, sys, {Int(91)}));
  bad = cert;
  bad.c = 2;  // q = 183 = 3 * 61
  bad.q = 183;
  CHECK_FALSE(verify_certificate(bad, sys, {Int(91)}));
  bad = cert;
  bad.t = {Int(0)};
  CHECK_FALSE(verify_certificate(bad, sys, {Int(91)}));

  const CertificateSearch s = find_certificate(sys, {Int(91)}, cfg);
  REQUIRE(s.status == SearchStatus::Found);
  CHECK(s.q == 258623);
  CHECK(s.c == 2842);
  CHECK(verify_certificate(*s.certificate, sys, {Int(91)}));
  // t = 1, 2 map to roots of x^7 - 1 and x^13 - 1, so the first hit is t = 3
  CHECK(s.certificate->t[0] == 3);
  CHECK(s.certificate->value == 76177);

  CertificateSearchConfig pq;
  pq.pin_q = Int(258623);
  CHECK(find_certificate(sys, {Int(91)}, pq).c == 2842);
  pq.pin_q = Int(258631);
  CHECK_THROWS(find_certificate(sys, {Int(91)}, pq));
}

TEST_CASE("default prime choice") {
  const CertificateSearch s = find_certificate(deg255255_system(), {Int(91)});
  CHECK(s.M == 546);
  CHECK(s.q == 547);
  CHECK(s.c == 1);
  CHECK(s.q_meets_bounds);
  REQUIRE(s.status == SearchStatus::Found);
  CHECK(verify_certificate(*s.certificate, deg255255_system(), {Int(91)}));
}

TEST_CASE("find_certificate on contained systems") {
  const auto s = find_certificate(one_product(1, {"x1 - 1"}), {Int(1)});
  CHECK(s.status == SearchStatus::NotFound);
  const auto t =
      find_certificate(one_product(2, {"1 + x1 + x2", "1 + x1 + x2^2", "x1 - 1", "x2 - 1"}),
                       {Int(3), Int(3)});
  CHECK(t.status == SearchStatus::NotFound);
  CHECK(t.q_meets_bounds);

  CertificateSearchConfig tiny;
  tiny.sweep_cap = 3;
  tiny.samples = 0;
  CHECK(find_certificate(one_product(2, {"x1^3 - 1 + x2^3 - 1", "x2 + 5"}), {Int(3)}, tiny).status ==
        SearchStatus::Inconclusive);
}

TEST_CASE("certificate search agrees with bar-reduction and the oracle") {
  std::mt19937_64 rng(99);
  int found = 0;
  for (int it = 0; it < 150; ++it) {
    const std::size_t n = 1 + rng() % 2;
    const std::size_t r = 1 + rng() % n;
    const ProductSystem sys = random_system(rng, n);
    std::vector<Int> d;
    for (std::size_t v = 0; v < r; ++v) d.emplace_back(1 + rng() % 6);
    const bool det = contains_subtorus_deterministic(sys, d);
    CHECK(det == brute_force_contains_subtorus(sys, d));
    CertificateSearchConfig cfg;
    cfg.seed = rng();
    const auto s = find_certificate(sys, d, cfg);
    if (det) {
      CHECK(s.status == SearchStatus::NotFound);
    } else {
      REQUIRE(s.status == SearchStatus::Found);
      CHECK(verify_certificate(*s.certificate, sys, d));
      ++found;
    }
  }
  CHECK(found > 20);
}

TEST_CASE("monotonicity: x1^d1 - 1 factor forces containment") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 1 + rng() % 2;
    ProductSystem sys = random_system(rng, n);
    const std::vector<Int> d{Int(1 + static_cast<long>(rng() % 7))};
    for (auto& prod : sys.products) prod.push_back(SparsePoly::binomial_minus_one(n, 0, d[0]));
    CHECK(contains_subtorus_deterministic(sys, d));
  }
}

TEST_CASE("general presentations") {
  const ProductSystem sys = one_product(2, {"x1^2 - 1"});
  CHECK(contains_subtorus_general(sys, {{Int(2), Int(0)}, {Int(0), Int(3)}}));
  CHECK_FALSE(contains_subtorus_general(one_product(2, {"x1 - 1"}), {{Int(2), Int(0)}, {Int(0), Int(3)}}));
  // x1 x2 = 1 is contained in Z(x1 x2 - 1), not in Z(x1 - 1)
  CHECK(contains_subtorus_general(one_product(2, {"x1*x2 - 1"}), {{Int(1), Int(1)}}));
  CHECK_FALSE(contains_subtorus_general(one_product(2, {"x1 - 1"}), {{Int(1), Int(1)}}));
  // diagonal presentations agree with the direct test
  std::mt19937_64 rng(21);
  for (int it = 0; it < 60; ++it) {
    const ProductSystem s = random_system(rng, 2);
    const Int a(1 + static_cast<long>(rng() % 5)), b(1 + static_cast<long>(rng() % 5));
    CHECK(contains_subtorus_general(s, {{a, Int(0)}, {Int(0), b}}) ==
          contains_subtorus_deterministic(s, {a, b}));
  }
  // full-rank random presentations against enumeration inside mu_D^2
  for (int it = 0; it < 120; ++it) {
    std::vector<std::vector<Int>> dbars(2, std::vector<Int>(2));
    for (auto& v : dbars)
      for (auto& x : v) x = testing::uniform(rng, -4, 4);
    if (determinant(IntMatrix::from_columns(dbars, 2)) == 0) continue;
    const ProductSystem s = random_system(rng, 2);
    CHECK(contains_subtorus_general(s, dbars) == brute_force_contains_finite_subtorus(s, dbars));
  }
}
