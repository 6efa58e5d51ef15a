#include <torsion/oracle.hpp>
#include <torsion/torsion.hpp>

#include <doctest.h>

#include "test_support.hpp"

using namespace torsion;

namespace {

TorsionInstance instance(std::size_t n, std::vector<std::string> polys, std::vector<Int> d) {
  TorsionInstance inst{n, {}, std::move(d)};
  for (const auto& p : polys) inst.polys.push_back(parse_poly(p, n));
  return inst;
}

TorsionInstance pair_instance() {
  TorsionInstance inst{2, {}, {Int(4849845), Int(4849845)}};
  inst.polys.push_back(parse_poly(testing::read_data("pair_f.txt"), 2));
  inst.polys.push_back(parse_poly(testing::read_data("pair_g.txt"), 2));
  return inst;
}

}  // namespace

TEST_CASE("g_delta") {
  CHECK(g_delta(Int(91)) == multiply(parse_poly("x1^13 - 1", 1), parse_poly("x1^7 - 1", 1)));
  CHECK(g_delta(Int(1)) == parse_poly("1", 1));
  CHECK(g_delta(Int(6)) == multiply(parse_poly("x1^3 - 1", 1), parse_poly("x1^2 - 1", 1)));
  CHECK(g_delta_factors(Int(30)).size() == 3);
  // g_delta kills exactly the non-primitive delta-th roots of unity
  for (std::uint64_t delta = 1; delta <= 200; ++delta) {
    const SparsePoly g = g_delta(from_u64(delta));
    for (const auto& e : divisors(from_u64(delta))) {
      CHECK(vanishes_at_primitive_root(g, e.get_ui()) == (e != from_u64(delta)));
    }
  }
}

TEST_CASE("univariate decisions") {
  auto v = torsion_univariate({parse_poly("x1^2 + x1 + 1", 1)}, Int(3));
  CHECK(v.outcome == Outcome::Yes);
  CHECK(*v.delta == 3);
  CHECK(v.exact->M == 3);
  v = torsion_univariate({parse_poly("x1 - 1", 1)}, Int(5));
  CHECK(v.outcome == Outcome::Yes);
  CHECK(*v.delta == 1);
  v = torsion_univariate({parse_poly("x1 - 2", 1)}, Int(12));
  CHECK(v.outcome == Outcome::No);
  CHECK(v.provenance.divisors_scanned == 6);
  v = torsion_univariate({parse_poly(testing::read_data("f105.txt"), 1)}, Int(210));
  CHECK(v.outcome == Outcome::No);
  // common root needed, not one per polynomial
  v = torsion_univariate({parse_poly("x1 + 1", 1), parse_poly("x1 - 1", 1)}, Int(2));
  CHECK(v.outcome == Outcome::No);
  v = torsion_univariate({parse_poly("x1^2 - 1", 1), parse_poly("x1 + 1", 1)}, Int(4));
  CHECK(v.outcome == Outcome::Yes);
  CHECK(*v.delta == 2);
}

TEST_CASE("univariate agrees with enumeration") {
  std::mt19937_64 rng(41);
  int yes = 0;
  for (int it = 0; it < 300; ++it) {
    const Int d(1 + static_cast<long>(rng() % 120));
    std::vector<SparsePoly> polys;
    const int k = 1 + static_cast<int>(rng() % 2);
    for (int j = 0; j < k; ++j) polys.push_back(testing::random_poly(rng, 1, 1 + rng() % 4, 12, 2));
    if (rng() % 3 == 0) {
      // plant a cyclotomic factor so YES answers are common
      const auto phi = sparse_from_dense(cyclotomic(1 + rng() % 12));
      for (auto& p : polys) p = multiply(p, phi);
    }
    const auto v = torsion_univariate(polys, d);
    const auto b = brute_force_torsion(TorsionInstance{1, polys, {d}});
    CHECK((v.outcome == Outcome::Yes) == b.has_value());
    if (v.outcome == Outcome::Yes) {
      ++yes;
      CHECK(eval_at_torsion_point(polys, *v.exact));
    }
  }
  CHECK(yes > 30);
}

TEST_CASE("parameter bounds") {
  auto b = kps_bounds(instance(1, {"x1 - 2"}, {Int(1)}), 1.0);
  CHECK(b.E == 1);
  CHECK(b.L == 350);
  b = kps_bounds(instance(1, {"x1 - 2"}, {Int(2)}), 1.0);
  CHECK(b.E == 2);
  CHECK(b.L == 4092);
  b = kps_bounds(instance(2, {"x1 - x2"}, {Int(2), Int(3)}), 1.0);
  CHECK(b.sigma == doctest::Approx(1.0));
  CHECK(b.M == 6);
  // K, J strictly exceed their defining expressions
  CHECK(b.K > 36 * b.L * b.L);
  CHECK(b.J >= 1);
}

TEST_CASE("find_mod_root") {
  std::mt19937_64 rng(1);
  auto s = find_mod_root(instance(1, {"x1 - 1"}, {Int(3)}), Int(7), {}, rng);
  REQUIRE(s.status == SearchStatus::Found);
  CHECK((*s.point)[0] == 1);
  s = find_mod_root(instance(1, {"x1 - 3"}, {Int(1)}), Int(7), {}, rng);
  CHECK(s.status == SearchStatus::NotFound);
  s = find_mod_root(instance(1, {"x1^2 + x1 + 1"}, {Int(3)}), Int(7), {}, rng);
  REQUIRE(s.status == SearchStatus::Found);
  CHECK(verify_mod_root(instance(1, {"x1^2 + x1 + 1"}, {Int(3)}), Int(7), *s.point));
  s = find_mod_root(instance(2, {"x1 - 1", "x2 - 1"}, {Int(2), Int(2)}), Int(5), {}, rng);
  REQUIRE(s.status == SearchStatus::Found);
  CHECK(*s.point == std::vector<Int>{1, 1});

  ModRootBudget none;
  none.samples = 0;
  none.sweep_cap = 1;
  s = find_mod_root(instance(1, {"x1 + 1"}, {Int(6)}), Int(7), none, rng);
  CHECK(s.status == SearchStatus::Inconclusive);
}

TEST_CASE("pinned prime with a known root") {
  const auto inst = pair_instance();
  const Int q(106696591);
  const std::vector<Int> w{Int(75770298), Int(101629661)};
  CHECK(q == 22 * Int(4849845) + 1);
  CHECK(verify_mod_root(inst, q, w));
  CHECK_FALSE(verify_mod_root(inst, q, {Int(75770298), Int(101629662)}));

  TorsionConfig cfg;
  cfg.pin_q = q;
  cfg.budget.candidates = {w};
  std::mt19937_64 rng(3);
  const auto v = torsion_multivariate(inst, cfg, rng);
  CHECK(v.outcome == Outcome::Yes);
  REQUIRE(v.mod_root);
  CHECK(v.mod_root->point == w);
  CHECK(v.provenance.points_checked == 1);
}

TEST_CASE("multivariate outcomes") {
  std::mt19937_64 rng(5);
  TorsionConfig cfg;
  cfg.mode = SamplingMode::Practical;
  CHECK(torsion_multivariate(instance(2, {"1"}, {Int(2), Int(2)}), cfg, rng).outcome == Outcome::No);
  auto v = torsion_multivariate(instance(2, {"x1 - 1", "x2 - 1"}, {Int(2), Int(2)}), cfg, rng);
  CHECK(v.outcome == Outcome::Yes);
  CHECK(v.mod_root->point == std::vector<Int>{1, 1});

  // K = 1 forces q = M + 1 = 8, which is composite
  TorsionConfig bad = cfg;
  bad.practical_K = 1;
  bad.practical_J = 4;
  v = torsion_multivariate(instance(2, {"x1 + x2"}, {Int(7), Int(7)}), bad, rng);
  CHECK(v.outcome == Outcome::Failed);
  CHECK(v.message == kFailureMessage);
  CHECK(v.provenance.draws.size() == 4);

  TorsionConfig pin;
  pin.pin_c = Int(2);  // q = 7
  v = torsion_multivariate(instance(2, {"1 + x1 + x2"}, {Int(3), Int(3)}), pin, rng);
  CHECK(v.outcome == Outcome::Yes);
  CHECK(*v.provenance.q == 7);
  CHECK_THROWS(instance(1, {"x1"}, {Int(0)}).validate());
}

TEST_CASE("mod-q roots over random primes track exact torsion points") {
  // one-sided: an exact torsion point always survives reduction at q = 1 mod M
  std::mt19937_64 rng(77);
  for (int it = 0; it < 80; ++it) {
    const std::size_t n = 1 + rng() % 2;
    std::vector<Int> d;
    for (std::size_t v = 0; v < n; ++v) d.emplace_back(1 + static_cast<long>(rng() % 6));
    TorsionInstance inst{n, {}, d};
    for (int j = 0; j < 2; ++j) inst.polys.push_back(testing::random_poly(rng, n, 1 + rng() % 3, 5, 2));
    const auto exact = brute_force_torsion(inst);
    if (!exact) continue;
    TorsionConfig cfg;
    cfg.mode = SamplingMode::Practical;
    cfg.practical_K = 50;
    CHECK(torsion_multivariate(inst, cfg, rng).outcome == Outcome::Yes);
  }
}
