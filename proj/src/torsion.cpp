#include <torsion/torsion.hpp>

#include <torsion/modarith.hpp>

#include "fast_eval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace torsion {

void TorsionInstance::validate() const {
  if (orders.size() != num_vars) throw std::invalid_argument("need one order per variable");
  for (const auto& d : orders) {
    if (d < 1) throw std::invalid_argument("orders must be positive");
  }
  for (const auto& f : polys) {
    if (f.num_vars() != num_vars) throw std::invalid_argument("polynomial has wrong variable count");
  }
}

std::vector<SparsePoly> g_delta_factors(const Int& delta) {
  if (delta < 1) throw std::invalid_argument("g_delta: delta must be positive");
  std::vector<SparsePoly> out;
  for (const auto& p : prime_divisors(delta)) {
    out.push_back(SparsePoly::binomial_minus_one(1, 0, delta / p));
  }
  return out;
}

SparsePoly g_delta(const Int& delta) {
  const auto f = g_delta_factors(delta);
  return multiply_all(f, 1);
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "YES";
    case Outcome::No: return "NO";
    case Outcome::Failed: return "FAILED";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// univariate

TorsionVerdict torsion_univariate(const std::vector<SparsePoly>& polys, const Int& d) {
  if (d < 1) throw std::invalid_argument("order must be positive");
  for (const auto& f : polys) {
    if (f.num_vars() != 1) throw std::invalid_argument("univariate test needs one variable");
  }
  TorsionVerdict out;
  out.provenance.M = d;
  out.provenance.note = "exact";
  const std::vector<Int> divs = divisors(d);
  for (const auto& delta : divs) {
    ++out.provenance.divisors_scanned;
    const std::vector<SparsePoly> g = g_delta_factors(delta);
    ProductSystem sys{1, {}};
    for (const auto& f : polys) {
      std::vector<SparsePoly> prod{f};
      prod.insert(prod.end(), g.begin(), g.end());
      sys.products.push_back(std::move(prod));
    }
    if (contains_subtorus_deterministic(sys, {delta})) {
      out.outcome = Outcome::Yes;
      out.delta = delta;
      out.exact = TorsionIndexVector{d, {d / delta}};
      return out;
    }
  }
  out.outcome = Outcome::No;
  return out;
}

// ---------------------------------------------------------------------------
// parameter bounds

namespace {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

Int floor_of(const Real& r) {
  Int out;
  mpfr_get_z(out.get_mpz_t(), r.get(), MPFR_RNDD);
  return out;
}

constexpr mpfr_prec_t kStartPrec = 128;
constexpr mpfr_prec_t kMaxPrec = mpfr_prec_t{1} << 22;
constexpr mpfr_exp_t kMaxExponent = mpfr_exp_t{1} << 24;

// Smallest integer strictly above X, where eval(out, rnd) computes X rounded
// in direction rnd (every step is monotone, so RNDD/RNDU bracket X).
Int strict_ceiling(const std::function<void(mpfr_ptr, mpfr_rnd_t)>& eval, double* upper = nullptr) {
  for (mpfr_prec_t prec = kStartPrec;; prec *= 2) {
    Real lo(prec), hi(prec);
    eval(lo.get(), MPFR_RNDD);
    eval(hi.get(), MPFR_RNDU);
    if (!mpfr_number_p(hi.get()) || mpfr_get_exp(hi.get()) > kMaxExponent) {
      throw std::overflow_error("parameter bound too large to represent");
    }
    const Int a = floor_of(lo), b = floor_of(hi);
    if (a == b || prec >= kMaxPrec) {
      if (upper) *upper = mpfr_get_d(hi.get(), MPFR_RNDU);
      return b + 1;
    }
  }
}

void set_int(mpfr_ptr out, const Int& v, mpfr_rnd_t rnd) { mpfr_set_z(out, v.get_mpz_t(), rnd); }

void log_int(mpfr_ptr out, const Int& v, mpfr_rnd_t rnd) {
  set_int(out, v, rnd);
  mpfr_log(out, out, rnd);
}

}  // namespace

KpsBounds kps_bounds(const TorsionInstance& inst, double C) {
  inst.validate();
  if (!(C > 0)) throw std::invalid_argument("exponent C must be positive");
  KpsBounds b;
  b.n = inst.num_vars;
  b.k = inst.polys.size();
  b.C = C;
  b.M = inst.orders.empty() ? Int(1) : lcm_of(inst.orders);

  Int E = 0, maxc = 1;
  for (const auto& d : inst.orders) E = std::max(E, d);
  for (const auto& f : inst.polys) {
    for (const auto& [e, c] : f.terms()) {
      Int deg = 0;
      for (const auto& x : e) deg += x;
      E = std::max(E, deg);
      maxc = std::max(maxc, Int(abs(c)));
    }
  }
  b.E = E;
  const Int n1 = Int(static_cast<unsigned long>(b.n + 1));
  const Int kn = Int(static_cast<unsigned long>(b.k + b.n));

  {
    Real s(64);
    log_int(s.get(), maxc, MPFR_RNDN);
    b.sigma = 1.0 + mpfr_get_d(s.get(), MPFR_RNDN);
  }

  // 1 + 2 (n+1)^3 E^{n+1} (sigma + log(k+n) + 14 (n+1) E log(E+1))
  double xl_upper = 0;
  b.L = strict_ceiling(
      [&](mpfr_ptr out, mpfr_rnd_t rnd) {
        const mpfr_prec_t prec = mpfr_get_prec(out);
        Real t(prec), u(prec);
        log_int(t.get(), maxc, rnd);
        mpfr_add_ui(t.get(), t.get(), 1, rnd);  // sigma
        if (kn > 0) {
          log_int(u.get(), kn, rnd);
          mpfr_add(t.get(), t.get(), u.get(), rnd);
        }
        log_int(u.get(), E + 1, rnd);
        mpfr_mul_z(u.get(), u.get(), Int(14 * n1 * E).get_mpz_t(), rnd);
        mpfr_add(t.get(), t.get(), u.get(), rnd);
        const Int front = 2 * n1 * n1 * n1 * pow_ui(E, b.n + 1);
        mpfr_mul_z(out, t.get(), front.get_mpz_t(), rnd);
        mpfr_add_ui(out, out, 1, rnd);
      },
      &xl_upper);
  b.log_alpha_bound = xl_upper - 1.0;

  // max{e^{C^2}, 2^{log^C M}, 36 L^2 log^{2C} M}
  b.K = strict_ceiling([&](mpfr_ptr out, mpfr_rnd_t rnd) {
    const mpfr_prec_t prec = mpfr_get_prec(out);
    Real c(prec), lm(prec), a(prec), t(prec);
    mpfr_set_d(c.get(), C, rnd);
    mpfr_sqr(a.get(), c.get(), rnd);
    mpfr_exp(a.get(), a.get(), rnd);
    log_int(lm.get(), b.M, rnd);
    mpfr_pow(lm.get(), lm.get(), c.get(), rnd);  // log^C M
    mpfr_ui_pow(t.get(), 2, lm.get(), rnd);
    mpfr_max(a.get(), a.get(), t.get(), rnd);
    mpfr_sqr(t.get(), lm.get(), rnd);
    mpfr_mul_z(t.get(), t.get(), Int(36 * b.L * b.L).get_mpz_t(), rnd);
    mpfr_max(out, a.get(), t.get(), rnd);
  });

  // log(6) log^C(KM)
  b.J = strict_ceiling([&](mpfr_ptr out, mpfr_rnd_t rnd) {
    const mpfr_prec_t prec = mpfr_get_prec(out);
    Real c(prec), t(prec);
    mpfr_set_d(c.get(), C, rnd);
    log_int(t.get(), b.K * b.M, rnd);
    mpfr_pow(t.get(), t.get(), c.get(), rnd);
    mpfr_set_ui(out, 6, rnd);
    mpfr_log(out, out, rnd);
    mpfr_mul(out, out, t.get(), rnd);
  });
  return b;
}

// ---------------------------------------------------------------------------
// roots modulo q

bool verify_mod_root(const TorsionInstance& inst, const Int& q, const std::vector<Int>& point) {
  if (point.size() != inst.num_vars) return false;
  for (std::size_t v = 0; v < point.size(); ++v) {
    if (point[v] < 1 || point[v] >= q) return false;
    if (pow_mod(point[v], inst.orders[v], q) != 1) return false;
  }
  for (const auto& f : inst.polys) {
    if (eval_mod(f, point, q) != 0) return false;
  }
  return true;
}

namespace {

using mod64::u64;
using u128 = unsigned __int128;

constexpr u64 kTableLimit = u64{1} << 20;

// Points (h_1^{k_1}, ..., h_n^{k_n}) with h_v of order delta_v; exponents of
// the polynomials reduced mod delta_v.
class SubgroupEvaluator {
 public:
  SubgroupEvaluator(const TorsionInstance& inst, u64 q, u64 g, std::vector<u64> delta)
      : q_(q), delta_(std::move(delta)) {
    const std::size_t n = inst.num_vars;
    gen_.resize(n);
    table_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      gen_[v] = mod64::pow(g, (q - 1) / delta_[v], q);
      if (delta_[v] <= kTableLimit) {
        table_[v].resize(delta_[v]);
        u64 x = 1;
        for (u64 j = 0; j < delta_[v]; ++j) {
          table_[v][j] = x;
          x = mod64::mul(x, gen_[v], q);
        }
      }
    }
    for (const auto& f : inst.polys) polys_.push_back(detail::compile(f, q, delta_));
  }

  u64 element(std::size_t v, u64 k) const { return power(v, k % delta_[v]); }

  bool is_root(const std::vector<u64>& k) const {
    for (const auto& p : polys_) {
      const std::size_t n = p.num_vars;
      u64 acc = 0;
      for (std::size_t t = 0; t < p.coefs.size(); ++t) {
        u64 term = p.coefs[t];
        const u64* e = p.exps.data() + t * n;
        for (std::size_t v = 0; v < n; ++v) {
          if (e[v] == 0 || k[v] == 0) continue;
          const u64 j = static_cast<u64>(static_cast<u128>(k[v]) * e[v] % delta_[v]);
          term = mod64::mul(term, power(v, j), q_);
        }
        acc = mod64::add(acc, term, q_);
      }
      if (acc != 0) return false;
    }
    return true;
  }

 private:
  u64 power(std::size_t v, u64 j) const {
    return table_[v].empty() ? mod64::pow(gen_[v], j, q_) : table_[v][j];
  }

  u64 q_;
  std::vector<u64> delta_;
  std::vector<u64> gen_;
  std::vector<std::vector<u64>> table_;
  std::vector<detail::FastPoly> polys_;
};

std::vector<Int> to_ints(const std::vector<u64>& v) {
  std::vector<Int> out;
  out.reserve(v.size());
  for (u64 x : v) out.push_back(from_u64(x));
  return out;
}

}  // namespace

ModRootSearch find_mod_root(const TorsionInstance& inst, const Int& q, const ModRootBudget& budget,
                            std::mt19937_64& rng) {
  inst.validate();
  if (!is_prime(q)) throw std::invalid_argument("modulus " + q.get_str() + " is not prime");
  for (const auto& d : inst.orders) {
    if (!divides(d, q - 1)) {
      throw std::invalid_argument("order " + d.get_str() + " does not divide q-1");
    }
  }
  ModRootSearch out;
  const std::size_t n = inst.num_vars;

  for (const auto& cand : budget.candidates) {
    ++out.points_checked;
    std::vector<Int> pt;
    for (const auto& x : cand) pt.push_back(mod_floor(x, q));
    if (verify_mod_root(inst, q, pt)) {
      out.status = SearchStatus::Found;
      out.point = pt;
      out.note = "candidate";
      return out;
    }
  }

  const Int g = primitive_root(q);
  Int total = 1;
  for (const auto& d : inst.orders) total *= d;

  if (!fits_u64(q) || q >= Int(from_u64(mod64::kMaxModulus))) {
    std::vector<Int> gens;
    for (const auto& d : inst.orders) gens.push_back(pow_mod(g, (q - 1) / d, q));
    for (std::uint64_t s = 0; s < budget.samples; ++s) {
      std::vector<Int> pt(n);
      for (std::size_t v = 0; v < n; ++v) {
        pt[v] = pow_mod(gens[v], uniform_int(Int(0), inst.orders[v] - 1, rng), q);
      }
      ++out.points_checked;
      if (verify_mod_root(inst, q, pt)) {
        out.status = SearchStatus::Found;
        out.point = pt;
        out.note = "random";
        return out;
      }
    }
    out.note = "modulus beyond word size; exhaustive sweep unavailable";
    return out;
  }

  const u64 q64 = to_u64(q), g64 = to_u64(g);
  std::vector<u64> d64;
  for (const auto& d : inst.orders) d64.push_back(to_u64(d));

  if (budget.samples > 0 && total > 1) {
    SubgroupEvaluator ev(inst, q64, g64, d64);
    std::vector<u64> k(n);
    for (std::uint64_t s = 0; s < budget.samples; ++s) {
      for (std::size_t v = 0; v < n; ++v) {
        k[v] = std::uniform_int_distribution<u64>(0, d64[v] - 1)(rng);
      }
      ++out.points_checked;
      if (ev.is_root(k)) {
        std::vector<u64> pt(n);
        for (std::size_t v = 0; v < n; ++v) pt[v] = ev.element(v, k[v]);
        out.point = to_ints(pt);
        if (!verify_mod_root(inst, q, *out.point)) throw std::logic_error("fast evaluation disagrees");
        out.status = SearchStatus::Found;
        out.note = "random";
        return out;
      }
    }
  }

  // Sweep one order tuple at a time, smallest maximal order first.
  std::vector<std::vector<u64>> divs(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& x : divisors(inst.orders[v])) divs[v].push_back(to_u64(x));
  }
  std::vector<std::vector<u64>> tuples{{}};
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::vector<u64>> next;
    for (const auto& t : tuples) {
      for (u64 x : divs[v]) {
        auto u = t;
        u.push_back(x);
        next.push_back(std::move(u));
      }
    }
    tuples = std::move(next);
  }
  std::sort(tuples.begin(), tuples.end(), [](const auto& a, const auto& b) {
    const u64 ma = a.empty() ? 1 : *std::max_element(a.begin(), a.end());
    const u64 mb = b.empty() ? 1 : *std::max_element(b.begin(), b.end());
    if (ma != mb) return ma < mb;
    return a < b;
  });

  const Int cap = budget.sweep_cap;
  Int swept = 0;
  for (const auto& delta : tuples) {
    SubgroupEvaluator ev(inst, q64, g64, delta);
    // units k_v in [1, delta_v] coprime to delta_v
    std::vector<std::vector<u64>> units(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (u64 j = 1; j <= delta[v]; ++j) {
        if (std::gcd(j, delta[v]) == 1) units[v].push_back(j % delta[v]);
      }
    }
    std::vector<std::size_t> idx(n, 0);
    std::vector<u64> k(n);
    while (true) {
      if (swept >= cap) {
        out.note = "sweep cap reached after " + swept.get_str() + " points";
        return out;
      }
      for (std::size_t v = 0; v < n; ++v) k[v] = units[v][idx[v]];
      ++swept;
      ++out.points_checked;
      if (ev.is_root(k)) {
        std::vector<u64> pt(n);
        for (std::size_t v = 0; v < n; ++v) pt[v] = ev.element(v, k[v]);
        out.point = to_ints(pt);
        if (!verify_mod_root(inst, q, *out.point)) throw std::logic_error("fast evaluation disagrees");
        out.status = SearchStatus::Found;
        out.note = "sweep";
        return out;
      }
      std::size_t v = 0;
      while (v < n && ++idx[v] == units[v].size()) idx[v++] = 0;
      if (v == n) break;
    }
  }
  out.status = SearchStatus::NotFound;
  out.note = "exhaustive sweep of " + swept.get_str() + " points";
  return out;
}

// ---------------------------------------------------------------------------

TorsionVerdict torsion_multivariate(const TorsionInstance& inst, const TorsionConfig& config,
                                    std::mt19937_64& rng) {
  inst.validate();
  TorsionVerdict out;
  auto& prov = out.provenance;
  prov.mode = config.mode;
  prov.M = inst.orders.empty() ? Int(1) : lcm_of(inst.orders);

  try {
    prov.bounds = kps_bounds(inst, config.C);
  } catch (const std::overflow_error&) {
    if (config.mode == SamplingMode::Conformance && !config.pin_q && !config.pin_c) throw;
  }

  Int q;
  if (config.pin_q) {
    q = *config.pin_q;
    if (!divides(prov.M, q - 1)) {
      throw std::invalid_argument("pinned q is not 1 mod " + prov.M.get_str());
    }
    if (!is_prime(q)) throw std::invalid_argument("pinned q is not prime");
    prov.c = (q - 1) / prov.M;
  } else if (config.pin_c) {
    if (*config.pin_c < 1) throw std::invalid_argument("pinned c must be positive");
    q = *config.pin_c * prov.M + 1;
    if (!is_prime(q)) throw std::invalid_argument("pinned c gives composite q = " + q.get_str());
    prov.c = *config.pin_c;
  } else {
    const Int K = config.mode == SamplingMode::Conformance ? prov.bounds->K : config.practical_K;
    const Int J = config.mode == SamplingMode::Conformance ? prov.bounds->J : config.practical_J;
    prov.K_used = K;
    prov.J_used = J;
    const ProgressionSample s = sample_progression_prime(prov.M, K, J, rng);
    prov.draws = s.draws;
    if (!s.prime) {
      out.outcome = Outcome::Failed;
      out.message = kFailureMessage;
      return out;
    }
    q = s.prime->q;
    prov.c = s.prime->c;
  }
  prov.q = q;

  const ModRootSearch search = find_mod_root(inst, q, config.budget, rng);
  prov.points_checked = search.points_checked;
  prov.note = search.note;
  switch (search.status) {
    case SearchStatus::Found:
      out.outcome = Outcome::Yes;
      out.mod_root = ModRootWitness{q, *search.point};
      break;
    case SearchStatus::NotFound: out.outcome = Outcome::No; break;
    case SearchStatus::Inconclusive: out.outcome = Outcome::Inconclusive; break;
  }
  out.message = outcome_name(out.outcome);
  return out;
}

}  // namespace torsion
