#include <torsion/primetools.hpp>

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace torsion {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Strong probable-prime test to base a; n odd, n > 3.
bool strong_probable_prime(const Int& n, const Int& d, unsigned long s, const Int& a) {
  const Int n_minus_1 = n - 1;
  Int x = pow_mod(a, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

Primality primality(const Int& n) {
  if (n < 2) return Primality::Composite;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
    if (n == p) return Primality::Prime;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::Composite;
  }
  Int d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  if (n < deterministic_primality_bound()) {
    // The first thirteen primes are a complete witness set below 3.317e24.
    for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
      if (!strong_probable_prime(n, d, s, Int(a))) return Primality::Composite;
    }
    return Primality::Prime;
  }
  const auto& primes = small_primes();
  for (std::size_t i = 0; i < 64; ++i) {
    if (!strong_probable_prime(n, d, s, Int(primes[i]))) return Primality::Composite;
  }
  // GMP's test adds the Baillie-PSW Lucas component.
  if (mpz_probab_prime_p(n.get_mpz_t(), 25) == 0) return Primality::Composite;
  return Primality::ProbablePrime;
}

Int linnik_cap(const Int& M, const LinnikConfig& config) {
  if (config.c0 < 1) throw std::invalid_argument("Linnik exponent must be >= 1");
  Int cap;
  if (M <= 1) {
    cap = 1;
  } else {
    const double bits = static_cast<double>(mpz_sizeinbase(M.get_mpz_t(), 2)) * config.c0 + 64;
    mpfr_t base, expo, power;
    mpfr_init2(base, static_cast<mpfr_prec_t>(bits));
    mpfr_init2(expo, 64);
    mpfr_init2(power, static_cast<mpfr_prec_t>(bits));
    mpfr_set_z(base, M.get_mpz_t(), MPFR_RNDD);
    mpfr_set_d(expo, config.c0, MPFR_RNDD);
    mpfr_pow(power, base, expo, MPFR_RNDD);
    mpfr_get_z(cap.get_mpz_t(), power, MPFR_RNDD);
    mpfr_clear(base);
    mpfr_clear(expo);
    mpfr_clear(power);
  }
  if (config.cap_override && *config.cap_override < cap) cap = *config.cap_override;
  return cap;
}

ProgressionPrime find_progression_prime(const Int& M, const Int& lower_bound,
                                        const LinnikConfig& config) {
  if (M < 1) throw std::invalid_argument("find_progression_prime: M must be >= 1");
  const Int cap = linnik_cap(M, config);
  // first c with c*M + 1 > lower_bound
  Int c = 1;
  if (lower_bound >= M + 1) {
    mpz_fdiv_q(c.get_mpz_t(), lower_bound.get_mpz_t(), M.get_mpz_t());
    c += 1;
  }
  const Int first = c;
  for (; c <= cap; ++c) {
    const Int q = c * M + 1;
    const Primality p = primality(q);
    if (p != Primality::Composite) return {M, c, q, p};
  }
  throw PrimeSearchExhausted(first, cap);
}

Int uniform_int(const Int& lo, const Int& hi, std::mt19937_64& rng) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const Int span = hi - lo + 1;
  if (fits_u64(span - 1)) {
    std::uniform_int_distribution<std::uint64_t> dist(0, to_u64(span - 1));
    return lo + from_u64(dist(rng));
  }
  const std::size_t bits = mpz_sizeinbase(span.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  while (true) {
    for (auto& w : buf) w = rng();
    const std::size_t excess = words * 64 - bits;
    if (excess) buf.back() >>= excess;
    Int v;
    mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (v < span) return lo + v;
  }
}

ProgressionSample sample_progression_prime(const Int& M, const Int& K, const Int& J,
                                           std::mt19937_64& rng) {
  if (K < 1 || J < 1) throw std::invalid_argument("sample_progression_prime: K, J must be >= 1");
  ProgressionSample out;
  for (Int draw = 0; draw < J; ++draw) {
    Int j = uniform_int(Int(1), K, rng);
    out.draws.push_back(j);
    const Int q = j * M + 1;
    const Primality p = primality(q);
    if (p != Primality::Composite) {
      out.prime = ProgressionPrime{M, j, q, p};
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// factoring

namespace {

// Brent's variant of Pollard rho; returns a nontrivial factor or nullopt.
std::optional<Int> brent_rho(const Int& n, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return Int(2);
  for (unsigned long c = 1; budget > 0; ++c) {
    Int y = 2, x, ys, g = 1, q = 1, diff;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    while (g == 1 && budget > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t steps = std::min(m, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          diff = abs(x - y);
          q = q * diff % n;
        }
        g = gcd(q, n);
        k += steps;
        budget = budget > steps ? budget - steps : 0;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return std::nullopt;
}

void factor_rec(const Int& n, std::uint64_t& budget, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  auto d = brent_rho(n, budget);
  if (!d) throw FactorError(n, out);
  factor_rec(*d, budget, out);
  factor_rec(div_exact(n, *d), budget, out);
}

}  // namespace

std::vector<Int> factor(const Int& n, const FactorConfig& config) {
  if (n < 1) throw std::invalid_argument("factor: n must be >= 1");
  std::vector<Int> out;
  Int rest = n;
  for (std::uint32_t p : small_primes()) {
    if (rest == 1) break;
    if (Int(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      out.emplace_back(p);
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  std::uint64_t budget = config.rho_iterations;
  try {
    factor_rec(rest, budget, out);
  } catch (FactorError& e) {
    std::sort(e.partial.begin(), e.partial.end());
    throw;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Int> prime_divisors(const Int& n, const FactorConfig& config) {
  std::vector<Int> f = factor(n, config);
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::vector<Int> divisors(const Int& n, const FactorConfig& config) {
  const std::vector<Int> f = factor(n, config);
  std::vector<Int> out{Int(1)};
  for (std::size_t i = 0; i < f.size();) {
    std::size_t mult = 0;
    const Int p = f[i];
    while (i < f.size() && f[i] == p) {
      ++i;
      ++mult;
    }
    const std::size_t base = out.size();
    Int pk = 1;
    for (std::size_t k = 1; k <= mult; ++k) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int euler_phi(const Int& n) {
  Int phi = n;
  for (const auto& p : prime_divisors(n)) phi = phi / p * (p - 1);
  return phi;
}

Int primitive_root(const Int& q) {
  if (q == 2) return 1;
  const Int order = q - 1;
  const std::vector<Int> primes = prime_divisors(order);
  for (Int g = 2; g < q; ++g) {
    bool generator = true;
    for (const auto& p : primes) {
      if (pow_mod(g, order / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::invalid_argument("primitive_root: modulus is not prime");
}

Int subgroup_generator(const Int& q, const Int& d) {
  if (d < 1 || !divides(d, q - 1)) {
    throw std::invalid_argument("subgroup order " + d.get_str() + " does not divide q-1");
  }
  return pow_mod(primitive_root(q), (q - 1) / d, q);
}

std::vector<Int> roots_of_unity_mod(const Int& q, const Int& d) {
  const Int h = subgroup_generator(q, d);
  std::vector<Int> out;
  Int v = 1;
  for (Int j = 0; j < d; ++j) {
    out.push_back(v);
    v = v * h % q;
  }
  return out;
}

}  // namespace torsion
