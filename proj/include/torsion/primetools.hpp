#pragma once

#include <torsion/bigint.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsion {

enum class Primality { Composite, ProbablePrime, Prime };

/// Deterministic (Miller-Rabin, fixed witness set) below 3.317e24; above
/// that, strong probable-prime testing reported as ProbablePrime.
Primality primality(const Int& n);
inline bool is_prime(const Int& n) { return primality(n) != Primality::Composite; }

inline const Int& deterministic_primality_bound() {
  static const Int bound("3317044064679887385961981");
  return bound;
}

struct ProgressionPrime {
  Int M;
  Int c;
  Int q;  // c*M + 1
  Primality certainty = Primality::Prime;
};

struct LinnikConfig {
  double c0 = 5.5;
  std::optional<Int> cap_override;
};

class PrimeSearchExhausted : public std::runtime_error {
 public:
  PrimeSearchExhausted(Int first_c, Int last_c)
      : std::runtime_error("no prime c*M+1 for c in [" + first_c.get_str() + ", " +
                           last_c.get_str() + "]"),
        first(std::move(first_c)),
        last(std::move(last_c)) {}
  Int first;
  Int last;
};

/// Largest admissible c: floor(M^c0), tightened by the override.
Int linnik_cap(const Int& M, const LinnikConfig& config);

/// Smallest c with c*M+1 prime and c*M+1 > lower_bound.
ProgressionPrime find_progression_prime(const Int& M, const Int& lower_bound,
                                        const LinnikConfig& config = {});

/// At most J uniform draws j in [1, K]; first prime j*M+1 wins.
struct ProgressionSample {
  std::optional<ProgressionPrime> prime;
  std::vector<Int> draws;
};

ProgressionSample sample_progression_prime(const Int& M, const Int& K, const Int& J,
                                           std::mt19937_64& rng);

/// Uniform integer in [lo, hi].
Int uniform_int(const Int& lo, const Int& hi, std::mt19937_64& rng);

class FactorError : public std::runtime_error {
 public:
  FactorError(Int cofactor, std::vector<Int> found)
      : std::runtime_error("factoring budget exceeded; unfactored cofactor " + cofactor.get_str()),
        cofactor(std::move(cofactor)),
        partial(std::move(found)) {}
  Int cofactor;
  std::vector<Int> partial;
};

struct FactorConfig {
  std::uint64_t rho_iterations = 50'000'000;
};

/// Prime factors with multiplicity, ascending.
std::vector<Int> factor(const Int& n, const FactorConfig& config = {});
/// Distinct prime factors, ascending.
std::vector<Int> prime_divisors(const Int& n, const FactorConfig& config = {});
std::vector<Int> divisors(const Int& n, const FactorConfig& config = {});
Int euler_phi(const Int& n);

/// Smallest generator of (Z/qZ)^*.
Int primitive_root(const Int& q);
/// Generator of the order-d subgroup of (Z/qZ)^*; requires d | q-1.
Int subgroup_generator(const Int& q, const Int& d);
/// {h^j : j = 0..d-1} with h = subgroup_generator(q, d).
std::vector<Int> roots_of_unity_mod(const Int& q, const Int& d);

}  // namespace torsion
