#pragma once

#include <torsion/bigint.hpp>
#include <torsion/primetools.hpp>
#include <torsion/sparse_poly.hpp>
#include <torsion/subtorus.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace torsion {

/// f_1 = ... = f_k = x_1^{d_1} - 1 = ... = x_n^{d_n} - 1 = 0.
struct TorsionInstance {
  std::size_t num_vars = 0;
  std::vector<SparsePoly> polys;
  std::vector<Int> orders;  // one per variable

  void validate() const;
};

/// prod over primes p | delta of (x^{delta/p} - 1), kept factored.
std::vector<SparsePoly> g_delta_factors(const Int& delta);
SparsePoly g_delta(const Int& delta);

/// The point (omega_M^{a_1}, ..., omega_M^{a_n}) for a fixed primitive M-th root omega_M.
struct TorsionIndexVector {
  Int M;
  std::vector<Int> a;
};

struct ModRootWitness {
  Int q;
  std::vector<Int> point;
};

struct KpsBounds {
  std::size_t n = 0;
  std::size_t k = 0;
  Int E;
  Int M;  // lcm of the orders
  double C = 1.0;
  double sigma = 0.0;            // 1 + max log|coefficient|
  double log_alpha_bound = 0.0;  // right-hand side of the height bound, rounded up
  Int L, K, J;
};

/// Smallest integers L, K, J satisfying the strict parameter inequalities,
/// evaluated with directed rounding so each inequality is certain.
KpsBounds kps_bounds(const TorsionInstance& inst, double C);

enum class Outcome { Yes, No, Failed, Inconclusive };
std::string outcome_name(Outcome o);

inline constexpr const char* kFailureMessage = "I HAVE FAILED. PLEASE FORGIVE ME.";

enum class SamplingMode { Conformance, Practical };

struct ModRootBudget {
  std::uint64_t samples = 4096;
  Int sweep_cap = Int(200'000'000);
  std::vector<std::vector<Int>> candidates;  // checked before any search
};

struct TorsionConfig {
  SamplingMode mode = SamplingMode::Conformance;
  double C = 1.0;
  Int practical_K = Int(1000);
  Int practical_J = Int(64);
  std::optional<Int> pin_q;
  std::optional<Int> pin_c;  // q = pin_c * lcm(d) + 1
  ModRootBudget budget;
};

struct TorsionProvenance {
  Int M;
  std::optional<KpsBounds> bounds;
  SamplingMode mode = SamplingMode::Conformance;
  std::optional<Int> K_used, J_used;
  std::optional<Int> q, c;
  std::vector<Int> draws;
  std::size_t divisors_scanned = 0;
  std::uint64_t points_checked = 0;
  std::string note;
};

struct TorsionVerdict {
  Outcome outcome = Outcome::Inconclusive;
  std::optional<Int> delta;                 // univariate: order of the roots found
  std::optional<TorsionIndexVector> exact;  // exact torsion point
  std::optional<ModRootWitness> mod_root;
  TorsionProvenance provenance;
  std::string message;
};

/// Exact univariate decision: the smallest delta | d such that every f_i
/// times g_delta vanishes on all delta-th roots of unity.
TorsionVerdict torsion_univariate(const std::vector<SparsePoly>& polys, const Int& d);

struct ModRootSearch {
  SearchStatus status = SearchStatus::Inconclusive;
  std::optional<std::vector<Int>> point;
  std::uint64_t points_checked = 0;
  std::string note;
};

/// Searches prod_i mu_{d_i}(Z/qZ) for a common zero of the f_i: candidates,
/// then random samples, then an exhaustive sweep ordered by the orders of the
/// coordinates (smallest maximal order first).
ModRootSearch find_mod_root(const TorsionInstance& inst, const Int& q, const ModRootBudget& budget,
                            std::mt19937_64& rng);

/// Every f_i vanishes and every t_i^{d_i} = 1 mod q.
bool verify_mod_root(const TorsionInstance& inst, const Int& q, const std::vector<Int>& point);

TorsionVerdict torsion_multivariate(const TorsionInstance& inst, const TorsionConfig& config,
                                    std::mt19937_64& rng);

}  // namespace torsion
