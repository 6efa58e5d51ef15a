#pragma once

// Desk-scale ground truth: exact arithmetic in Z[t]/(Phi_M) and exhaustive
// enumeration. Nothing here is meant to scale.

#include <torsion/bigint.hpp>
#include <torsion/sparse_poly.hpp>
#include <torsion/subtorus.hpp>
#include <torsion/torsion.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace torsion {

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
struct DensePoly {
  std::vector<Int> coeffs;

  DensePoly() = default;
  explicit DensePoly(std::vector<Int> c);

  bool is_zero() const { return coeffs.empty(); }
  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  const Int& lead() const { return coeffs.back(); }
  void trim();

  bool operator==(const DensePoly& o) const { return coeffs == o.coeffs; }
};

DensePoly dense_from_sparse(const SparsePoly& f);
SparsePoly sparse_from_dense(const DensePoly& f);
DensePoly dense_mul(const DensePoly& a, const DensePoly& b);
DensePoly dense_sub(const DensePoly& a, const DensePoly& b);

struct DenseDivision {
  DensePoly quotient, remainder;
};
/// Division by a monic divisor.
DenseDivision divide_monic(const DensePoly& a, const DensePoly& b);

/// Phi_M, memoized (thread safe).
const DensePoly& cyclotomic(std::uint64_t M);

bool vanishes_at_primitive_root(const SparsePoly& f, std::uint64_t delta);

/// Remainder of sum_e c_e t^{<a,e> mod M} modulo Phi_M; zero iff f vanishes
/// at (omega_M^{a_1}, ..., omega_M^{a_n}).
DensePoly torsion_value(const SparsePoly& f, const TorsionIndexVector& idx);
bool eval_at_torsion_point(const std::vector<SparsePoly>& F, const TorsionIndexVector& idx);

class OracleCapExceeded : public std::runtime_error {
 public:
  OracleCapExceeded(const Int& points, std::uint64_t cap)
      : std::runtime_error("oracle refuses " + points.get_str() + " points (cap " +
                           std::to_string(cap) + ")") {}
};

inline constexpr std::uint64_t kOracleCap = 1'000'000;

/// First index vector in lexicographic order (M = lcm d) where every f vanishes.
std::optional<TorsionIndexVector> brute_force_torsion(const TorsionInstance& inst,
                                                      std::uint64_t cap = kOracleCap);

/// Containment of T(d_1 e_1, ..., d_r e_r) in the zero set of the products,
/// r = orders.size(), by enumerating the torsion part and splitting every
/// factor along the free variables.
bool brute_force_contains_subtorus(const ProductSystem& sys, const std::vector<Int>& orders,
                                   std::uint64_t cap = kOracleCap);

/// Same for a full-rank presentation (n vectors in Z^n): the subgroup is finite
/// and its points are enumerated inside mu_D^n, D = |det|.
bool brute_force_contains_finite_subtorus(const ProductSystem& sys,
                                          const std::vector<std::vector<Int>>& dbars,
                                          std::uint64_t cap = kOracleCap);

struct CyclicResultant {
  Int magnitude;
  int sign = 0;  // -1, 0, 1
  Int value() const { return sign < 0 ? Int(-magnitude) : magnitude; }
};

/// Res(A, B) by the subresultant remainder sequence (Sylvester convention).
Int resultant(const DensePoly& a, const DensePoly& b);

/// Res(f, x^M - 1) as a product over d | M of resultants against Phi_d.
CyclicResultant cyclic_resultant(const SparsePoly& f, std::uint64_t M);

/// q | Res(f, x^d - 1); requires q = 1 mod d.
bool exceptional_prime_check(const SparsePoly& f, std::uint64_t d, const Int& q);

}  // namespace torsion
