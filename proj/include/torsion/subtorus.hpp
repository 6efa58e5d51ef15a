#pragma once

#include <torsion/bigint.hpp>
#include <torsion/primetools.hpp>
#include <torsion/sparse_poly.hpp>
#include <torsion/znlattice.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace torsion {

/// Products P_i = f_{i,1} * ... * f_{i,l_i}, kept factored.
struct ProductSystem {
  std::size_t num_vars = 0;
  std::vector<std::vector<SparsePoly>> products;

  void validate() const;
};

struct AlgorithmParams {
  Int N;    // max_i prod_j ||bar f_{i,j}||_1
  Int D;    // 2 + max{max d_j, max free-variable degree sum}
  Int lcm;  // lcm of the orders
  Int M;    // ceil(max{N, D} / lcm) * lcm
  std::vector<Int> orders;
  std::vector<bool> zero_product;  // product i has a zero factor: vanishes identically
};

/// First pass of the containment test: every factor replaced by its bar-reduction.
ProductSystem reduce_system(const ProductSystem& sys, const std::vector<Int>& orders);

/// Parameters computed on the reduced system.
AlgorithmParams compute_params(const ProductSystem& sys, const std::vector<Int>& orders);

/// T(d_1 e_1, ..., d_r e_r) is contained in the zero set iff every reduced
/// product is the zero polynomial.
bool contains_subtorus_deterministic(const ProductSystem& sys, const std::vector<Int>& orders);

/// Witness (c, q, t, i) that product i does not vanish on the subtorus:
/// prod_j f_{i,j}(t_1^{(q-1)/d_1}, ..., t_r^{(q-1)/d_r}, t_{r+1}, ..., t_n) != 0 mod q.
/// product_index is 0-based; text and JSON forms print it 1-based.
struct NonContainmentCertificate {
  Int M;  // progression modulus, a multiple of lcm(d)
  Int c;
  Int q;  // c*M + 1
  std::vector<Int> t;
  std::size_t product_index = 0;
  Int value;
};

std::string format_certificate(const NonContainmentCertificate& cert);

struct CertificateSearchConfig {
  std::uint64_t samples = 1024;
  Int sweep_cap = Int(100'000'000);  // points of ((Z/qZ)^*)^n
  std::uint64_t seed = 0;
  std::optional<Int> pin_c;  // q = pin_c * lcm(d) + 1
  std::optional<Int> pin_q;
  LinnikConfig linnik;
};

enum class SearchStatus { Found, NotFound, Inconclusive };

struct CertificateSearch {
  SearchStatus status = SearchStatus::Inconclusive;
  std::optional<NonContainmentCertificate> certificate;
  AlgorithmParams params;
  Int M, c, q;
  bool q_meets_bounds = false;  // q > N and q > D - 1, so an empty sweep is conclusive
  std::uint64_t points_checked = 0;
  std::string note;
};

CertificateSearch find_certificate(const ProductSystem& sys, const std::vector<Int>& orders,
                                   const CertificateSearchConfig& config = {});

/// Recomputes everything from the original (unreduced) factors.
bool verify_certificate(const NonContainmentCertificate& cert, const ProductSystem& sys,
                        const std::vector<Int>& orders);

/// Monomial change of variables taking a general presentation to diagonal form.
struct DiagonalizedSystem {
  DiagonalSubtorus subtorus;
  ProductSystem system;  // in the z coordinates
  std::vector<Int> shift;
};

DiagonalizedSystem diagonalize_system(const ProductSystem& sys,
                                      const std::vector<std::vector<Int>>& dbars);

bool contains_subtorus_general(const ProductSystem& sys,
                               const std::vector<std::vector<Int>>& dbars);

}  // namespace torsion
