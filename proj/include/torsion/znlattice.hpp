#pragma once

#include <torsion/bigint.hpp>
#include <torsion/sparse_poly.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace torsion {

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  /// Matrix whose columns are the given vectors (all of equal length).
  static IntMatrix from_columns(const std::vector<std::vector<Int>>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const;
  bool is_zero() const;
  bool operator==(const IntMatrix& other) const = default;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& k);
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& k);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v);

/// Exact determinant via fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& m);
bool is_unimodular(const IntMatrix& m);

struct HermiteFactorization {
  IntMatrix U;  // m x m, unimodular
  IntMatrix H;  // U * M, row echelon with positive pivots, entries above pivots reduced
};

/// Row-style Hermite normal form: U*M = H.
HermiteFactorization hermite_normal_form(const IntMatrix& m);

struct SmithFactorization {
  IntMatrix U;  // m x m
  IntMatrix S;  // m x n diagonal, s_ii >= 0, s_ii | s_{i+1,i+1}
  IntMatrix V;  // n x n

  std::vector<Int> diagonal() const;
};

/// U*M*V = S with the divisibility chain; S is unique.
SmithFactorization smith_normal_form(const IntMatrix& m);

/// The subtorus {x : x^{dbar_j} = 1 for all j} rewritten as
/// {z : z_i^{orders_i} = 1, i < orders.size()} under x = z^U, where
/// x_j = prod_i z_i^{U(i, j)}. A monomial x^a becomes z^{U a}.
struct DiagonalSubtorus {
  std::size_t n = 0;
  std::vector<Int> orders;  // nonzero Smith invariants; empty means the full torus
  IntMatrix U;              // n x n unimodular

  std::size_t rank() const { return orders.size(); }
  bool full_torus() const { return orders.empty(); }
};

DiagonalSubtorus diagonalize_subtorus(const std::vector<std::vector<Int>>& dbars, std::size_t n);

/// Output of the monomial change of variables. Each transformed polynomial
/// was multiplied by z^shift so all exponents are nonnegative; on the torus
/// this leaves the zero set unchanged.
struct TransformedSystem {
  std::vector<SparsePoly> polys;
  std::vector<Int> shift;
};

enum class NegativeExponents { Shift, Reject };

/// a -> U a for every exponent vector. With Reject, a negative transformed
/// exponent raises std::domain_error naming the offending term.
TransformedSystem transform_system(const std::vector<SparsePoly>& polys, const IntMatrix& U,
                                   NegativeExponents policy = NegativeExponents::Shift);

}  // namespace torsion
