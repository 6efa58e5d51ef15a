#pragma once

#include <torsion/bigint.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace torsion {

// Exponents are arbitrary precision: sparse encodings routinely carry
// degrees far beyond 2^64 relative to their size.
using ExponentVector = std::vector<Int>;

struct ExponentHash {
  std::size_t operator()(const ExponentVector& e) const noexcept;
};

/// Sparse polynomial in Z[x_1, ..., x_n], stored canonically: no zero
/// coefficients, every key of length num_vars. Variables are 0-based in the
/// API and named x1..xn in text.
class SparsePoly {
 public:
  using TermMap = std::unordered_map<ExponentVector, Int, ExponentHash>;
  using Term = std::pair<ExponentVector, Int>;

  SparsePoly() = default;
  explicit SparsePoly(std::size_t num_vars) : num_vars_(num_vars) {}

  static SparsePoly constant(std::size_t num_vars, const Int& c);
  static SparsePoly monomial(std::size_t num_vars, ExponentVector exps, const Int& c);
  /// x_var^exponent - 1
  static SparsePoly binomial_minus_one(std::size_t num_vars, std::size_t var,
                                       const Int& exponent);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Adds c*x^exps, collecting like terms and dropping cancellations.
  void add_term(const ExponentVector& exps, const Int& c);
  void add_term(ExponentVector&& exps, const Int& c);

  /// Terms in descending graded-lexicographic order.
  std::vector<Term> sorted_terms() const;

  bool operator==(const SparsePoly& other) const {
    return num_vars_ == other.num_vars_ && terms_ == other.terms_;
  }

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Per-variable exponent modulus; nullopt leaves the variable untouched.
struct ReductionModulus {
  std::vector<std::optional<Int>> moduli;

  /// d_1..d_r on the first r of n variables.
  static ReductionModulus diagonal(std::size_t num_vars, std::span<const Int> orders);
};

SparsePoly parse_poly(std::string_view text, std::size_t num_vars);
std::string render(const SparsePoly& p);

Int one_norm(const SparsePoly& p);
Int degree_in(const SparsePoly& p, std::size_t var);
/// Highest variable index appearing with positive exponent, plus one.
std::size_t used_vars(const SparsePoly& p);

SparsePoly add(const SparsePoly& a, const SparsePoly& b);
SparsePoly negate(const SparsePoly& p);
SparsePoly multiply(const SparsePoly& a, const SparsePoly& b);
SparsePoly multiply_all(std::span<const SparsePoly> factors, std::size_t num_vars);

SparsePoly reduce_exponents(const SparsePoly& p, const ReductionModulus& mod);

/// bar(prod factors) through G_{j+1} = bar(G_j * bar(g_{j+1})), so no
/// intermediate exceeds min{prod m_j, prod d_i} terms in the reduced variables.
SparsePoly reduced_product(std::span<const SparsePoly> factors, const ReductionModulus& mod,
                           std::size_t num_vars);

/// x_i -> x_i^{powers_i}
SparsePoly substitute_powers(const SparsePoly& p, std::span<const Int> powers);

/// Multiplies p by the monomial x^shift (shift may be negative in any
/// coordinate as long as the result stays nonnegative).
SparsePoly shift_exponents(const SparsePoly& p, std::span<const Int> shift);

/// p(point) mod q. Exponents are reduced mod q-1 only for nonzero bases.
Int eval_mod(const SparsePoly& p, std::span<const Int> point, const Int& q);

/// Widens p to more variables (new ones appended with exponent 0).
SparsePoly extend_vars(const SparsePoly& p, std::size_t num_vars);

}  // namespace torsion
