#include <torsion/znlattice.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace torsion {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged rows");
    for (long v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<Int>>& columns, std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw std::invalid_argument("from_columns: length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& v) { return sgn(v) == 0; });
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Int& k) {
  if (sgn(k) == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Int& k) {
  if (sgn(k) == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  std::vector<Int> out(a.rows(), Int(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = div_exact(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& m) {
  return m.rows() == m.cols() && abs(determinant(m)) == 1;
}

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int trunc_div(const Int& a, const Int& b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HermiteFactorization hermite_normal_form(const IntMatrix& m) {
  IntMatrix H = m;
  IntMatrix U = IntMatrix::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t j = 0; j < H.cols() && r < H.rows(); ++j) {
    bool have_pivot = false;
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < H.rows(); ++i) {
        if (sgn(H(i, j)) != 0 && (!best || abs(H(i, j)) < abs(H(*best, j)))) best = i;
      }
      if (!best) break;
      have_pivot = true;
      H.swap_rows(r, *best);
      U.swap_rows(r, *best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < H.rows(); ++i) {
        if (sgn(H(i, j)) == 0) continue;
        const Int q = trunc_div(H(i, j), H(r, j));
        H.add_row_multiple(i, r, -q);
        U.add_row_multiple(i, r, -q);
        if (sgn(H(i, j)) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (!have_pivot) continue;
    if (sgn(H(r, j)) < 0) {
      H.negate_row(r);
      U.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Int q = floor_div(H(i, j), H(r, j));
      H.add_row_multiple(i, r, -q);
      U.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  return {std::move(U), std::move(H)};
}

std::vector<Int> SmithFactorization::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
  return d;
}

SmithFactorization smith_normal_form(const IntMatrix& m) {
  IntMatrix S = m;
  IntMatrix U = IntMatrix::identity(m.rows());
  IntMatrix V = IntMatrix::identity(m.cols());
  const std::size_t diag = std::min(m.rows(), m.cols());

  for (std::size_t k = 0; k < diag; ++k) {
    while (true) {
      // pivot: smallest nonzero magnitude in the trailing block
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = k; i < S.rows(); ++i)
        for (std::size_t j = k; j < S.cols(); ++j) {
          if (sgn(S(i, j)) == 0) continue;
          if (!best || abs(S(i, j)) < abs(S(best->first, best->second))) best = {i, j};
        }
      if (!best) return {std::move(U), std::move(S), std::move(V)};
      S.swap_rows(k, best->first);
      U.swap_rows(k, best->first);
      S.swap_cols(k, best->second);
      V.swap_cols(k, best->second);

      bool cleared = true;
      for (std::size_t i = k + 1; i < S.rows(); ++i) {
        if (sgn(S(i, k)) == 0) continue;
        const Int q = trunc_div(S(i, k), S(k, k));
        S.add_row_multiple(i, k, -q);
        U.add_row_multiple(i, k, -q);
        if (sgn(S(i, k)) != 0) cleared = false;
      }
      for (std::size_t j = k + 1; j < S.cols(); ++j) {
        if (sgn(S(k, j)) == 0) continue;
        const Int q = trunc_div(S(k, j), S(k, k));
        S.add_col_multiple(j, k, -q);
        V.add_col_multiple(j, k, -q);
        if (sgn(S(k, j)) != 0) cleared = false;
      }
      if (!cleared) continue;

      // divisibility chain: fold an offending row into the pivot row
      std::optional<std::size_t> offending;
      for (std::size_t i = k + 1; i < S.rows() && !offending; ++i)
        for (std::size_t j = k + 1; j < S.cols(); ++j) {
          if (!divides(S(k, k), S(i, j))) {
            offending = i;
            break;
          }
        }
      if (!offending) break;
      S.add_row_multiple(k, *offending, Int(1));
      U.add_row_multiple(k, *offending, Int(1));
    }
    if (sgn(S(k, k)) < 0) {
      S.negate_row(k);
      U.negate_row(k);
    }
  }
  return {std::move(U), std::move(S), std::move(V)};
}

DiagonalSubtorus diagonalize_subtorus(const std::vector<std::vector<Int>>& dbars, std::size_t n) {
  if (dbars.empty()) throw std::invalid_argument("diagonalize_subtorus: need at least one vector");
  const IntMatrix M = IntMatrix::from_columns(dbars, n);
  SmithFactorization snf = smith_normal_form(M);
  DiagonalSubtorus out;
  out.n = n;
  for (const auto& s : snf.diagonal()) {
    if (sgn(s) != 0) out.orders.push_back(s);
  }
  out.U = std::move(snf.U);
  return out;
}

TransformedSystem transform_system(const std::vector<SparsePoly>& polys, const IntMatrix& U,
                                   NegativeExponents policy) {
  const std::size_t n = U.rows();
  if (U.cols() != n) throw std::invalid_argument("transform_system: U must be square");
  std::vector<std::vector<std::pair<std::vector<Int>, Int>>> mapped(polys.size());
  std::vector<Int> lowest(n, Int(0));
  for (std::size_t p = 0; p < polys.size(); ++p) {
    if (polys[p].num_vars() != n) throw std::invalid_argument("transform_system: arity mismatch");
    for (const auto& [e, c] : polys[p].terms()) {
      std::vector<Int> image = U * e;
      for (std::size_t i = 0; i < n; ++i) {
        if (image[i] < lowest[i]) {
          if (policy == NegativeExponents::Reject) {
            SparsePoly single = SparsePoly::monomial(n, e, c);
            throw std::domain_error("transform_system: term " + render(single) + " of polynomial " +
                                    std::to_string(p + 1) + " maps to a negative exponent in z" +
                                    std::to_string(i + 1));
          }
          lowest[i] = image[i];
        }
      }
      mapped[p].emplace_back(std::move(image), c);
    }
  }
  TransformedSystem out;
  out.shift.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.shift[i] = -lowest[i];
  for (auto& terms : mapped) {
    SparsePoly p(n);
    for (auto& [e, c] : terms) {
      for (std::size_t i = 0; i < n; ++i) e[i] += out.shift[i];
      p.add_term(std::move(e), c);
    }
    out.polys.push_back(std::move(p));
  }
  return out;
}

}  // namespace torsion
