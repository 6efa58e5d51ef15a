#include <torsion/oracle.hpp>

#include <torsion/primetools.hpp>
#include <torsion/znlattice.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace torsion {

DensePoly::DensePoly(std::vector<Int> c) : coeffs(std::move(c)) { trim(); }

void DensePoly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

DensePoly dense_from_sparse(const SparsePoly& f) {
  if (f.num_vars() != 1) throw std::invalid_argument("dense form needs a univariate polynomial");
  Int deg = 0;
  for (const auto& [e, c] : f.terms()) deg = std::max(deg, e[0]);
  if (deg > Int(50'000'000)) throw std::invalid_argument("degree too large for dense form");
  std::vector<Int> out(to_u64(deg) + 1);
  for (const auto& [e, c] : f.terms()) out[to_u64(e[0])] += c;
  return DensePoly(std::move(out));
}

SparsePoly sparse_from_dense(const DensePoly& f) {
  SparsePoly out(1);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] != 0) out.add_term(ExponentVector{from_u64(i)}, f.coeffs[i]);
  }
  return out;
}

DensePoly dense_mul(const DensePoly& a, const DensePoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> out(a.coeffs.size() + b.coeffs.size() - 1);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return DensePoly(std::move(out));
}

DensePoly dense_sub(const DensePoly& a, const DensePoly& b) {
  std::vector<Int> out(std::max(a.coeffs.size(), b.coeffs.size()));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out[i] -= b.coeffs[i];
  return DensePoly(std::move(out));
}

DenseDivision divide_monic(const DensePoly& a, const DensePoly& b) {
  if (b.is_zero() || b.lead() != 1) throw std::invalid_argument("divisor must be monic");
  std::vector<Int> r = a.coeffs;
  const std::size_t db = b.coeffs.size() - 1;
  if (r.size() <= db) return {DensePoly{}, a};
  std::vector<Int> q(r.size() - db);
  for (std::size_t i = r.size(); i-- > db;) {
    const Int c = r[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] -= c * b.coeffs[j];
  }
  return {DensePoly(std::move(q)), DensePoly(std::move(r))};
}

// ---------------------------------------------------------------------------

namespace {

std::mutex cyclo_mutex;
std::map<std::uint64_t, std::unique_ptr<DensePoly>> cyclo_cache;

}  // namespace

const DensePoly& cyclotomic(std::uint64_t M) {
  if (M == 0) throw std::invalid_argument("cyclotomic: M must be positive");
  {
    std::lock_guard<std::mutex> lock(cyclo_mutex);
    auto it = cyclo_cache.find(M);
    if (it != cyclo_cache.end()) return *it->second;
  }
  std::vector<Int> c(M + 1);
  c[0] = -1;
  c[M] = 1;
  DensePoly p(std::move(c));
  for (const auto& d : divisors(from_u64(M))) {
    const std::uint64_t dd = to_u64(d);
    if (dd == M) continue;
    auto div = divide_monic(p, cyclotomic(dd));
    if (!div.remainder.is_zero()) throw std::logic_error("cyclotomic division not exact");
    p = std::move(div.quotient);
  }
  std::lock_guard<std::mutex> lock(cyclo_mutex);
  auto [it, inserted] = cyclo_cache.emplace(M, std::make_unique<DensePoly>(std::move(p)));
  return *it->second;
}

namespace {

// f with exponents folded mod M, as a dense polynomial of degree < M.
DensePoly fold(const SparsePoly& f, std::uint64_t M) {
  std::vector<Int> out(M);
  for (const auto& [e, c] : f.terms()) out[mod_u64(e[0], M)] += c;
  return DensePoly(std::move(out));
}

}  // namespace

bool vanishes_at_primitive_root(const SparsePoly& f, std::uint64_t delta) {
  if (delta == 0) throw std::invalid_argument("delta must be positive");
  if (f.num_vars() != 1) throw std::invalid_argument("univariate polynomial expected");
  return divide_monic(fold(f, delta), cyclotomic(delta)).remainder.is_zero();
}

DensePoly torsion_value(const SparsePoly& f, const TorsionIndexVector& idx) {
  if (idx.a.size() != f.num_vars()) throw std::invalid_argument("index vector length mismatch");
  if (idx.M < 1 || !fits_u64(idx.M)) throw std::invalid_argument("bad modulus in index vector");
  const std::uint64_t M = to_u64(idx.M);
  std::vector<Int> g(M);
  for (const auto& [e, c] : f.terms()) {
    Int s = 0;
    for (std::size_t v = 0; v < e.size(); ++v) s += e[v] * idx.a[v];
    g[to_u64(mod_floor(s, idx.M))] += c;
  }
  return divide_monic(DensePoly(std::move(g)), cyclotomic(M)).remainder;
}

bool eval_at_torsion_point(const std::vector<SparsePoly>& F, const TorsionIndexVector& idx) {
  for (const auto& f : F) {
    if (!torsion_value(f, idx).is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void check_cap(const std::vector<Int>& orders, std::uint64_t cap) {
  Int total = 1;
  for (const auto& d : orders) total *= d;
  if (total > Int(from_u64(cap))) throw OracleCapExceeded(total, cap);
}

// Calls visit(a) for a_v = (M/d_v) j_v, j in lexicographic order; stops when
// visit returns true.
template <class Visit>
bool for_each_index(const std::vector<Int>& orders, const Int& M, Visit&& visit) {
  const std::size_t n = orders.size();
  std::vector<Int> step(n), j(n, Int(0)), a(n, Int(0));
  for (std::size_t v = 0; v < n; ++v) step[v] = M / orders[v];
  while (true) {
    for (std::size_t v = 0; v < n; ++v) a[v] = step[v] * j[v];
    if (visit(a)) return true;
    std::size_t v = n;
    while (v > 0) {
      --v;
      if (++j[v] < orders[v]) break;
      j[v] = 0;
      if (v == 0) return false;
    }
    if (n == 0) return false;
  }
}

// Factor restricted to the point on the first r coordinates is zero in the
// remaining variables.
bool factor_vanishes(const SparsePoly& f, std::size_t r, const TorsionIndexVector& idx) {
  std::map<std::vector<Int>, SparsePoly> groups;
  for (const auto& [e, c] : f.terms()) {
    std::vector<Int> head(e.begin(), e.begin() + static_cast<long>(r));
    std::vector<Int> tail(e.begin() + static_cast<long>(r), e.end());
    auto it = groups.try_emplace(tail, SparsePoly(r)).first;
    it->second.add_term(head, c);
  }
  for (const auto& [tail, g] : groups) {
    if (!torsion_value(g, idx).is_zero()) return false;
  }
  return true;
}

}  // namespace

std::optional<TorsionIndexVector> brute_force_torsion(const TorsionInstance& inst,
                                                      std::uint64_t cap) {
  inst.validate();
  check_cap(inst.orders, cap);
  const Int M = inst.orders.empty() ? Int(1) : lcm_of(inst.orders);
  std::optional<TorsionIndexVector> hit;
  for_each_index(inst.orders, M, [&](const std::vector<Int>& a) {
    TorsionIndexVector idx{M, a};
    if (eval_at_torsion_point(inst.polys, idx)) {
      hit = idx;
      return true;
    }
    return false;
  });
  return hit;
}

bool brute_force_contains_subtorus(const ProductSystem& sys, const std::vector<Int>& orders,
                                   std::uint64_t cap) {
  sys.validate();
  const std::size_t r = orders.size();
  if (r > sys.num_vars) throw std::invalid_argument("more orders than variables");
  for (const auto& d : orders) {
    if (d < 1) throw std::invalid_argument("orders must be positive");
  }
  check_cap(orders, cap);
  const Int M = orders.empty() ? Int(1) : lcm_of(orders);
  const bool escaped = for_each_index(orders, M, [&](const std::vector<Int>& a) {
    const TorsionIndexVector idx{M, a};
    for (const auto& prod : sys.products) {
      bool vanishes = false;
      for (const auto& f : prod) {
        if (factor_vanishes(f, r, idx)) {
          vanishes = true;
          break;
        }
      }
      if (!vanishes) return true;
    }
    return false;
  });
  return !escaped;
}

bool brute_force_contains_finite_subtorus(const ProductSystem& sys,
                                          const std::vector<std::vector<Int>>& dbars,
                                          std::uint64_t cap) {
  sys.validate();
  const std::size_t n = sys.num_vars;
  if (dbars.size() != n) throw std::invalid_argument("finite subtorus needs n vectors");
  const Int D = abs(determinant(IntMatrix::from_columns(dbars, n)));
  if (D == 0) throw std::invalid_argument("presentation is not of full rank");
  check_cap(std::vector<Int>(n, D), cap);
  const bool escaped = for_each_index(std::vector<Int>(n, D), D, [&](const std::vector<Int>& a) {
    for (const auto& dbar : dbars) {
      Int s = 0;
      for (std::size_t v = 0; v < n; ++v) s += dbar[v] * a[v];
      if (!divides(D, s)) return false;  // not on the subgroup
    }
    const TorsionIndexVector idx{D, a};
    for (const auto& prod : sys.products) {
      bool vanishes = false;
      for (const auto& f : prod) {
        if (eval_at_torsion_point({f}, idx)) {
          vanishes = true;
          break;
        }
      }
      if (!vanishes) return true;
    }
    return false;
  });
  return !escaped;
}

// ---------------------------------------------------------------------------
// resultants

namespace {

Int content(const DensePoly& p) {
  Int g = 0;
  for (const auto& c : p.coeffs) g = gcd(g, c);
  return g;
}

DensePoly div_content(const DensePoly& p, const Int& c) {
  std::vector<Int> out = p.coeffs;
  for (auto& x : out) x = div_exact(x, c);
  return DensePoly(std::move(out));
}

DensePoly pseudo_remainder(const DensePoly& a, const DensePoly& b) {
  std::vector<Int> r = a.coeffs;
  const std::size_t db = b.coeffs.size() - 1;
  const Int& lb = b.lead();
  long e = static_cast<long>(r.size()) - static_cast<long>(db);  // delta + 1
  while (r.size() > db && !r.empty()) {
    const Int lr = r.back();
    const std::size_t shift = r.size() - 1 - db;
    for (auto& x : r) x *= lb;
    for (std::size_t j = 0; j <= db; ++j) r[shift + j] -= lr * b.coeffs[j];
    while (!r.empty() && r.back() == 0) r.pop_back();
    --e;
  }
  DensePoly out(std::move(r));
  if (e > 0) {
    const Int f = pow_ui(lb, static_cast<unsigned long>(e));
    for (auto& x : out.coeffs) x *= f;
  }
  return out;
}

Int pow_signed(const Int& base, long e) {
  if (e < 0) throw std::logic_error("negative power in subresultant sequence");
  return pow_ui(base, static_cast<unsigned long>(e));
}

}  // namespace

Int resultant(const DensePoly& a0, const DensePoly& b0) {
  if (a0.is_zero() || b0.is_zero()) return 0;
  DensePoly A = a0, B = b0;
  const Int ca = content(A), cb = content(B);
  A = div_content(A, ca);
  B = div_content(B, cb);
  Int g = 1, h = 1;
  int s = 1;
  const Int t = pow_signed(ca, B.degree()) * pow_signed(cb, A.degree());
  if (A.degree() < B.degree()) {
    std::swap(A, B);
    if (A.degree() % 2 == 1 && B.degree() % 2 == 1) s = -s;
  }
  while (B.degree() > 0) {
    const long delta = A.degree() - B.degree();
    if (A.degree() % 2 == 1 && B.degree() % 2 == 1) s = -s;
    DensePoly R = pseudo_remainder(A, B);
    if (R.is_zero()) return 0;
    A = std::move(B);
    const Int den = g * pow_signed(h, delta);
    B = div_content(R, den);
    g = A.lead();
    // h <- g^delta / h^{delta-1}
    if (delta > 0) h = div_exact(pow_signed(g, delta), pow_signed(h, delta - 1));
  }
  // B is a nonzero constant
  const long dA = A.degree();
  const Int lb = B.lead();
  const Int hh = dA == 0 ? h : div_exact(pow_signed(lb, dA), pow_signed(h, dA - 1));
  return s * t * hh;
}

CyclicResultant cyclic_resultant(const SparsePoly& f, std::uint64_t M) {
  if (f.num_vars() != 1) throw std::invalid_argument("univariate polynomial expected");
  if (f.is_zero()) throw std::invalid_argument("cyclic resultant of the zero polynomial");
  if (M == 0) throw std::invalid_argument("M must be positive");
  const Int degf = degree_in(f, 0);
  Int prod = 1;
  for (const auto& d : divisors(from_u64(M))) {
    const DensePoly& phi = cyclotomic(to_u64(d));
    const DensePoly r = divide_monic(fold(f, to_u64(d)), phi).remainder;
    if (r.is_zero()) return {Int(0), 0};
    // Res(Phi_d, r) = prod over roots of Phi_d of r, Phi_d monic
    prod *= r.degree() == 0 ? pow_signed(r.lead(), phi.degree()) : resultant(phi, r);
  }
  // Res(f, x^M - 1) = (-1)^{deg f * M} Res(x^M - 1, f)
  if (mpz_odd_p(degf.get_mpz_t()) && M % 2 == 1) prod = -prod;
  CyclicResultant out;
  out.sign = sgn(prod);
  out.magnitude = abs(prod);
  return out;
}

bool exceptional_prime_check(const SparsePoly& f, std::uint64_t d, const Int& q) {
  if (!divides(from_u64(d), q - 1)) throw std::invalid_argument("q must be 1 mod d");
  const CyclicResultant r = cyclic_resultant(f, d);
  return divides(q, r.magnitude);
}

}  // namespace torsion
