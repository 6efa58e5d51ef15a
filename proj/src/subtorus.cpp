#include <torsion/subtorus.hpp>

#include "fast_eval.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace torsion {

void ProductSystem::validate() const {
  if (products.empty()) throw std::invalid_argument("product system is empty");
  for (const auto& factors : products) {
    if (factors.empty()) throw std::invalid_argument("product with no factors");
    for (const auto& f : factors) {
      if (f.num_vars() != num_vars) throw std::invalid_argument("factor variable count mismatch");
    }
  }
}

namespace {

void check_orders(const ProductSystem& sys, const std::vector<Int>& orders) {
  sys.validate();
  if (orders.size() > sys.num_vars) throw std::invalid_argument("more orders than variables");
  for (const auto& d : orders) {
    if (d < 1) throw std::invalid_argument("orders must be positive");
  }
}

bool has_zero_factor(const std::vector<SparsePoly>& factors) {
  return std::any_of(factors.begin(), factors.end(), [](const SparsePoly& f) { return f.is_zero(); });
}

// Substitution exponents (q-1)/d_v on the reduced coordinates, 1 elsewhere.
std::vector<Int> substitution_weights(const Int& q, const std::vector<Int>& orders, std::size_t n) {
  std::vector<Int> w(n, Int(1));
  for (std::size_t v = 0; v < orders.size(); ++v) w[v] = (q - 1) / orders[v];
  return w;
}

// prod_j f_{i,j}(t^w) mod q on big integers.
Int heart_value(const std::vector<SparsePoly>& factors, const std::vector<Int>& t,
                const std::vector<Int>& weights, const Int& q) {
  std::vector<Int> s(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) s[v] = pow_mod(t[v], weights[v], q);
  Int acc = 1;
  for (const auto& f : factors) {
    acc = acc * eval_mod(f, s, q) % q;
    if (sgn(acc) == 0) break;
  }
  return acc;
}

// Outer loop over the product index so the smallest violated i is reported.
std::optional<std::pair<std::size_t, Int>> first_violation(const ProductSystem& sys,
                                                           const std::vector<bool>& skip,
                                                           const std::vector<Int>& t,
                                                           const std::vector<Int>& weights,
                                                           const Int& q) {
  for (std::size_t i = 0; i < sys.products.size(); ++i) {
    if (skip[i]) continue;
    Int v = heart_value(sys.products[i], t, weights, q);
    if (sgn(v) != 0) return std::make_pair(i, v);
  }
  return std::nullopt;
}

// Word-size evaluator for the (heart_i) values of a reduced system.
class FastHearts {
 public:
  FastHearts(const ProductSystem& reduced, const std::vector<bool>& skip,
             const std::vector<Int>& weights, std::uint64_t q)
      : skip_(skip), q_(q), n_(reduced.num_vars) {
    const std::vector<detail::u64> exp_mod(n_, q_ - 1);
    compiled_.resize(reduced.products.size());
    max_exp_.assign(n_, 0);
    for (std::size_t i = 0; i < reduced.products.size(); ++i) {
      if (skip_[i]) continue;
      for (const auto& f : reduced.products[i]) {
        compiled_[i].push_back(detail::compile(f, q_, exp_mod));
        for (std::size_t v = 0; v < n_; ++v) {
          max_exp_[v] = std::max(max_exp_[v], compiled_[i].back().max_exp[v]);
        }
      }
    }
    for (const auto& w : weights) w_.push_back(to_u64(w));
    powers_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v) powers_[v].reset(1, max_exp_[v], q_);
  }

  void set(std::size_t v, detail::u64 t) {
    powers_[v].reset(mod64::pow(t, w_[v], q_), max_exp_[v], q_);
  }

  // Smallest i whose product is nonzero at the current point.
  std::optional<std::size_t> violation() const {
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      if (skip_[i]) continue;
      detail::u64 acc = 1;
      for (const auto& f : compiled_[i]) {
        acc = mod64::mul(acc, detail::evaluate(f, powers_, q_), q_);
        if (!acc) break;
      }
      if (acc) return i;
    }
    return std::nullopt;
  }

 private:
  const std::vector<bool>& skip_;
  detail::u64 q_;
  std::size_t n_;
  std::vector<std::vector<detail::FastPoly>> compiled_;
  std::vector<detail::u64> max_exp_;
  std::vector<detail::u64> w_;
  std::vector<detail::PowerCache> powers_;
};

// Exhaustive sweep of ((Z/qZ)^*)^n with t_1 fastest.
std::optional<std::pair<std::vector<Int>, std::size_t>> sweep(FastHearts& hearts, std::size_t n,
                                                              std::uint64_t q,
                                                              std::uint64_t& visited) {
  std::vector<std::uint64_t> t(n, 1);
  for (std::size_t v = 0; v < n; ++v) hearts.set(v, 1);
  while (true) {
    ++visited;
    if (auto i = hearts.violation()) {
      std::vector<Int> point(n);
      for (std::size_t v = 0; v < n; ++v) point[v] = from_u64(t[v]);
      return std::make_pair(std::move(point), *i);
    }
    std::size_t v = 0;
    while (v < n) {
      if (++t[v] < q) {
        hearts.set(v, t[v]);
        break;
      }
      t[v] = 1;
      hearts.set(v, 1);
      ++v;
    }
    if (v == n) return std::nullopt;
  }
}

}  // namespace

ProductSystem reduce_system(const ProductSystem& sys, const std::vector<Int>& orders) {
  check_orders(sys, orders);
  const ReductionModulus mod = ReductionModulus::diagonal(sys.num_vars, orders);
  ProductSystem out;
  out.num_vars = sys.num_vars;
  for (const auto& factors : sys.products) {
    std::vector<SparsePoly> reduced;
    for (const auto& f : factors) reduced.push_back(reduce_exponents(f, mod));
    out.products.push_back(std::move(reduced));
  }
  return out;
}

AlgorithmParams compute_params(const ProductSystem& sys, const std::vector<Int>& orders) {
  const ProductSystem reduced = reduce_system(sys, orders);
  AlgorithmParams p;
  p.orders = orders;
  p.lcm = lcm_of(orders);
  p.N = 0;
  Int dmax = 0;
  for (const auto& d : orders) dmax = std::max(dmax, d);
  for (const auto& factors : reduced.products) {
    const bool zero = has_zero_factor(factors);
    p.zero_product.push_back(zero);
    Int norm = 1;
    for (const auto& f : factors) norm *= one_norm(f);
    p.N = std::max(p.N, norm);
    for (std::size_t v = orders.size(); v < sys.num_vars; ++v) {
      Int sum = 0;
      for (const auto& f : factors) sum += degree_in(f, v);
      dmax = std::max(dmax, sum);
    }
  }
  p.D = dmax + 2;
  const Int top = std::max(p.N, p.D);
  Int k;
  mpz_cdiv_q(k.get_mpz_t(), top.get_mpz_t(), p.lcm.get_mpz_t());
  p.M = k * p.lcm;
  return p;
}

bool contains_subtorus_deterministic(const ProductSystem& sys, const std::vector<Int>& orders) {
  check_orders(sys, orders);
  const ReductionModulus mod = ReductionModulus::diagonal(sys.num_vars, orders);
  for (const auto& factors : sys.products) {
    if (!reduced_product(factors, mod, sys.num_vars).is_zero()) return false;
  }
  return true;
}

std::string format_certificate(const NonContainmentCertificate& cert) {
  std::ostringstream os;
  os << "q=" << cert.q << " c=" << cert.c << " t=(";
  for (std::size_t i = 0; i < cert.t.size(); ++i) os << (i ? "," : "") << cert.t[i];
  os << ") i=" << cert.product_index + 1 << " value=" << cert.value;
  return os.str();
}

CertificateSearch find_certificate(const ProductSystem& sys, const std::vector<Int>& orders,
                                   const CertificateSearchConfig& config) {
  check_orders(sys, orders);
  CertificateSearch out;
  out.params = compute_params(sys, orders);
  const AlgorithmParams& params = out.params;
  const std::size_t n = sys.num_vars;

  if (std::all_of(params.zero_product.begin(), params.zero_product.end(), [](bool z) { return z; })) {
    out.status = SearchStatus::NotFound;
    out.q_meets_bounds = true;
    out.note = "every product has a zero factor";
    return out;
  }

  if (config.pin_q) {
    out.q = *config.pin_q;
    out.M = params.lcm;
    if (!divides(params.lcm, out.q - 1)) {
      throw std::invalid_argument("pinned q is not 1 mod lcm of the orders");
    }
    out.c = (out.q - 1) / out.M;
    if (!is_prime(out.q)) throw std::invalid_argument("pinned q is not prime");
  } else if (config.pin_c) {
    out.M = params.lcm;
    out.c = *config.pin_c;
    out.q = out.c * out.M + 1;
    if (!is_prime(out.q)) throw std::invalid_argument("pinned c gives composite q = " + out.q.get_str());
  } else {
    const ProgressionPrime pp = find_progression_prime(params.M, Int(0), config.linnik);
    out.M = pp.M;
    out.c = pp.c;
    out.q = pp.q;
  }
  out.q_meets_bounds = out.q > params.N && out.q > params.D - 1;

  const ProductSystem reduced = reduce_system(sys, orders);
  const std::vector<Int> weights = substitution_weights(out.q, orders, n);
  auto make_cert = [&](std::vector<Int> t, std::size_t i, Int value) {
    return NonContainmentCertificate{out.M, out.c, out.q, std::move(t), i, std::move(value)};
  };

  const bool word_size = out.q < from_u64(mod64::kMaxModulus);
  std::optional<FastHearts> fast;
  if (word_size) fast.emplace(reduced, params.zero_product, weights, to_u64(out.q));

  std::mt19937_64 rng(config.seed);
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    std::vector<Int> t(n);
    for (auto& v : t) v = uniform_int(Int(1), out.q - 1, rng);
    ++out.points_checked;
    std::optional<std::size_t> hit;
    if (fast) {
      for (std::size_t v = 0; v < n; ++v) fast->set(v, to_u64(t[v]));
      hit = fast->violation();
    } else if (auto slow = first_violation(reduced, params.zero_product, t, weights, out.q)) {
      hit = slow->first;
    }
    if (hit) {
      Int value = heart_value(reduced.products[*hit], t, weights, out.q);
      out.status = SearchStatus::Found;
      out.certificate = make_cert(std::move(t), *hit, std::move(value));
      out.note = "random sample";
      return out;
    }
  }

  const Int space = pow_ui(out.q - 1, static_cast<unsigned long>(n));
  if (!word_size || space > config.sweep_cap) {
    out.status = SearchStatus::Inconclusive;
    out.note = "exhaustive sweep of " + space.get_str() + " points exceeds the sweep cap";
    return out;
  }
  std::uint64_t visited = 0;
  auto hit = sweep(*fast, n, to_u64(out.q), visited);
  out.points_checked += visited;
  if (hit) {
    Int value = heart_value(reduced.products[hit->second], hit->first, weights, out.q);
    out.status = SearchStatus::Found;
    out.certificate = make_cert(std::move(hit->first), hit->second, std::move(value));
    out.note = "exhaustive sweep";
    return out;
  }
  if (out.q_meets_bounds) {
    out.status = SearchStatus::NotFound;
    out.note = "exhaustive sweep found no violation";
  } else {
    out.status = SearchStatus::Inconclusive;
    out.note = "no violation, but q is below the size bounds";
  }
  return out;
}

bool verify_certificate(const NonContainmentCertificate& cert, const ProductSystem& sys,
                        const std::vector<Int>& orders) {
  try {
    check_orders(sys, orders);
  } catch (const std::exception&) {
    return false;
  }
  if (cert.product_index >= sys.products.size() || cert.t.size() != sys.num_vars) return false;
  if (cert.M < 1 || cert.c < 1 || cert.q != cert.c * cert.M + 1) return false;
  if (!divides(lcm_of(orders), cert.M)) return false;
  if (!is_prime(cert.q)) return false;
  for (const auto& v : cert.t) {
    if (v < 1 || v >= cert.q) return false;
  }
  const std::vector<Int> weights = substitution_weights(cert.q, orders, sys.num_vars);
  const Int value = heart_value(sys.products[cert.product_index], cert.t, weights, cert.q);
  return sgn(value) != 0 && value == mod_floor(cert.value, cert.q) && cert.value == value;
}

DiagonalizedSystem diagonalize_system(const ProductSystem& sys,
                                      const std::vector<std::vector<Int>>& dbars) {
  sys.validate();
  DiagonalizedSystem out;
  out.subtorus = diagonalize_subtorus(dbars, sys.num_vars);
  std::vector<SparsePoly> flat;
  for (const auto& factors : sys.products) flat.insert(flat.end(), factors.begin(), factors.end());
  TransformedSystem t = transform_system(flat, out.subtorus.U, NegativeExponents::Shift);
  out.shift = std::move(t.shift);
  out.system.num_vars = sys.num_vars;
  std::size_t k = 0;
  for (const auto& factors : sys.products) {
    std::vector<SparsePoly> mapped(t.polys.begin() + k, t.polys.begin() + k + factors.size());
    k += factors.size();
    out.system.products.push_back(std::move(mapped));
  }
  return out;
}

bool contains_subtorus_general(const ProductSystem& sys,
                               const std::vector<std::vector<Int>>& dbars) {
  const DiagonalizedSystem d = diagonalize_system(sys, dbars);
  return contains_subtorus_deterministic(d.system, d.subtorus.orders);
}

}  // namespace torsion
