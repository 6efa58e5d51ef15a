#pragma once

// Word-size evaluation of sparse polynomials modulo a prime q < 2^62, used by
// the exhaustive sweeps. The reference path is eval_mod on big integers.

#include <torsion/modarith.hpp>
#include <torsion/sparse_poly.hpp>

#include <algorithm>
#include <span>
#include <vector>

namespace torsion::detail {

using mod64::u64;

struct FastPoly {
  std::size_t num_vars = 0;
  std::vector<u64> coefs;
  std::vector<u64> exps;  // term-major, num_vars per term
  std::vector<u64> max_exp;

  std::size_t term_count() const { return coefs.size(); }
};

// Coefficients reduced mod q; exponent of variable v reduced mod exp_mod[v].
inline FastPoly compile(const SparsePoly& p, u64 q, std::span<const u64> exp_mod) {
  FastPoly out;
  out.num_vars = p.num_vars();
  out.max_exp.assign(p.num_vars(), 0);
  for (const auto& [e, c] : p.terms()) {
    const u64 cm = mod_u64(c, q);
    if (cm == 0) continue;
    out.coefs.push_back(cm);
    for (std::size_t v = 0; v < e.size(); ++v) {
      const u64 r = mod_u64(e[v], exp_mod[v]);
      out.exps.push_back(r);
      out.max_exp[v] = std::max(out.max_exp[v], r);
    }
  }
  return out;
}

// Powers of one base, tabulated when the needed range is small.
class PowerCache {
 public:
  static constexpr u64 kTableLimit = 4096;

  void reset(u64 base, u64 max_exp, u64 q) {
    base_ = base;
    q_ = q;
    tabled_ = max_exp <= kTableLimit;
    if (tabled_) {
      table_.resize(max_exp + 1);
      u64 v = 1 % q;
      for (u64 k = 0; k <= max_exp; ++k) {
        table_[k] = v;
        v = mod64::mul(v, base, q);
      }
    }
  }

  u64 get(u64 e) const { return tabled_ ? table_[e] : mod64::pow(base_, e, q_); }
  u64 base() const { return base_; }

 private:
  u64 base_ = 0;
  u64 q_ = 1;
  bool tabled_ = false;
  std::vector<u64> table_;
};

inline u64 evaluate(const FastPoly& p, std::span<const PowerCache> powers, u64 q) {
  u64 acc = 0;
  const std::size_t n = p.num_vars;
  for (std::size_t t = 0; t < p.coefs.size(); ++t) {
    u64 term = p.coefs[t];
    const u64* e = p.exps.data() + t * n;
    for (std::size_t v = 0; v < n && term; ++v) {
      if (e[v]) term = mod64::mul(term, powers[v].get(e[v]), q);
    }
    acc = mod64::add(acc, term, q);
  }
  return acc;
}

}  // namespace torsion::detail
