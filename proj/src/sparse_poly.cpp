#include <torsion/sparse_poly.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace torsion {

std::optional<Int> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') i = 1;
  if (i == text.size()) return std::nullopt;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) return std::nullopt;
  }
  Int v;
  std::string digits(text.substr(i));
  v.set_str(digits, 10);
  if (text[0] == '-') v = -v;
  return v;
}

Int lcm_of(const std::vector<Int>& values) {
  Int out = 1;
  for (const auto& v : values) out = lcm(out, v);
  return out;
}

std::size_t ExponentHash::operator()(const ExponentVector& e) const noexcept {
  std::size_t h = e.size();
  for (const auto& v : e) h = h * 1000003u ^ hash_int(v);
  return h;
}

SparsePoly SparsePoly::constant(std::size_t num_vars, const Int& c) {
  SparsePoly p(num_vars);
  p.add_term(ExponentVector(num_vars, Int(0)), c);
  return p;
}

SparsePoly SparsePoly::monomial(std::size_t num_vars, ExponentVector exps, const Int& c) {
  if (exps.size() != num_vars) throw std::invalid_argument("monomial: exponent length mismatch");
  SparsePoly p(num_vars);
  p.add_term(std::move(exps), c);
  return p;
}

SparsePoly SparsePoly::binomial_minus_one(std::size_t num_vars, std::size_t var,
                                          const Int& exponent) {
  if (var >= num_vars) throw std::out_of_range("binomial_minus_one: variable out of range");
  SparsePoly p = constant(num_vars, Int(-1));
  ExponentVector e(num_vars, Int(0));
  e[var] = exponent;
  p.add_term(std::move(e), Int(1));
  return p;
}

void SparsePoly::add_term(const ExponentVector& exps, const Int& c) {
  add_term(ExponentVector(exps), c);
}

void SparsePoly::add_term(ExponentVector&& exps, const Int& c) {
  if (exps.size() != num_vars_) throw std::invalid_argument("add_term: exponent length mismatch");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(exps), c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

namespace {

bool grlex_greater(const ExponentVector& a, const ExponentVector& b) {
  Int da = 0, db = 0;
  for (const auto& v : a) da += v;
  for (const auto& v : b) db += v;
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<SparsePoly::Term> SparsePoly::sorted_terms() const {
  std::vector<Term> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [](const Term& x, const Term& y) { return grlex_greater(x.first, y.first); });
  return out;
}

ReductionModulus ReductionModulus::diagonal(std::size_t num_vars, std::span<const Int> orders) {
  if (orders.size() > num_vars) throw std::invalid_argument("more orders than variables");
  ReductionModulus m;
  m.moduli.assign(num_vars, std::nullopt);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1) throw std::invalid_argument("reduction modulus must be >= 1");
    m.moduli[i] = orders[i];
  }
  return m;
}

// ---------------------------------------------------------------------------
// text grammar

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t num_vars) : s_(text), n_(num_vars), out_(num_vars) {}

  SparsePoly run() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      parse_term(sign);
      skip_ws();
      if (pos_ == s_.size()) break;
    }
    return std::move(out_);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_digit() const {
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  Int read_digits() {
    const std::size_t start = pos_;
    while (peek_digit()) ++pos_;
    Int v;
    v.set_str(std::string(s_.substr(start, pos_ - start)), 10);
    return v;
  }

  void parse_term(int sign) {
    skip_ws();
    const std::size_t term_start = pos_;
    Int coeff = 1;
    bool have_coeff = false;
    if (peek_digit()) {
      coeff = read_digits();
      have_coeff = true;
    }
    ExponentVector exps(n_, Int(0));
    bool have_var = false;
    while (true) {
      skip_ws();
      const std::size_t before = pos_;
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != 'x') {
          throw ParseError("expected variable after '*'", pos_);
        }
      }
      if (pos_ >= s_.size() || s_[pos_] != 'x') {
        pos_ = before;
        break;
      }
      const std::size_t var_pos = pos_;
      ++pos_;
      if (!peek_digit()) throw ParseError("expected variable index after 'x'", pos_);
      const Int idx = read_digits();
      if (idx < 1 || idx > static_cast<unsigned long>(n_)) {
        throw ParseError("variable index out of range", var_pos);
      }
      Int e = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '-') throw ParseError("exponent negative", pos_);
        if (pos_ < s_.size() && s_[pos_] == '+') ++pos_;
        if (!peek_digit()) throw ParseError("expected exponent", pos_);
        e = read_digits();
      }
      exps[idx.get_ui() - 1] += e;
      have_var = true;
    }
    if (!have_coeff && !have_var) throw ParseError("expected term", term_start);
    out_.add_term(std::move(exps), sign < 0 ? Int(-coeff) : coeff);
  }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
  SparsePoly out_;
};

}  // namespace

SparsePoly parse_poly(std::string_view text, std::size_t num_vars) {
  return Parser(text, num_vars).run();
}

std::string render(const SparsePoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [exps, c] : p.sorted_terms()) {
    Int mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    const bool is_const = std::all_of(exps.begin(), exps.end(), [](const Int& e) { return e == 0; });
    if (mag != 1 || is_const) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (wrote) os << '*';
      os << 'x' << (i + 1);
      if (exps[i] != 1) os << '^' << exps[i].get_str();
      wrote = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// arithmetic

Int one_norm(const SparsePoly& p) {
  Int s = 0;
  for (const auto& [e, c] : p.terms()) s += abs(c);
  return s;
}

Int degree_in(const SparsePoly& p, std::size_t var) {
  if (var >= p.num_vars()) throw std::out_of_range("degree_in: variable index out of range");
  Int d = 0;
  for (const auto& [e, c] : p.terms()) {
    if (e[var] > d) d = e[var];
  }
  return d;
}

std::size_t used_vars(const SparsePoly& p) {
  std::size_t used = 0;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = e.size(); i > used; --i) {
      if (e[i - 1] != 0) {
        used = i;
        break;
      }
    }
  }
  return used;
}

namespace {

void require_same_vars(const SparsePoly& a, const SparsePoly& b) {
  if (a.num_vars() != b.num_vars()) throw std::invalid_argument("variable count mismatch");
}

// Reduces in place; nullopt entries untouched.
void reduce_in_place(ExponentVector& e, const ReductionModulus& mod) {
  for (std::size_t i = 0; i < mod.moduli.size() && i < e.size(); ++i) {
    if (mod.moduli[i]) mpz_fdiv_r(e[i].get_mpz_t(), e[i].get_mpz_t(), mod.moduli[i]->get_mpz_t());
  }
}

SparsePoly multiply_reduce(const SparsePoly& a, const SparsePoly& b, const ReductionModulus* mod) {
  require_same_vars(a, b);
  SparsePoly out(a.num_vars());
  if (a.is_zero() || b.is_zero()) return out;
  ExponentVector e(a.num_vars());
  Int c;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) {
        mpz_add(e[i].get_mpz_t(), ea[i].get_mpz_t(), eb[i].get_mpz_t());
      }
      if (mod) reduce_in_place(e, *mod);
      mpz_mul(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      out.add_term(e, c);
    }
  }
  return out;
}

}  // namespace

SparsePoly add(const SparsePoly& a, const SparsePoly& b) {
  require_same_vars(a, b);
  SparsePoly out = a;
  for (const auto& [e, c] : b.terms()) out.add_term(e, c);
  return out;
}

SparsePoly negate(const SparsePoly& p) {
  SparsePoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, Int(-c));
  return out;
}

SparsePoly multiply(const SparsePoly& a, const SparsePoly& b) {
  return multiply_reduce(a, b, nullptr);
}

SparsePoly multiply_all(std::span<const SparsePoly> factors, std::size_t num_vars) {
  SparsePoly acc = SparsePoly::constant(num_vars, Int(1));
  for (const auto& f : factors) acc = multiply(acc, f);
  return acc;
}

SparsePoly reduce_exponents(const SparsePoly& p, const ReductionModulus& mod) {
  SparsePoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    ExponentVector r = e;
    reduce_in_place(r, mod);
    out.add_term(std::move(r), c);
  }
  return out;
}

SparsePoly reduced_product(std::span<const SparsePoly> factors, const ReductionModulus& mod,
                           std::size_t num_vars) {
  SparsePoly acc = SparsePoly::constant(num_vars, Int(1));
  for (const auto& f : factors) {
    if (f.num_vars() != num_vars) throw std::invalid_argument("variable count mismatch");
    const SparsePoly reduced = reduce_exponents(f, mod);
    acc = multiply_reduce(acc, reduced, &mod);
    if (acc.is_zero()) break;
  }
  return acc;
}

SparsePoly substitute_powers(const SparsePoly& p, std::span<const Int> powers) {
  if (powers.size() != p.num_vars()) throw std::invalid_argument("substitute_powers: arity");
  for (const auto& w : powers) {
    if (w < 1) throw std::invalid_argument("substitute_powers: powers must be positive");
  }
  SparsePoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    ExponentVector r(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) r[i] = e[i] * powers[i];
    out.add_term(std::move(r), c);
  }
  return out;
}

SparsePoly shift_exponents(const SparsePoly& p, std::span<const Int> shift) {
  if (shift.size() != p.num_vars()) throw std::invalid_argument("shift_exponents: arity");
  SparsePoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    ExponentVector r(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      r[i] = e[i] + shift[i];
      if (sgn(r[i]) < 0) throw std::domain_error("shift_exponents: negative exponent");
    }
    out.add_term(std::move(r), c);
  }
  return out;
}

Int eval_mod(const SparsePoly& p, std::span<const Int> point, const Int& q) {
  if (point.size() != p.num_vars()) throw std::invalid_argument("eval_mod: arity");
  std::vector<Int> base(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) base[i] = mod_floor(point[i], q);
  const Int order = q - 1;
  Int acc = 0, term, pw, e;
  for (const auto& [exps, c] : p.terms()) {
    term = mod_floor(c, q);
    for (std::size_t i = 0; i < exps.size() && sgn(term) != 0; ++i) {
      if (exps[i] == 0) continue;
      if (sgn(base[i]) == 0) {
        term = 0;
        break;
      }
      mpz_fdiv_r(e.get_mpz_t(), exps[i].get_mpz_t(), order.get_mpz_t());
      mpz_powm(pw.get_mpz_t(), base[i].get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
      term *= pw;
      mpz_fdiv_r(term.get_mpz_t(), term.get_mpz_t(), q.get_mpz_t());
    }
    acc += term;
  }
  return mod_floor(acc, q);
}

SparsePoly extend_vars(const SparsePoly& p, std::size_t num_vars) {
  if (num_vars < p.num_vars()) throw std::invalid_argument("extend_vars: cannot shrink");
  SparsePoly out(num_vars);
  for (const auto& [e, c] : p.terms()) {
    ExponentVector r = e;
    r.resize(num_vars, Int(0));
    out.add_term(std::move(r), c);
  }
  return out;
}

}  // namespace torsion
