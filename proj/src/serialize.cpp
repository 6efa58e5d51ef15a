#include <torsion/serialize.hpp>

#include <cctype>
#include <stdexcept>

namespace torsion {

namespace {

const Int kSafeJsonInt("9007199254740991");

Json exponent_to_json(const Int& e) {
  if (e <= kSafeJsonInt) return Json(to_u64(e));
  return Json(e.get_str());
}

std::string outcome_key(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFound: return "not_found";
    case SearchStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

Json ints_to_json(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(int_to_json(x));
  return out;
}

std::vector<Int> ints_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of integers");
  std::vector<Int> out;
  for (const auto& x : j) out.push_back(int_from_json(x));
  return out;
}

}  // namespace

Json int_to_json(const Int& v) { return Json(v.get_str()); }

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? from_u64(j.get<std::uint64_t>()) : Int(j.get<long>());
  }
  if (j.is_string()) {
    auto v = parse_int(j.get<std::string>());
    if (!v) throw std::invalid_argument("not an integer: " + j.get<std::string>());
    return *v;
  }
  throw std::invalid_argument("expected an integer or decimal string");
}

Json poly_to_json(const SparsePoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.sorted_terms()) {
    Json exp = Json::array();
    for (const auto& x : e) exp.push_back(exponent_to_json(x));
    terms.push_back(Json{{"coeff", c.get_str()}, {"exp", exp}});
  }
  return Json{{"num_vars", p.num_vars()}, {"terms", terms}};
}

SparsePoly poly_from_json(const Json& j, std::size_t num_vars) {
  if (j.is_string()) return parse_poly(j.get<std::string>(), num_vars);
  if (!j.is_object() || !j.contains("terms")) {
    throw std::invalid_argument("polynomial must be a string or an object with \"terms\"");
  }
  if (j.contains("num_vars") && j["num_vars"].get<std::size_t>() > num_vars) {
    throw std::invalid_argument("polynomial has more variables than the instance");
  }
  SparsePoly out(num_vars);
  for (const auto& t : j["terms"]) {
    const auto& ej = t.at("exp");
    if (ej.size() > num_vars) throw std::invalid_argument("exponent vector too long");
    ExponentVector e(num_vars, Int(0));
    for (std::size_t v = 0; v < ej.size(); ++v) {
      e[v] = int_from_json(ej[v]);
      if (e[v] < 0) throw std::invalid_argument("exponent negative");
    }
    out.add_term(std::move(e), int_from_json(t.at("coeff")));
  }
  return out;
}

Json matrix_to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw std::invalid_argument("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
  }
  return m;
}

Json certificate_to_json(const NonContainmentCertificate& c) {
  return Json{{"M", int_to_json(c.M)},
              {"c", int_to_json(c.c)},
              {"q", int_to_json(c.q)},
              {"t", ints_to_json(c.t)},
              {"i", std::to_string(c.product_index + 1)},
              {"value", int_to_json(c.value)}};
}

NonContainmentCertificate certificate_from_json(const Json& j) {
  NonContainmentCertificate c;
  c.M = int_from_json(j.at("M"));
  c.c = int_from_json(j.at("c"));
  c.q = int_from_json(j.at("q"));
  c.t = ints_from_json(j.at("t"));
  const Int i = int_from_json(j.at("i"));
  if (i < 1) throw std::invalid_argument("product index is 1-based");
  c.product_index = to_u64(i) - 1;
  c.value = int_from_json(j.at("value"));
  return c;
}

Json search_to_json(const CertificateSearch& s) {
  Json out{{"status", outcome_key(s.status)},
           {"N", int_to_json(s.params.N)},
           {"D", int_to_json(s.params.D)},
           {"lcm", int_to_json(s.params.lcm)},
           {"M", int_to_json(s.M)},
           {"c", int_to_json(s.c)},
           {"q", int_to_json(s.q)},
           {"q_meets_bounds", s.q_meets_bounds},
           {"points_checked", std::to_string(s.points_checked)}};
  if (s.certificate) out["certificate"] = certificate_to_json(*s.certificate);
  if (!s.note.empty()) out["note"] = s.note;
  return out;
}

Json bounds_to_json(const KpsBounds& b) {
  return Json{{"n", b.n},           {"k", b.k},
              {"E", int_to_json(b.E)}, {"M", int_to_json(b.M)},
              {"C", b.C},           {"sigma", b.sigma},
              {"log_alpha_bound", b.log_alpha_bound},
              {"L", int_to_json(b.L)}, {"K", int_to_json(b.K)},
              {"J", int_to_json(b.J)}};
}

Json verdict_to_json(const TorsionVerdict& v) {
  Json out{{"outcome", outcome_name(v.outcome)}};
  if (v.delta) out["delta"] = int_to_json(*v.delta);
  if (v.exact) out["exact"] = Json{{"M", int_to_json(v.exact->M)}, {"a", ints_to_json(v.exact->a)}};
  if (v.mod_root) {
    out["mod_root"] = Json{{"q", int_to_json(v.mod_root->q)}, {"t", ints_to_json(v.mod_root->point)}};
  }
  const auto& p = v.provenance;
  Json prov{{"M", int_to_json(p.M)},
            {"mode", p.mode == SamplingMode::Conformance ? "conformance" : "practical"}};
  if (p.bounds) prov["bounds"] = bounds_to_json(*p.bounds);
  if (p.K_used) prov["K_used"] = int_to_json(*p.K_used);
  if (p.J_used) prov["J_used"] = int_to_json(*p.J_used);
  if (p.q) prov["q"] = int_to_json(*p.q);
  if (p.c) prov["c"] = int_to_json(*p.c);
  if (!p.draws.empty()) prov["draws"] = ints_to_json(p.draws);
  if (p.divisors_scanned) prov["divisors_scanned"] = std::to_string(p.divisors_scanned);
  prov["points_checked"] = std::to_string(p.points_checked);
  if (!p.note.empty()) prov["note"] = p.note;
  out["provenance"] = prov;
  out["message"] = v.message;
  return out;
}

std::size_t max_variable_index(std::string_view text) {
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] != 'x' || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
    std::size_t k = 0, j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      k = k * 10 + static_cast<std::size_t>(text[j] - '0');
      if (k > 1'000'000) throw std::invalid_argument("variable index out of range");
      ++j;
    }
    best = std::max(best, k);
    i = j - 1;
  }
  return best;
}

namespace {

std::size_t vars_used(const Json& poly) {
  if (poly.is_string()) return max_variable_index(poly.get<std::string>());
  std::size_t n = 0;
  if (poly.is_object()) {
    if (poly.contains("num_vars")) n = poly["num_vars"].get<std::size_t>();
    if (poly.contains("terms")) {
      for (const auto& t : poly["terms"]) {
        if (t.contains("exp")) n = std::max(n, t["exp"].size());
      }
    }
  }
  return n;
}

}  // namespace

InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance must be a JSON object");
  if (!j.contains("system") || !j["system"].is_array()) {
    throw std::invalid_argument("instance needs a \"system\" array");
  }
  InstanceFile out;
  if (j.contains("orders")) out.orders = ints_from_json(j["orders"]);
  if (j.contains("dbars")) {
    std::vector<std::vector<Int>> d;
    for (const auto& row : j["dbars"]) d.push_back(ints_from_json(row));
    out.dbars = std::move(d);
  }
  std::size_t n = 0;
  if (j.contains("num_vars")) {
    n = j["num_vars"].get<std::size_t>();
  } else {
    n = out.orders.size();
    if (out.dbars && !out.dbars->empty()) n = std::max(n, out.dbars->front().size());
    for (const auto& prod : j["system"]) {
      if (prod.is_array()) {
        for (const auto& f : prod) n = std::max(n, vars_used(f));
      } else {
        n = std::max(n, vars_used(prod));
      }
    }
    n = std::max<std::size_t>(n, 1);
  }
  out.num_vars = n;
  for (const auto& prod : j["system"]) {
    std::vector<SparsePoly> factors;
    if (prod.is_array()) {
      for (const auto& f : prod) factors.push_back(poly_from_json(f, n));
    } else {
      factors.push_back(poly_from_json(prod, n));
    }
    out.system.push_back(std::move(factors));
  }
  return out;
}

}  // namespace torsion
