#include <torsion/cli.hpp>

#include <torsion/oracle.hpp>
#include <torsion/serialize.hpp>
#include <torsion/subtorus.hpp>
#include <torsion/torsion.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace torsion::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::vector<std::string> polys;
  std::size_t num_vars = 0;
  std::string orders;
  std::string dbars;
  std::string mode = "conformance";
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  bool samples_set = false;
  std::string sweep_cap;
  double c0 = 5.5;
  double aph_c = 1.0;
  std::string pin_c, pin_q;
  std::string format = "text";
  std::string witness;
  std::string k_cap, trials;
  // oracle
  std::string task;
  std::uint64_t m = 0;
  std::string q;
};

Int parse_big(const std::string& s, const char* what) {
  auto v = parse_int(s);
  if (!v) throw UsageError(std::string("invalid integer for ") + what + ": " + s);
  return *v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

std::vector<Int> parse_list(const std::string& s, const char* what) {
  std::vector<Int> out;
  for (const auto& part : split(s, ',')) {
    const std::string p = trim(part);
    if (!p.empty()) out.push_back(parse_big(p, what));
  }
  return out;
}

// "2,0;0,3": one vector per ';'
std::vector<std::vector<Int>> parse_vectors(const std::string& s) {
  std::vector<std::vector<Int>> out;
  for (const auto& row : split(s, ';')) {
    if (!trim(row).empty()) out.push_back(parse_list(row, "--dbars"));
  }
  return out;
}

std::string join(const std::vector<Int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get_str();
  return out;
}

InstanceFile load_instance(const RunConfig& cfg) {
  InstanceFile inst;
  if (!cfg.input.empty()) {
    if (!cfg.polys.empty()) throw UsageError("--input and --poly are exclusive");
    std::ifstream in(cfg.input);
    if (!in) throw UsageError("cannot open " + cfg.input);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("malformed JSON: ") + e.what());
    }
    if (cfg.num_vars) j["num_vars"] = cfg.num_vars;
    inst = instance_from_json(j);
  } else {
    if (cfg.polys.empty()) throw UsageError("no polynomials given (--input or --poly)");
    Json sys = Json::array();
    for (const auto& p : cfg.polys) {
      Json prod = Json::array();
      for (const auto& f : split(p, ';')) prod.push_back(trim(f));
      sys.push_back(prod);
    }
    Json j{{"system", sys}};
    if (cfg.num_vars) j["num_vars"] = cfg.num_vars;
    if (!cfg.orders.empty()) {
      Json o = Json::array();
      for (const auto& d : parse_list(cfg.orders, "--orders")) o.push_back(d.get_str());
      j["orders"] = o;
    }
    if (!cfg.dbars.empty()) {
      Json d = Json::array();
      for (const auto& row : parse_vectors(cfg.dbars)) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(x.get_str());
        d.push_back(r);
      }
      j["dbars"] = d;
    }
    inst = instance_from_json(j);
  }
  if (!cfg.input.empty()) {
    if (!cfg.orders.empty()) inst.orders = parse_list(cfg.orders, "--orders");
    if (!cfg.dbars.empty()) inst.dbars = parse_vectors(cfg.dbars);
  }
  return inst;
}

void emit(std::ostream& out, const RunConfig& cfg, const Json& j, const std::string& text) {
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

// ---------------------------------------------------------------------------

int cmd_subtorus(const RunConfig& cfg, std::ostream& out) {
  InstanceFile inst = load_instance(cfg);
  ProductSystem sys{inst.num_vars, inst.system};
  std::vector<Int> orders = inst.orders;
  Json j{{"verdict", ""}};
  std::ostringstream text;

  if (inst.dbars) {
    DiagonalizedSystem ds = diagonalize_system(sys, *inst.dbars);
    sys = ds.system;
    orders = ds.subtorus.orders;
    j["diagonalized"] = Json{{"orders", join(orders)}, {"U", matrix_to_json(ds.subtorus.U)}};
    text << "diagonalized: orders=(" << join(orders) << ") shift=(" << join(ds.shift) << ")\n";
  }
  if (orders.empty() && !inst.dbars) throw UsageError("--orders required");

  CertificateSearchConfig sc;
  sc.seed = cfg.seed;
  if (cfg.samples_set) sc.samples = cfg.samples;
  if (!cfg.sweep_cap.empty()) sc.sweep_cap = parse_big(cfg.sweep_cap, "--sweep-cap");
  if (!cfg.pin_c.empty()) sc.pin_c = parse_big(cfg.pin_c, "--pin-c");
  if (!cfg.pin_q.empty()) sc.pin_q = parse_big(cfg.pin_q, "--pin-q");
  sc.linnik.c0 = cfg.c0;

  const bool contained = contains_subtorus_deterministic(sys, orders);
  const AlgorithmParams params = compute_params(sys, orders);
  j["N"] = params.N.get_str();
  j["D"] = params.D.get_str();
  j["M"] = params.M.get_str();
  if (contained) {
    j["verdict"] = "YES";
    text << "YES\nN=" << params.N << " D=" << params.D << " M=" << params.M << "\n";
    emit(out, cfg, j, text.str());
    return kYes;
  }

  const CertificateSearch search = find_certificate(sys, orders, sc);
  j["verdict"] = "NO";
  j["search"] = search_to_json(search);
  text << "NO\nN=" << params.N << " D=" << params.D << " M=" << params.M << "\n";
  if (search.certificate) {
    const bool ok = verify_certificate(*search.certificate, sys, orders);
    j["verified"] = ok;
    text << "certificate: " << format_certificate(*search.certificate) << "\n";
    text << "verified: " << (ok ? "true" : "false") << "\n";
    if (!ok) throw std::logic_error("certificate failed verification");
  } else {
    text << "certificate: unavailable (" << search.note << ")\n";
  }
  emit(out, cfg, j, text.str());
  return kNo;
}

// ---------------------------------------------------------------------------

std::string witness_text(const TorsionVerdict& v) {
  std::ostringstream s;
  if (v.delta) s << "delta=" << *v.delta << "\n";
  if (v.exact) s << "exact: M=" << v.exact->M << " a=(" << join(v.exact->a) << ")\n";
  if (v.mod_root) s << "witness: q=" << v.mod_root->q << " t=(" << join(v.mod_root->point) << ")\n";
  return s.str();
}

std::string provenance_text(const TorsionProvenance& p) {
  std::ostringstream s;
  s << "mode=" << (p.mode == SamplingMode::Conformance ? "conformance" : "practical (non-conforming)")
    << " M=" << p.M;
  if (p.q) s << " q=" << *p.q;
  if (p.c) s << " c=" << *p.c;
  s << "\n";
  if (p.bounds) {
    s << "E=" << p.bounds->E << " sigma=" << p.bounds->sigma << " L=" << p.bounds->L
      << " K=" << p.bounds->K << " J=" << p.bounds->J << "\n";
  }
  if (p.K_used) s << "K_used=" << *p.K_used << " J_used=" << *p.J_used << " draws=" << p.draws.size() << "\n";
  if (!p.note.empty()) s << "search: " << p.note << " points=" << p.points_checked << "\n";
  return s.str();
}

int cmd_torsion(const RunConfig& cfg, std::ostream& out) {
  InstanceFile file = load_instance(cfg);
  if (file.dbars) throw UsageError("--dbars applies to subtorus only");
  TorsionInstance inst;
  inst.num_vars = file.num_vars;
  inst.orders = file.orders;
  for (const auto& prod : file.system) inst.polys.push_back(multiply_all(prod, file.num_vars));
  if (inst.orders.size() != inst.num_vars) {
    throw UsageError("--orders needs one order per variable (" + std::to_string(inst.num_vars) + ")");
  }

  const bool practical = cfg.mode == "practical";
  if (!practical && cfg.mode != "conformance") throw UsageError("--mode is conformance or practical");
  if (!practical && (!cfg.k_cap.empty() || !cfg.trials.empty())) {
    throw UsageError("--k-cap and --trials require --mode practical");
  }

  TorsionVerdict v;
  if (inst.num_vars == 1 && cfg.pin_c.empty() && cfg.pin_q.empty()) {
    v = torsion_univariate(inst.polys, inst.orders[0]);
    v.message = outcome_name(v.outcome);
  } else {
    TorsionConfig tc;
    tc.mode = practical ? SamplingMode::Practical : SamplingMode::Conformance;
    tc.C = cfg.aph_c;
    if (!cfg.k_cap.empty()) tc.practical_K = parse_big(cfg.k_cap, "--k-cap");
    if (!cfg.trials.empty()) tc.practical_J = parse_big(cfg.trials, "--trials");
    if (!cfg.pin_c.empty()) tc.pin_c = parse_big(cfg.pin_c, "--pin-c");
    if (!cfg.pin_q.empty()) tc.pin_q = parse_big(cfg.pin_q, "--pin-q");
    if (cfg.samples_set) tc.budget.samples = cfg.samples;
    if (!cfg.sweep_cap.empty()) tc.budget.sweep_cap = parse_big(cfg.sweep_cap, "--sweep-cap");
    if (!cfg.witness.empty()) tc.budget.candidates.push_back(parse_list(cfg.witness, "--witness"));
    std::mt19937_64 rng(cfg.seed);
    v = torsion_multivariate(inst, tc, rng);
    if (v.mod_root && !verify_mod_root(inst, v.mod_root->q, v.mod_root->point)) {
      throw std::logic_error("witness failed verification");
    }
  }

  std::string text = v.outcome == Outcome::Failed ? std::string(kFailureMessage) + "\n"
                                                  : outcome_name(v.outcome) + "\n";
  text += witness_text(v) + provenance_text(v.provenance);
  emit(out, cfg, verdict_to_json(v), text);
  switch (v.outcome) {
    case Outcome::Yes: return kYes;
    case Outcome::No: return kNo;
    case Outcome::Failed: return kFailed;
    case Outcome::Inconclusive: return kError;
  }
  return kError;
}

// ---------------------------------------------------------------------------

std::string render_x(const SparsePoly& p) {
  std::string s = render(p);
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'x' && i + 1 < s.size() && s[i + 1] == '1' &&
        (i + 2 == s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 2])))) {
      out += 'x';
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const std::string& task = cfg.task;
  if (task == "cyclotomic") {
    if (cfg.m == 0) throw UsageError("--m required");
    const DensePoly& phi = cyclotomic(cfg.m);
    const std::string s = render_x(sparse_from_dense(phi));
    emit(out, cfg, Json{{"M", cfg.m}, {"cyclotomic", s}}, s + "\n");
    return 0;
  }

  InstanceFile file = load_instance(cfg);
  if (task == "brute") {
    TorsionInstance inst;
    inst.num_vars = file.num_vars;
    inst.orders = file.orders;
    for (const auto& prod : file.system) inst.polys.push_back(multiply_all(prod, file.num_vars));
    const auto hit = brute_force_torsion(inst);
    Json j{{"found", bool(hit)}};
    std::string text = "none\n";
    if (hit) {
      j["M"] = hit->M.get_str();
      Json a = Json::array();
      for (const auto& x : hit->a) a.push_back(x.get_str());
      j["a"] = a;
      text = "witness M=" + hit->M.get_str() + " a=(" + join(hit->a) + ")\n";
    }
    emit(out, cfg, j, text);
    return 0;
  }
  if (task == "brute-subtorus") {
    ProductSystem sys{file.num_vars, file.system};
    const bool c = file.dbars ? brute_force_contains_finite_subtorus(sys, *file.dbars)
                              : brute_force_contains_subtorus(sys, file.orders);
    emit(out, cfg, Json{{"contained", c}}, std::string(c ? "YES" : "NO") + "\n");
    return 0;
  }
  if (task == "resultant" || task == "exceptional") {
    if (cfg.m == 0) throw UsageError("--m required");
    if (file.num_vars != 1 || file.system.size() != 1) {
      throw UsageError("resultant needs one univariate polynomial");
    }
    const SparsePoly f = multiply_all(file.system[0], 1);
    if (task == "resultant") {
      const CyclicResultant r = cyclic_resultant(f, cfg.m);
      emit(out, cfg, Json{{"M", cfg.m}, {"abs", r.magnitude.get_str()}, {"sign", r.sign}},
           "|Res|=" + r.magnitude.get_str() + " sign=" + std::to_string(r.sign) + "\n");
      return 0;
    }
    if (cfg.q.empty()) throw UsageError("--q required");
    const Int q = parse_big(cfg.q, "--q");
    if (!is_prime(q)) throw UsageError("--q must be prime");
    const bool e = exceptional_prime_check(f, cfg.m, q);
    emit(out, cfg, Json{{"q", q.get_str()}, {"exceptional", e}}, std::string(e ? "true" : "false") + "\n");
    return 0;
  }
  throw UsageError("unknown --task (brute, brute-subtorus, cyclotomic, resultant, exceptional)");
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "JSON instance file");
  sub->add_option("--poly", cfg.polys, "product of factors separated by ';' (repeatable)");
  sub->add_option("--num-vars", cfg.num_vars, "number of variables");
  sub->add_option("--orders", cfg.orders, "comma-separated orders d_i");
  sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subtorus containment and torsion point decisions", "torsionctl"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* sub = app.add_subcommand("subtorus", "is T(d) contained in the zero set?");
  add_common(sub, cfg);
  sub->add_option("--dbars", cfg.dbars, "vectors d-bar_j, e.g. 2,0;0,3");
  sub->add_option("--seed", cfg.seed);
  sub->add_option("--samples", cfg.samples)->each([&](const std::string&) { cfg.samples_set = true; });
  sub->add_option("--sweep-cap", cfg.sweep_cap);
  sub->add_option("--c0", cfg.c0, "Linnik exponent");
  sub->add_option("--pin-c", cfg.pin_c, "use q = c*lcm(d) + 1");
  sub->add_option("--pin-q", cfg.pin_q, "use this prime q");
  sub->add_option("--mode", cfg.mode)->check(CLI::IsMember({"conformance", "practical"}));

  auto* tor = app.add_subcommand("torsion", "does the system vanish at a torsion point?");
  add_common(tor, cfg);
  tor->add_option("--mode", cfg.mode)->check(CLI::IsMember({"conformance", "practical"}));
  tor->add_option("--seed", cfg.seed);
  tor->add_option("--samples", cfg.samples)->each([&](const std::string&) { cfg.samples_set = true; });
  tor->add_option("--sweep-cap", cfg.sweep_cap);
  tor->add_option("--c0", cfg.c0);
  tor->add_option("--aph-c", cfg.aph_c, "constant C in the parameter bounds");
  tor->add_option("--pin-c", cfg.pin_c);
  tor->add_option("--pin-q", cfg.pin_q);
  tor->add_option("--witness", cfg.witness, "candidate point mod q, comma-separated");
  tor->add_option("--k-cap", cfg.k_cap, "practical mode: range for j");
  tor->add_option("--trials", cfg.trials, "practical mode: number of draws");

  auto* ora = app.add_subcommand("oracle", "brute-force ground truth");
  add_common(ora, cfg);
  ora->add_option("--dbars", cfg.dbars);
  ora->add_option("--task", cfg.task)->required();
  ora->add_option("--m", cfg.m);
  ora->add_option("--q", cfg.q);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  try {
    if (sub->parsed()) return cmd_subtorus(cfg, out);
    if (tor->parsed()) return cmd_torsion(cfg, out);
    if (ora->parsed()) return cmd_oracle(cfg, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const OracleCapExceeded& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

}  // namespace torsion::cli
