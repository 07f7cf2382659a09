#include "losch/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "losch/local_ops.hpp"

namespace losch {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(where, "unknown key '" + key + "'");
  }
}

bool has(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

double number(const json& j, const char* key, const std::string& where, double def) {
  if (!has(j, key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> opt_number(const json& j, const char* key, const std::string& where) {
  if (!has(j, key)) return std::nullopt;
  return number(j, key, where, 0.0);
}

long long integer(const json& j, const char* key, const std::string& where, long long def) {
  if (!has(j, key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
  return v.get<long long>();
}

bool boolean(const json& j, const char* key, const std::string& where, bool def) {
  if (!has(j, key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(where, std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

std::string string(const json& j, const char* key, const std::string& where, const std::string& def) {
  if (!has(j, key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

void require_positive(double v, const char* name, const std::string& where) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(where, std::string(name) + " must be positive");
}

cplx parse_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(where, "complex numbers are written as [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

Eigen::MatrixXcd parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(where, "matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = parse_complex(row[static_cast<std::size_t>(k)], where);
  }
  return m;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

std::vector<int> parse_sites(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || v.size() > 2) fail(where, "'sites' must list one or two sites");
  std::vector<int> s;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) fail(where, "sites must be nonnegative integers");
    s.push_back(x.get<int>());
  }
  return s;
}

ModelSpec parse_model(const json& j) {
  const std::string w = "model";
  if (!j.is_object()) fail(w, "expected an object");
  ModelSpec m;
  m.kind = string(j, "model", w, "tfim");
  if (m.kind == "tfim") {
    check_keys(j, {"model", "n", "J", "g"}, w);
    m.n = static_cast<int>(integer(j, "n", w, 0));
    if (m.n < 2) fail(w, "tfim needs n >= 2");
    m.J = number(j, "J", w, 1.0);
    m.g = number(j, "g", w, 0.5);
  } else if (m.kind == "terms") {
    check_keys(j, {"model", "n", "terms"}, w);
    m.n = static_cast<int>(integer(j, "n", w, 0));
    if (m.n < 1) fail(w, "n must be >= 1");
    if (!has(j, "terms") || !j.at("terms").is_array() || j.at("terms").empty()) fail(w, "'terms' must be a nonempty list");
    int idx = 0;
    for (const auto& t : j.at("terms")) {
      const std::string tw = w + ".terms[" + std::to_string(idx) + "]";
      check_keys(t, {"sites", "matrix", "group"}, tw);
      if (!has(t, "sites") || !has(t, "matrix")) fail(tw, "needs 'sites' and 'matrix'");
      TermSpec ts;
      ts.sites = parse_sites(t.at("sites"), tw);
      ts.matrix = parse_matrix(t.at("matrix"), tw);
      ts.group = string(t, "group", tw, "term" + std::to_string(idx));
      m.terms.push_back(std::move(ts));
      ++idx;
    }
  } else {
    fail(w, "'model' must be \"tfim\" or \"terms\"");
  }
  return m;
}

StateSpec parse_state(const json& j, int n, const std::string& w) {
  StateSpec s;
  if (j.is_string()) {
    s.names.assign(static_cast<std::size_t>(n), j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& x : j) {
      if (!x.is_string()) fail(w, "state lists hold one axis name per site");
      s.names.push_back(x.get<std::string>());
    }
  } else if (j.is_object()) {
    check_keys(j, {"amplitudes"}, w);
    if (!has(j, "amplitudes") || !j.at("amplitudes").is_array()) fail(w, "'amplitudes' must be a list");
    for (const auto& a : j.at("amplitudes")) s.amplitudes.push_back(parse_complex(a, w));
  } else {
    fail(w, "state must be a name, a list of names or {\"amplitudes\": [...]}");
  }
  try {
    (void)s.build(n);
  } catch (const std::invalid_argument& e) {
    fail(w, e.what());
  }
  return s;
}

json state_json(const StateSpec& s) {
  if (!s.names.empty()) return s.names;
  json a = json::array();
  for (cplx c : s.amplitudes) a.push_back(complex_json(c));
  return json{{"amplitudes", a}};
}

bool computational_names(const StateSpec& s) {
  if (s.names.empty()) return false;
  static const std::set<std::string> z{"up", "down", "z+", "z-", "0", "1"};
  return std::all_of(s.names.begin(), s.names.end(), [](const std::string& n) { return z.count(n) > 0; });
}

Rule parse_rule(const std::string& s, const std::string& w) {
  if (s == "simpson") return Rule::Simpson;
  if (s == "trapezoid") return Rule::Trapezoid;
  fail(w, "rule must be \"simpson\" or \"trapezoid\"");
}

const char* rule_name(Rule r) { return r == Rule::Simpson ? "simpson" : "trapezoid"; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::ExactOracle:
      return "oracle";
    case Backend::StatevectorTrotter:
      return "statevector";
    case Backend::Noisy:
      return "noisy";
  }
  return "?";
}

}  // namespace

HamiltonianSpec ModelSpec::build() const {
  if (kind == "tfim") return tfim(n, J, g);
  HamiltonianSpec spec;
  spec.n_sites = n;
  for (const auto& t : terms) spec.terms.push_back({t.sites, t.matrix, t.group});
  spec.validate();
  return spec;
}

StateVector StateSpec::build(int n) const {
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != n) throw std::invalid_argument("state lists one name per site");
    return product_state(names);
  }
  if (amplitudes.size() != (std::size_t{1} << n)) throw std::invalid_argument("amplitude count must be 2^n");
  StateVector s(n, amplitudes);
  if (std::abs(s.norm() - 1.0) > 1e-9) throw std::invalid_argument("state must be normalized");
  return s;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, {"model", "states", "algorithm", "noise", "spectral", "scaling", "baseline", "cost",
                 "output", "seed", "version"},
             "config");
  ExperimentConfig c;
  if (!has(j, "model")) fail("config", "missing 'model' block");
  c.model = parse_model(j.at("model"));
  try {
    (void)c.model.build();
  } catch (const std::invalid_argument& e) {
    fail("model", e.what());
  }
  const int n = c.model.n;

  {
    const std::string w = "states";
    json s = has(j, "states") ? j.at("states") : json::object();
    check_keys(s, {"psi", "psi_final", "operator", "t_prime", "ite_split"}, w);
    c.psi = has(s, "psi") ? parse_state(s.at("psi"), n, w + ".psi") : parse_state(json("up"), n, w);
    if (has(s, "psi_final")) c.psi_final = parse_state(s.at("psi_final"), n, w + ".psi_final");
    if (has(s, "operator")) {
      const json& o = s.at("operator");
      const std::string ow = w + ".operator";
      check_keys(o, {"sites", "matrix", "pauli"}, ow);
      if (!has(o, "sites")) fail(ow, "needs 'sites'");
      OperatorSpec op;
      op.sites = parse_sites(o.at("sites"), ow);
      for (int q : op.sites)
        if (q >= n) fail(ow, "site out of range");
      if (has(o, "matrix") == has(o, "pauli")) fail(ow, "give exactly one of 'matrix' or 'pauli'");
      if (has(o, "matrix")) {
        op.matrix = parse_matrix(o.at("matrix"), ow);
      } else {
        const std::string p = string(o, "pauli", ow, "");
        if (p.size() != op.sites.size()) fail(ow, "'pauli' needs one letter per site");
        try {
          op.matrix = p.size() == 1 ? pauli_matrix(p[0]) : local_kron(pauli_matrix(p[0]), pauli_matrix(p[1]));
        } catch (const std::invalid_argument& e) {
          fail(ow, e.what());
        }
      }
      if (op.matrix.rows() != (Eigen::Index{1} << op.sites.size())) fail(ow, "matrix size does not match sites");
      c.op = std::move(op);
    }
    c.t_prime = number(s, "t_prime", w, 0.0);
    if (c.t_prime < 0.0) fail(w, "t_prime must be nonnegative");
    const std::string split = string(s, "ite_split", w, "symmetric");
    if (split == "symmetric") c.symmetric_split = true;
    else if (split == "ket") c.symmetric_split = false;
    else fail(w, "ite_split must be \"symmetric\" or \"ket\"");
  }

  if (has(j, "noise")) {
    const std::string w = "noise";
    const json& b = j.at("noise");
    check_keys(b, {"gamma", "trajectories", "shots"}, w);
    NoiseSpec ns;
    ns.gamma = number(b, "gamma", w, 0.0);
    if (!(ns.gamma >= 0.0 && ns.gamma < 1.0)) fail(w, "gamma must lie in [0, 1)");
    ns.trajectories = static_cast<int>(integer(b, "trajectories", w, 1));
    if (ns.trajectories < 1) fail(w, "trajectories must be >= 1");
    ns.shots = static_cast<int>(integer(b, "shots", w, 0));
    if (ns.shots < 0) fail(w, "shots must be >= 0");
    c.noise = ns;
  }

  {
    const std::string w = "algorithm";
    json a = has(j, "algorithm") ? j.at("algorithm") : json::object();
    check_keys(a, {"tau", "h", "order", "t_max", "rule", "ite_mode", "backend", "zero_correction",
                   "zero_threshold", "shots", "merge_half_layers", "fuse_layers"},
               w);
    auto& al = c.algorithm;
    al.tau = number(a, "tau", w, 0.01);
    require_positive(al.tau, "tau", w);
    al.h = number(a, "h", w, 0.01);
    require_positive(al.h, "h", w);
    al.order = static_cast<int>(integer(a, "order", w, 2));
    if (al.order != 1 && al.order != 2 && al.order != 4) fail(w, "order must be 1, 2 or 4");
    al.t_max = number(a, "t_max", w, 1.0);
    if (!(al.t_max >= 0.0)) fail(w, "t_max must be nonnegative");
    al.rule = parse_rule(string(a, "rule", w, "simpson"), w);
    const std::string mode = string(a, "ite_mode", w, "auto");
    if (mode == "auto")
      al.ite_mode = c.model.kind == "tfim" && computational_names(c.psi) ? IteMode::TfimClosedForm
                                                                         : IteMode::GeneralBj;
    else if (mode == "tfim") al.ite_mode = IteMode::TfimClosedForm;
    else if (mode == "general") al.ite_mode = IteMode::GeneralBj;
    else fail(w, "ite_mode must be \"auto\", \"tfim\" or \"general\"");
    const std::string be = string(a, "backend", w, c.noise ? "noisy" : "statevector");
    if (be == "oracle") al.backend = Backend::ExactOracle;
    else if (be == "statevector") al.backend = Backend::StatevectorTrotter;
    else if (be == "noisy") al.backend = Backend::Noisy;
    else fail(w, "backend must be \"oracle\", \"statevector\" or \"noisy\"");
    if (al.backend == Backend::Noisy && !c.noise) fail(w, "noisy backend needs a 'noise' block");
    if (al.backend == Backend::ExactOracle && n > kOracleMaxSites) fail(w, "oracle size limit");
    al.zero_correction = boolean(a, "zero_correction", w, true);
    al.zero_threshold = opt_number(a, "zero_threshold", w);
    if (al.zero_threshold) require_positive(*al.zero_threshold, "zero_threshold", w);
    al.shots = static_cast<int>(integer(a, "shots", w, 0));
    if (al.shots < 0) fail(w, "shots must be >= 0");
    al.merge_half_layers = boolean(a, "merge_half_layers", w, false);
    al.fuse_layers = boolean(a, "fuse_layers", w, true);
  }

  if (has(j, "spectral")) {
    const std::string w = "spectral";
    const json& s = j.at("spectral");
    check_keys(s, {"hermitian_extend", "center", "taper", "reference_width"}, w);
    c.spectral.hermitian_extend = boolean(s, "hermitian_extend", w, true);
    c.spectral.center = opt_number(s, "center", w);
    c.spectral.taper = opt_number(s, "taper", w);
    if (c.spectral.taper) require_positive(*c.spectral.taper, "taper", w);
    c.spectral.reference_width = opt_number(s, "reference_width", w);
    if (c.spectral.reference_width) require_positive(*c.spectral.reference_width, "reference_width", w);
  }

  if (has(j, "scaling")) {
    const std::string w = "scaling";
    const json& s = j.at("scaling");
    check_keys(s, {"sweep", "n_values", "values", "fixed", "t_window"}, w);
    ScalingSpec sc;
    const std::string kind = string(s, "sweep", w, "h");
    if (kind == "h") sc.sweep = SweepKind::H;
    else if (kind == "tau") sc.sweep = SweepKind::Tau;
    else fail(w, "sweep must be \"h\" or \"tau\"");
    auto list = [&](const char* key) {
      if (!has(s, key) || !s.at(key).is_array() || s.at(key).empty())
        fail(w, std::string("sweep list '") + key + "' is empty");
      return s.at(key);
    };
    for (const auto& v : list("n_values")) {
      if (!v.is_number_integer() || v.get<int>() < 2 || v.get<int>() > kOracleMaxSites)
        fail(w, "n_values must be integers in [2, 12]");
      sc.n_values.push_back(v.get<int>());
    }
    for (const auto& v : list("values")) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) fail(w, "values must be positive numbers");
      sc.values.push_back(v.get<double>());
    }
    sc.fixed = number(s, "fixed", w, 0.01);
    require_positive(sc.fixed, "fixed", w);
    sc.t_window = number(s, "t_window", w, 5.0);
    require_positive(sc.t_window, "t_window", w);
    if (c.model.kind != "tfim") fail(w, "scaling sweeps use the tfim model");
    c.scaling = std::move(sc);
  }

  if (has(j, "baseline")) {
    const std::string w = "baseline";
    const json& b = j.at("baseline");
    check_keys(b, {"part", "shots", "sequence", "thetas", "fallback_threshold", "phi_anchor"}, w);
    BaselineSpec bs;
    const std::string part = string(b, "part", w, "both");
    if (part == "both") bs.both_parts = true;
    else if (part == "real") { bs.both_parts = false; bs.part = Part::Real; }
    else if (part == "imag") { bs.both_parts = false; bs.part = Part::Imag; }
    else fail(w, "part must be \"real\", \"imag\" or \"both\"");
    bs.shots = static_cast<int>(integer(b, "shots", w, 0));
    if (bs.shots < 0) fail(w, "shots must be >= 0");
    if (has(b, "sequence")) {
      if (!b.at("sequence").is_array()) fail(w, "'sequence' must be a list of states");
      int i = 0;
      for (const auto& s : b.at("sequence"))
        bs.sequence.push_back(parse_state(s, n, w + ".sequence[" + std::to_string(i++) + "]"));
    }
    if (has(b, "thetas")) {
      const json& t = b.at("thetas");
      if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
        fail(w, "'thetas' must hold two numbers");
      bs.theta0 = t[0].get<double>();
      bs.theta1 = t[1].get<double>();
    }
    bs.fallback_threshold = number(b, "fallback_threshold", w, 1e-3);
    require_positive(bs.fallback_threshold, "fallback_threshold", w);
    bs.phi_anchor = opt_number(b, "phi_anchor", w);
    c.baseline = std::move(bs);
  }

  if (has(j, "cost")) {
    const std::string w = "cost";
    const json& b = j.at("cost");
    check_keys(b, {"rows"}, w);
    if (!has(b, "rows") || !b.at("rows").is_array() || b.at("rows").empty()) fail(w, "'rows' must be a nonempty list");
    int i = 0;
    for (const auto& r : b.at("rows")) {
      const std::string rw = w + ".rows[" + std::to_string(i++) + "]";
      check_keys(r, {"method", "N", "t", "epsilon", "p", "d", "r", "I"}, rw);
      CostRow row;
      row.method = string(r, "method", rw, "all");
      if (row.method != "all") {
        try {
          row.input.method = cost_method_from_string(row.method);
        } catch (const std::invalid_argument& e) {
          fail(rw, e.what());
        }
      }
      row.input.N = number(r, "N", rw, static_cast<double>(n));
      row.input.t = number(r, "t", rw, c.algorithm.t_max);
      row.input.epsilon = number(r, "epsilon", rw, 1e-2);
      row.input.p = static_cast<int>(integer(r, "p", rw, c.algorithm.order));
      row.input.d = number(r, "d", rw, 1.0);
      row.input.r = number(r, "r", rw, 1.0);
      row.input.I = number(r, "I", rw, 1.0);
      try {
        row.input.validate();
      } catch (const std::invalid_argument& e) {
        fail(rw, e.what());
      }
      c.cost.push_back(row);
    }
  }

  if (has(j, "output")) {
    const std::string w = "output";
    const json& o = j.at("output");
    check_keys(o, {"dir", "name", "json"}, w);
    c.output.dir = string(o, "dir", w, ".");
    c.output.name = string(o, "name", w, "");
    c.output.json = boolean(o, "json", w, false);
  }

  if (has(j, "seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail("config", "'seed' must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (has(j, "version") && !j.at("version").is_string()) fail("config", "'version' must be a string");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (c.model.kind == "tfim") {
    j["model"] = {{"model", "tfim"}, {"n", c.model.n}, {"J", c.model.J}, {"g", c.model.g}};
  } else {
    json terms = json::array();
    for (const auto& t : c.model.terms)
      terms.push_back({{"sites", t.sites}, {"matrix", matrix_json(t.matrix)}, {"group", t.group}});
    j["model"] = {{"model", "terms"}, {"n", c.model.n}, {"terms", terms}};
  }

  json s;
  s["psi"] = state_json(c.psi);
  s["psi_final"] = c.psi_final ? state_json(*c.psi_final) : json(nullptr);
  s["operator"] = c.op ? json{{"sites", c.op->sites}, {"matrix", matrix_json(c.op->matrix)}} : json(nullptr);
  s["t_prime"] = c.t_prime;
  s["ite_split"] = c.symmetric_split ? "symmetric" : "ket";
  j["states"] = s;

  const auto& a = c.algorithm;
  j["algorithm"] = {{"tau", a.tau},
                    {"h", a.h},
                    {"order", a.order},
                    {"t_max", a.t_max},
                    {"rule", rule_name(a.rule)},
                    {"ite_mode", a.ite_mode == IteMode::TfimClosedForm ? "tfim" : "general"},
                    {"backend", backend_name(a.backend)},
                    {"zero_correction", a.zero_correction},
                    {"zero_threshold", a.zero_threshold ? json(*a.zero_threshold) : json(nullptr)},
                    {"shots", a.shots},
                    {"merge_half_layers", a.merge_half_layers},
                    {"fuse_layers", a.fuse_layers}};

  j["noise"] = c.noise ? json{{"gamma", c.noise->gamma}, {"trajectories", c.noise->trajectories},
                              {"shots", c.noise->shots}}
                       : json(nullptr);

  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["spectral"] = {{"hermitian_extend", c.spectral.hermitian_extend},
                   {"center", opt(c.spectral.center)},
                   {"taper", opt(c.spectral.taper)},
                   {"reference_width", opt(c.spectral.reference_width)}};

  if (c.scaling) {
    j["scaling"] = {{"sweep", c.scaling->sweep == SweepKind::H ? "h" : "tau"},
                    {"n_values", c.scaling->n_values},
                    {"values", c.scaling->values},
                    {"fixed", c.scaling->fixed},
                    {"t_window", c.scaling->t_window}};
  } else {
    j["scaling"] = nullptr;
  }

  if (c.baseline) {
    const auto& b = *c.baseline;
    json seq = json::array();
    for (const auto& st : b.sequence) seq.push_back(state_json(st));
    j["baseline"] = {{"part", b.both_parts ? "both" : (b.part == Part::Real ? "real" : "imag")},
                     {"shots", b.shots},
                     {"sequence", seq},
                     {"thetas", {b.theta0, b.theta1}},
                     {"fallback_threshold", b.fallback_threshold},
                     {"phi_anchor", opt(b.phi_anchor)}};
  } else {
    j["baseline"] = nullptr;
  }

  if (!c.cost.empty()) {
    json rows = json::array();
    for (const auto& r : c.cost)
      rows.push_back({{"method", r.method}, {"N", r.input.N}, {"t", r.input.t}, {"epsilon", r.input.epsilon},
                      {"p", r.input.p}, {"d", r.input.d}, {"r", r.input.r}, {"I", r.input.I}});
    j["cost"] = {{"rows", rows}};
  } else {
    j["cost"] = nullptr;
  }

  j["output"] = {{"dir", c.output.dir}, {"name", c.output.name}, {"json", c.output.json}};
  j["seed"] = c.seed;
  j["version"] = LOSCH_VERSION;
  return j;
}

PhaseExperimentConfig make_phase_config(const ExperimentConfig& c, int threads) {
  PhaseExperimentConfig p;
  p.model = c.model.build();
  p.psi = c.psi.build(c.model.n);
  if (c.psi_final) p.psi_final = c.psi_final->build(c.model.n);
  const auto& a = c.algorithm;
  p.tau = a.tau;
  p.h = a.h;
  p.order = a.order;
  p.t_max = a.t_max;
  p.rule = a.rule;
  p.ite_mode = a.ite_mode;
  p.backend = a.backend;
  p.zero_correction = a.zero_correction;
  p.zero_threshold = a.zero_threshold;
  p.shots = a.shots;
  if (c.noise) {
    NoiseConfig nc;
    nc.gamma = c.noise->gamma;
    nc.n_trajectories = c.noise->trajectories;
    nc.shots = c.noise->shots;
    nc.master_seed = c.seed;
    p.noise = nc;
  }
  p.seed = c.seed;
  const cplx ov = inner_product(p.psi_final ? *p.psi_final : p.psi, p.psi);
  p.anchor = std::abs(ov) > 0.0 ? std::arg(ov) : 0.0;
  p.merge_half_layers = a.merge_half_layers;
  p.fuse_layers = a.fuse_layers;
  p.threads = threads;
  return p;
}

}  // namespace losch
