#include "losch/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "losch/csv.hpp"
#include "losch/spectral.hpp"

namespace losch {

namespace {

struct Writer {
  std::string dir;
  std::string stem;
  bool json = false;
  std::vector<std::string> written;

  std::string path(const std::string& suffix, const std::string& ext) const {
    return (std::filesystem::path(dir) / (stem + suffix + ext)).string();
  }

  void table(const std::string& suffix, const Table& t) {
    const std::string p = path(suffix, ".csv");
    write_csv(p, t);
    written.push_back(p);
    if (!json) return;
    // Cells are already numeric literals; non-finite values become null.
    std::string out = "{\"header\":[";
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? ",\"" : "\"") + t.header[i] + "\"";
    out += "],\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out += r ? ",[" : "[";
      for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
        const std::string& c = t.rows[r][i];
        const bool text = !c.empty() && (std::isalpha(static_cast<unsigned char>(c[0])) || c[0] == '_');
        const bool nonfinite = c == "nan" || c == "-nan" || c == "inf" || c == "-inf";
        if (i) out += ',';
        out += nonfinite ? "null" : (text ? "\"" + c + "\"" : c);
      }
      out += ']';
    }
    out += "]}\n";
    const std::string jp = path(suffix, ".json");
    write_file(jp, out);
    written.push_back(jp);
  }

  void snapshot(const ExperimentConfig& c) {
    const std::string p = path(".config", ".json");
    write_file(p, to_json(c).dump(2) + "\n");
    written.push_back(p);
  }
};

cplx exact_value(const DenseOracle& o, const StateVector& bra, const StateVector& ket, double t) {
  return o.amplitude(bra, ket, cplx{t, 0.0});
}

void cmd_amplitude(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  const auto p = make_phase_config(c, ro.threads);
  const ChannelData d = measure_channels(p);
  Table t;
  t.header = {"t", "r", "p_plus", "p_minus"};
  for (std::size_t k = 0; k < d.p0.size(); ++k)
    t.add_row({static_cast<double>(k) * p.tau, std::sqrt(d.p0[k]), d.p_plus[k], d.p_minus[k]});
  w.table("", t);
}

void report(const PhaseTrace& tr) {
  for (const auto& msg : tr.warnings) std::cerr << "warning: " << msg << "\n";
  for (const auto& cr : tr.crossings)
    std::cerr << "zero crossing at t = " << tr.times[static_cast<std::size_t>(cr.index)]
              << " (order " << cr.order << ", delta " << cr.delta << (cr.applied ? "" : ", skipped") << ")\n";
}

void cmd_phase(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  const PhaseTrace tr = run_phase_experiment(make_phase_config(c, ro.threads));
  report(tr);
  w.table("", phase_table(tr));
}

void cmd_two_sided(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  if (!c.op) throw ConfigError("states: two-sided runs need an 'operator'");
  TwoSidedConfig tc;
  tc.base = make_phase_config(c, ro.threads);
  tc.op = make_gate(c.op->sites, c.op->matrix);
  tc.t_prime = c.t_prime;
  tc.symmetric = c.symmetric_split;
  const PhaseTrace tr = run_two_sided_experiment(tc);
  report(tr);
  w.table("", phase_table(tr, "u"));
}

void cmd_scaling(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  if (!c.scaling) throw ConfigError("scaling: missing 'scaling' block");
  ScalingConfig sc;
  sc.sweep = c.scaling->sweep;
  sc.n_values = c.scaling->n_values;
  sc.values = c.scaling->values;
  sc.fixed = c.scaling->fixed;
  sc.t_window = c.scaling->t_window;
  sc.order = c.algorithm.order;
  sc.rule = c.algorithm.rule;
  sc.J = c.model.J;
  sc.g = c.model.g;
  sc.threads = ro.threads;
  const ScalingResult res = run_scaling(sc);
  Table curves;
  curves.header = {"n", "value", "t", "delta_phi", "collapsed"};
  for (const auto& pt : res.points) {
    const double norm = pt.n * std::pow(pt.value, res.collapse_power);
    for (std::size_t k = 0; k < pt.times.size(); ++k)
      curves.add_row({static_cast<double>(pt.n), pt.value, pt.times[k], pt.delta_phi[k], pt.delta_phi[k] / norm});
  }
  w.table("", curves);
  Table fit;
  fit.header = {"n", "exponent"};
  for (const auto& f : res.fits) fit.add_row({static_cast<double>(f.n), f.exponent});
  w.table("_fit", fit);
  Table spread;
  spread.header = {"value", "spread"};
  for (const auto& s : res.spreads) spread.add_row({s.value, s.spread});
  w.table("_spread", spread);
}

void cmd_ldos(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  const auto p = make_phase_config(c, ro.threads);
  const PhaseTrace tr = run_phase_experiment(p);
  report(tr);
  LdosOptions lo;
  lo.hermitian_extend = c.spectral.hermitian_extend;
  lo.center_energy = c.spectral.center ? *c.spectral.center : expectation(p.model, p.psi);
  lo.taper_width = c.spectral.taper;
  const LdosSpectrum s = ldos_dft(tr.g, tr.tau, lo);
  w.table("", ldos_table(s));
  if (p.model.n_sites <= kOracleMaxSites) {
    const double width = c.spectral.reference_width.value_or(s.eta);
    w.table("_reference", ldos_table(exact_ldos(p.model, p.psi, width)));
  }
  std::cerr << "eta = " << s.eta << ", total weight = " << s.total_weight()
            << ", max |imag| = " << s.imag_residue << "\n";
}

void cmd_hadamard(const ExperimentConfig& c, const RunOptions& ro, Writer& w) {
  const BaselineSpec b = c.baseline.value_or(BaselineSpec{});
  const HamiltonianSpec spec = c.model.build();
  const StateVector psi = c.psi.build(c.model.n);
  const auto& a = c.algorithm;
  const int K = grid_size(a.t_max, a.tau);
  const bool want_re = b.both_parts || b.part == Part::Real;
  const bool want_im = b.both_parts || b.part == Part::Imag;
  std::optional<DenseOracle> oracle;
  if (spec.n_sites <= kOracleMaxSites) oracle.emplace(spec);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(K) + 1);
  parallel_for(rows.size(), ro.threads, [&](std::size_t k) {
    const double t = static_cast<double>(k) * a.tau;
    double re = std::nan(""), im = std::nan("");
    if (want_re) {
      Rng rng = make_stream(c.seed, {kTagHadamard, k, 0});
      re = hadamard_test(spec, psi, t, a.tau, a.order, Part::Real, b.shots, &rng).estimate;
    }
    if (want_im) {
      Rng rng = make_stream(c.seed, {kTagHadamard, k, 1});
      im = hadamard_test(spec, psi, t, a.tau, a.order, Part::Imag, b.shots, &rng).estimate;
    }
    cplx ex{std::nan(""), std::nan("")};
    if (oracle) ex = exact_value(*oracle, psi, psi, t);
    rows[k] = {t, re, im, ex.real(), ex.imag()};
  });
  Table t;
  t.header = {"t", "re_g", "im_g", "re_exact", "im_exact"};
  for (const auto& r : rows) t.add_row(r);
  w.table("", t);
}

void cmd_sequential(const ExperimentConfig& c, const RunOptions&, Writer& w) {
  if (!c.baseline || c.baseline->sequence.empty())
    throw ConfigError("baseline: sequential interferometry needs a 'sequence' of states");
  const BaselineSpec& b = *c.baseline;
  const HamiltonianSpec spec = c.model.build();
  std::vector<StateVector> seq;
  for (const auto& s : b.sequence) seq.push_back(s.build(c.model.n));
  const double t = c.algorithm.t_max;
  std::optional<DenseOracle> oracle;
  if (spec.n_sites <= kOracleMaxSites) oracle.emplace(spec);
  double anchor = 0.0;
  if (b.phi_anchor) anchor = *b.phi_anchor;
  else if (oracle) anchor = std::arg(exact_value(*oracle, seq.front(), seq.front(), t));
  else throw ConfigError("baseline: 'phi_anchor' is required beyond the oracle size limit");
  InterferometryOptions io;
  io.thetas = {b.theta0, b.theta1};
  io.fallback_threshold = b.fallback_threshold;
  io.shots = b.shots;
  io.seed = c.seed;
  const auto res = sequential_interferometry(spec, seq, t, c.algorithm.tau, c.algorithm.order, anchor, io);
  Table steps;
  steps.header = {"step", "r_ii", "r_ij", "r_jj", "phi_ij", "phi_jj", "inv_r_tilde2", "fallback"};
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const auto& s = res.steps[i];
    steps.add_row({static_cast<double>(i + 1), s.r_ii, s.r_ij, s.r_jj, s.phi_ij, s.phi_jj, s.inv_r_tilde2,
                   s.fallback ? 1.0 : 0.0});
  }
  w.table("", steps);
  Table summary;
  summary.header = {"phi_final", "i_tilde", "phi_exact"};
  double exact = std::nan("");
  if (oracle) {
    exact = std::arg(exact_value(*oracle, seq.back(), seq.back(), t));
    exact += 2.0 * std::numbers::pi * std::round((res.phi_final - exact) / (2.0 * std::numbers::pi));
  }
  summary.add_row({res.phi_final, res.i_tilde, exact});
  w.table("_summary", summary);
}

void cmd_cost(const ExperimentConfig& c, const RunOptions&, Writer& w) {
  if (c.cost.empty()) throw ConfigError("cost: missing 'cost' block");
  Table t;
  t.header = {"method", "N", "t", "epsilon", "p", "d", "r", "I", "depth", "measurements"};
  for (const auto& row : c.cost) {
    std::vector<CostMethod> methods{row.input.method};
    if (row.method == "all")
      methods = {CostMethod::Hadamard, CostMethod::Sequential, CostMethod::ThisWork, CostMethod::Magnitude};
    for (CostMethod m : methods) {
      CostInput in = row.input;
      in.method = m;
      const CostEstimate e = resource_cost(in);
      std::vector<std::string> cells{to_string(m)};
      for (double v : {in.N, in.t, in.epsilon, static_cast<double>(in.p), in.d, in.r, in.I, e.depth, e.measurements})
        cells.push_back(format_double(v));
      t.rows.push_back(std::move(cells));
    }
  }
  w.table("", t);
}

}  // namespace

std::vector<std::string> run_command(const std::string& command, ExperimentConfig c, const RunOptions& ro) {
  if (ro.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (ro.seed) c.seed = *ro.seed;
  if (ro.out_dir) c.output.dir = *ro.out_dir;
  if (command == "noise") {
    if (!c.noise) throw ConfigError("noise: the noise command needs a 'noise' block");
    c.algorithm.backend = Backend::Noisy;
  }
  Writer w;
  w.dir = c.output.dir;
  w.json = c.output.json;
  w.stem = c.output.name.empty() ? command : c.output.name;
  for (char& ch : w.stem)
    if (ch == '-') ch = '_';
  std::filesystem::create_directories(w.dir);

  if (command == "amplitude") cmd_amplitude(c, ro, w);
  else if (command == "phase" || command == "noise") cmd_phase(c, ro, w);
  else if (command == "two-sided") cmd_two_sided(c, ro, w);
  else if (command == "scaling") cmd_scaling(c, ro, w);
  else if (command == "ldos") cmd_ldos(c, ro, w);
  else if (command == "baseline-hadamard") cmd_hadamard(c, ro, w);
  else if (command == "baseline-sequential") cmd_sequential(c, ro, w);
  else if (command == "cost") cmd_cost(c, ro, w);
  else throw std::invalid_argument("unknown command '" + command + "'");
  w.snapshot(c);
  return w.written;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Loschmidt amplitude phase experiments"};
  app.set_version_flag("--version", LOSCH_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string command;

  auto add_flags = [&](CLI::App* sub, const std::string& name) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&command, name] { command = name; });
  };
  add_flags(app.add_subcommand("amplitude", "magnitude r(t) and the shifted-time probabilities"), "amplitude");
  add_flags(app.add_subcommand("phase", "full phase reconstruction"), "phase");
  add_flags(app.add_subcommand("two-sided", "two-sided amplitude with an inserted operator"), "two-sided");
  add_flags(app.add_subcommand("scaling", "phase-error scaling sweep"), "scaling");
  add_flags(app.add_subcommand("ldos", "local density of states from the amplitude"), "ldos");
  add_flags(app.add_subcommand("noise", "phase reconstruction under depolarizing noise"), "noise");
  CLI::App* baseline = app.add_subcommand("baseline", "reference protocols");
  baseline->require_subcommand(1);
  add_flags(baseline->add_subcommand("hadamard", "ancilla Hadamard test"), "baseline-hadamard");
  add_flags(baseline->add_subcommand("sequential", "sequential interferometry chain"), "baseline-sequential");
  add_flags(app.add_subcommand("cost", "resource cost comparison table"), "cost");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunOptions ro;
    ro.threads = threads;
    if (!out_dir.empty()) ro.out_dir = out_dir;
    ro.seed = seed;
    const ExperimentConfig cfg = load_config(config_path);
    for (const auto& path : run_command(command, cfg, ro)) std::cout << path << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace losch
