#include "qalab/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qalab/analysis.hpp"
#include "qalab/dynamics.hpp"
#include "qalab/errors.hpp"
#include "qalab/models.hpp"
#include "qalab/parallel.hpp"
#include "qalab/report.hpp"

#ifndef QALAB_VERSION
#define QALAB_VERSION "dev"
#endif

namespace qalab {

namespace {

using nlohmann::json;

struct Options {
  std::string family = "grover";
  std::string qubits = "10";
  int order = 5;
  double mixing = 0.1;
  std::string penalty = "none";
  std::string schedule = "linear";
  double total_time = 20.0;
  std::string t_grid;
  std::size_t steps = 0;
  int grid = 201;
  double threshold = 0.5;
  std::string refine;
  std::string out;
  std::string manifest;
  std::string fit_out;
  unsigned threads = 0;
};

/// Output of one subcommand before it is written anywhere.
struct CommandResult {
  std::vector<std::pair<std::string, std::string>> files;  ///< (path or "" for stdout, content)
  int code = kExitOk;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ContractError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ContractError("not a number: '" + s + "'");
  return v;
}

AnnealModel model_from(const Options& o, int qubits, double total_time) {
  AnnealModel m;
  m.family = parse_family(o.family);
  m.qubits = qubits;
  m.order = o.order;
  m.mixing = o.mixing;
  m.penalty = parse_penalty(o.penalty);
  m.schedule = parse_schedule(o.schedule, qubits);
  m.total_time = total_time;
  m.validate();
  return m;
}

int single_qubits(const Options& o) {
  const auto list = parse_int_list(o.qubits);
  if (list.size() != 1) throw ContractError("this command takes a single --L value");
  return list.front();
}

std::vector<double> default_time_grid(const Options& o) {
  if (!o.t_grid.empty()) return parse_real_list(o.t_grid);
  if (parse_penalty(o.penalty) != PenaltyMode::none) return arithmetic_grid(10.0, 20);
  return parse_family(o.family) == Family::grover ? arithmetic_grid(100.0, 60) : arithmetic_grid(100.0, 20);
}

json config_of(const std::string& command, const Options& o) {
  json c;
  c["command"] = command;
  c["version"] = QALAB_VERSION;
  c["family"] = o.family;
  c["L"] = parse_int_list(o.qubits);
  c["p"] = o.order;
  c["lambda"] = o.mixing;
  c["penalty"] = o.penalty;
  c["schedule"] = o.schedule;
  c["T"] = o.total_time;
  c["T_grid"] = o.t_grid;
  c["steps"] = o.steps;
  c["grid"] = o.grid;
  c["threshold"] = o.threshold;
  c["refine"] = o.refine;
  c["cost_hamiltonian"] = "total";
  return c;
}

std::string stamp(const std::string& command, const json& config) {
  return "qalab " + command + " config-digest=" + sha256_hex(config.dump());
}

// ---------------------------------------------------------------------------

CommandResult cmd_spectrum(const Options& o, const json& config) {
  const ModelEvaluator eval(model_from(o, single_qubits(o), o.total_time));
  std::vector<std::string> cols{"s"};
  for (Eigen::Index i = 0; i < eval.dim(); ++i) cols.push_back("E_" + std::to_string(i));
  CsvTable table(stamp("spectrum", config), cols);
  for (double s : unit_grid(o.grid)) {
    const auto levels = penalized_levels(eval.qa_spectrum(s).eigenvalues, eval.initial_spectrum().eigenvalues,
                                         eval.model().penalty);
    std::vector<double> row{s};
    row.insert(row.end(), levels.begin(), levels.end());
    table.add_row(row);
  }
  return {{{o.out, table.str()}}};
}

CommandResult cmd_dynamics(const Options& o, const json& config, std::ostream& err) {
  const auto model = model_from(o, single_qubits(o), o.total_time);
  const std::size_t steps = o.steps > 0 ? o.steps : recommended_steps(model);
  EvolveOptions opts;
  opts.record_stride = std::max<std::size_t>(1, steps / static_cast<std::size_t>(std::max(1, o.grid - 1)));
  const auto traj = evolve(model, steps, opts);
  CsvTable table(stamp("dynamics", config), {"s", "fidelity", "norm", "running_cost"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    table.add_row({traj.times[i] / model.total_time, traj.fidelities[i], traj.norms[i], traj.running_cost[i]});
  }
  CommandResult r{{{o.out, table.str()}}};
  if (!traj.accepted) {
    err << "dynamics: norm drift " << traj.norm_drift << " exceeds " << kNormDriftThreshold
        << "; increase --steps\n";
    r.code = kExitNumerical;
  }
  return r;
}

CommandResult cmd_condition(const Options& o, const json& config) {
  const auto qubit_list = parse_int_list(o.qubits);
  const auto grid = unit_grid(o.grid);
  if (qubit_list.size() == 1) {
    const auto model = model_from(o, qubit_list.front(), o.total_time);
    const bool nonlinear = !model.schedule.is_linear();
    std::vector<std::string> cols{"s", "gap", "transition", "eta"};
    if (nonlinear) cols.push_back("eta_gen");
    CsvTable table(stamp("condition", config), cols);
    for (const auto& c : condition_profile(model, grid)) {
      std::vector<double> row{c.s, c.gap, c.transition, c.eta};
      if (nonlinear) row.push_back(*c.eta_gen);
      table.add_row(row);
    }
    return {{{o.out, table.str()}}};
  }
  CsvTable table(stamp("condition", config), {"L", "transition_max", "s_at_max", "eta_at_max"});
  const auto peaks = parallel_map<std::vector<double>>(
      qubit_list.size(),
      [&](std::size_t i) {
        const auto model = model_from(o, qubit_list[i], o.total_time);
        const auto profile = condition_profile(model, grid);
        const auto it = std::max_element(profile.begin(), profile.end(),
                                         [](const auto& a, const auto& b) { return a.transition < b.transition; });
        return std::vector<double>{static_cast<double>(qubit_list[i]), it->transition, it->s, it->eta};
      },
      o.threads);
  for (const auto& row : peaks) table.add_row(row);
  return {{{o.out, table.str()}}};
}

CommandResult cmd_sweep(const Options& o, const json& config) {
  const auto model = model_from(o, single_qubits(o), o.total_time);
  StepPolicy policy;
  policy.steps = o.steps;
  const auto rows = cost_fidelity_sweep(model, default_time_grid(o), policy, o.threads);
  CsvTable table(stamp("sweep", config), {"T", "fidelity", "cost", "ok"});
  for (const auto& r : rows) {
    table.add_row(std::vector<std::string>{format_number(r.total_time), format_number(r.fidelity),
                                           format_number(r.cost), r.ok ? "1" : "0"});
  }
  return {{{o.out, table.str()}}};
}

CommandResult cmd_scaling(const Options& o, const json& config, std::ostream& err) {
  const auto qubit_list = parse_int_list(o.qubits);
  const auto grid = default_time_grid(o);
  const auto refine = o.refine.empty() ? std::vector<double>{} : parse_real_list(o.refine);
  StepPolicy policy;
  policy.steps = o.steps;

  const auto results = parallel_map<MinTimeResult>(
      qubit_list.size(),
      [&](std::size_t i) {
        return min_annealing_time(model_from(o, qubit_list[i], grid.front()), grid, o.threshold, policy, refine);
      },
      o.threads);

  CsvTable table(stamp("scaling", config), {"L", "T_min", "cost", "fidelity", "found", "runs"});
  std::vector<std::pair<double, double>> points;
  std::vector<int> excluded;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const double L = qubit_list[i];
    if (r.found) {
      points.emplace_back(L, r.cost);
      table.add_row(std::vector<std::string>{format_number(L), format_number(r.total_time), format_number(r.cost),
                                             format_number(r.fidelity), "1", std::to_string(r.runs)});
    } else {
      excluded.push_back(qubit_list[i]);
      table.add_row(std::vector<std::string>{format_number(L), format_number(r.best_time), "nan",
                                             format_number(r.best_fidelity), "0", std::to_string(r.runs)});
      err << "scaling: L=" << qubit_list[i] << " never reached F >= " << o.threshold << " (best F "
          << r.best_fidelity << " at T=" << r.best_time << "); excluded from fit\n";
    }
  }

  json fit_json;
  fit_json["config_digest"] = sha256_hex(config.dump());
  fit_json["excluded_L"] = excluded;
  CommandResult result;
  if (points.size() >= 2) {
    const auto fit = scaling_fit(points);
    fit_json["alpha"] = fit.alpha;
    fit_json["beta"] = fit.beta;
    fit_json["residual"] = fit.residual;
    fit_json["points"] = fit.points;
  } else {
    fit_json["alpha"] = nullptr;
    fit_json["beta"] = nullptr;
    err << "scaling: fewer than 2 points reached the threshold; no fit\n";
    result.code = kExitNumerical;
  }
  result.files.emplace_back(o.out, table.str());
  const std::string fit_path = !o.fit_out.empty() ? o.fit_out : (o.out.empty() ? "" : o.out + ".fit.json");
  result.files.emplace_back(fit_path, fit_json.dump(2) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// checks

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::vector<CheckLine> run_checks() {
  std::vector<CheckLine> lines;
  auto check = [&](const std::string& name, auto&& fn) {
    try {
      lines.push_back(fn());
      lines.back().name = name;
    } catch (const std::exception& e) {
      lines.push_back({name, false, std::string("exception: ") + e.what()});
    }
  };

  auto rescaling = [](AnnealModel m, double k) {
    const auto steps = recommended_steps(m);
    const auto r = rescaling_check(m, k, steps);
    const bool pass = r.state_fidelity >= 1.0 - 1e-8 && std::abs(r.cost_ratio - 1.0) <= 1e-6;
    return CheckLine{"", pass,
                     "overlap=" + fmt(r.state_fidelity) + " (>= 1-1e-8), cost_ratio=" + fmt(r.cost_ratio) +
                         " (1 +- 1e-6)"};
  };
  check("rescaling invariance, grover L=6 T=100 k=4", [&] {
    AnnealModel m;
    m.qubits = 6;
    m.total_time = 100.0;
    return rescaling(m, 4.0);
  });
  check("rescaling invariance, pspin L=8 p=5 T=50 k=10", [&] {
    AnnealModel m;
    m.family = Family::pspin;
    m.qubits = 8;
    m.total_time = 50.0;
    return rescaling(m, 10.0);
  });

  for (Family fam : {Family::grover, Family::pspin}) {
    const int L = fam == Family::grover ? 10 : 16;
    check("penalty norm bound, " + to_string(fam) + " L=" + std::to_string(L), [&] {
      AnnealModel m;
      m.family = fam;
      m.qubits = L;
      const ModelEvaluator eval(m);
      const double at_zero = operator_norm(eval.qa_hamiltonian(0.0));
      double worst = -1e300;
      for (double s : unit_grid(100)) {
        const auto qa = eval.qa_hamiltonian(s);
        const auto pen = penalty_term(qa, eval.initial_spectrum(), PenaltyMode::pinned);
        worst = std::max(worst, operator_norm(pen) - at_zero - operator_norm(qa));
      }
      return CheckLine{"", worst <= 1e-12, "max(||H_pena|| - ||H_QA(0)|| - ||H_QA(s)||) = " + fmt(worst) + " (<= 0)"};
    });
  }

  check("two-level sigma = sqrt(F(1-F)), penalized grover L=10", [] {
    const auto H = grover_hamiltonian(10, 0.3, PenaltyMode::pinned);
    const auto spec = eigendecompose(H);
    double worst = 0.0;
    for (double F : {0.0, 0.1, 0.5, 0.9, 0.99, 1.0}) {
      const ComplexVector psi = std::sqrt(F) * spec.vector(0) + std::sqrt(1.0 - F) * spec.vector(1);
      worst = std::max(worst, std::abs(expectation_and_std(H, psi).std - two_level_std(F)));
    }
    return CheckLine{"", worst <= 1e-8, "max |sigma - sqrt(F(1-F))| = " + fmt(worst) + " (<= 1e-8)"};
  });

  check("counter-diabatic norm, grover L=10 T=20 s=1/2", [] {
    AnnealModel m;
    m.qubits = 10;
    m.total_time = 20.0;
    const double got = counterdiabatic_norm(m, 0.5);
    const double want = std::sqrt(2.0) * std::sqrt(1023.0) / 20.0;
    return CheckLine{"", std::abs(got - want) <= 1e-9 * want, "observed=" + fmt(got) + " expected=" + fmt(want)};
  });

  check("fidelity asymptote a1 > 0, penalized grover L=10", [] {
    AnnealModel m;
    m.qubits = 10;
    m.penalty = PenaltyMode::pinned;
    const auto rows = cost_fidelity_sweep(m, arithmetic_grid(10.0, 20));
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
      if (r.ok) pts.emplace_back(r.total_time, r.fidelity);
    const auto fit = fidelity_asymptote_fit(asymptotic_points(pts));
    return CheckLine{"", fit.a1 > 0.0, "a1=" + fmt(fit.a1) + " a2=" + fmt(fit.a2) + " (a1 > 0)"};
  });
  return lines;
}

CommandResult cmd_checks(std::ostream& out) {
  const auto lines = run_checks();
  bool all = true;
  for (const auto& l : lines) {
    out << (l.pass ? "[PASS] " : "[FAIL] ") << l.name << ": " << l.detail << "\n";
    all = all && l.pass;
  }
  out << (all ? "all checks passed\n" : "some checks FAILED\n");
  CommandResult r;
  r.code = all ? kExitOk : kExitCheckFailed;
  return r;
}

// ---------------------------------------------------------------------------

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ContractError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

int run_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "replay: cannot read " << path << "\n";
    return kExitUsage;
  }
  RunManifest recorded;
  try {
    recorded = RunManifest::from_json(json::parse(in));
  } catch (const std::exception& e) {
    err << "replay: malformed manifest: " << e.what() << "\n";
    return kExitUsage;
  }
  const int code = run_cli(recorded.command_line, out, err);
  if (code != kExitOk) return code;
  bool same = true;
  for (const auto& [file, digest] : recorded.outputs) {
    const std::string now = sha256_file(file);
    const bool match = now == digest;
    same = same && match;
    out << (match ? "identical " : "DIFFERS   ") << file << "\n";
  }
  return same ? kExitOk : kExitCheckFailed;
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "grover | pspin | pspin-nonstoquastic")->capture_default_str();
  sub->add_option("--L", o.qubits, "qubit count: 10, list 4,6,8 or range 4:12[:step]")->capture_default_str();
  sub->add_option("--p", o.order, "p-spin interaction order")->capture_default_str();
  sub->add_option("--lambda", o.mixing, "ferromagnetic weight of the non-stoquastic model")->capture_default_str();
  sub->add_option("--penalty", o.penalty, "none | eq16 | opt")->capture_default_str();
  sub->add_option("--schedule", o.schedule, "linear | grover-optimal")->capture_default_str();
  sub->add_option("--T", o.total_time, "annealing time")->capture_default_str();
  sub->add_option("--steps", o.steps, "RK4 steps (0 = chosen from a 1e-8 norm-drift budget)")->capture_default_str();
  sub->add_option("--out", o.out, "CSV output path (stdout when empty)");
  sub->add_option("--manifest", o.manifest, "manifest path (default <out>.manifest.json)");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& d : parse_real_list(text)) {
    if (d != std::floor(d)) throw ContractError("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  if (text.empty()) throw ContractError("empty list");
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ContractError("range must be start:stop[:step], got '" + text + "'");
    const double start = parse_real(parts[0]);
    const double stop = parse_real(parts[1]);
    const double step = parts.size() == 3 ? parse_real(parts[2]) : 1.0;
    if (!(step > 0.0) || stop < start) throw ContractError("bad range '" + text + "'");
    std::vector<double> out;
    for (int i = 0;; ++i) {
      const double v = start + i * step;
      if (v > stop + 1e-9 * std::abs(stop)) break;
      out.push_back(v);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qalab: quantum annealing penalty-term laboratory"};
  app.set_version_flag("--version", std::string(QALAB_VERSION));
  app.require_subcommand(1);

  Options o;
  std::string replay_path;
  auto* spectrum = app.add_subcommand("spectrum", "instantaneous spectrum of the total Hamiltonian");
  auto* dynamics = app.add_subcommand("dynamics", "fidelity, norm and running cost along one anneal");
  auto* condition = app.add_subcommand("condition", "gap, transition matrix and adiabatic-condition term");
  auto* sweep = app.add_subcommand("sweep", "final fidelity and cost for each T of a grid");
  auto* scaling = app.add_subcommand("scaling", "minimum-T cost per L and its alpha*2^(beta L) fit");
  auto* checks = app.add_subcommand("checks", "built-in consistency checks");
  auto* replay = app.add_subcommand("replay", "rerun a manifest and compare output digests");
  for (auto* sub : {spectrum, dynamics, condition, sweep, scaling}) add_model_options(sub, o);
  for (auto* sub : {spectrum, dynamics, condition}) {
    sub->add_option("--grid", o.grid, "number of s points (rows)")->capture_default_str();
  }
  for (auto* sub : {sweep, scaling}) {
    sub->add_option("--T-grid", o.t_grid, "T values: list or start:stop:step");
  }
  scaling->add_option("--threshold", o.threshold, "target final fidelity")->capture_default_str();
  scaling->add_option("--refine", o.refine, "descending refinement spacings, e.g. 10,1");
  scaling->add_option("--fit-out", o.fit_out, "fit JSON path (default <out>.fit.json)");
  replay->add_option("manifest", replay_path, "manifest JSON")->required();

  std::vector<const char*> argv{"qalab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*replay) return run_replay(replay_path, out, err);

  const auto started = std::chrono::steady_clock::now();
  CLI::App* active = app.get_subcommands().front();
  const std::string name = active->get_name();
  CommandResult result;
  json config;
  try {
    if (*checks) {
      return cmd_checks(out).code;
    }
    if (o.grid < 2) throw ContractError("--grid must be >= 2");
    config = config_of(name, o);
    if (*spectrum) result = cmd_spectrum(o, config);
    else if (*dynamics) result = cmd_dynamics(o, config, err);
    else if (*condition) result = cmd_condition(o, config);
    else if (*sweep) result = cmd_sweep(o, config);
    else if (*scaling) result = cmd_scaling(o, config, err);
  } catch (const ContractError& e) {
    err << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const IntegrationError& e) {
    err << name << ": integration failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << name << ": " << e.what() << "\n";
    return kExitNumerical;
  }

  RunManifest manifest;
  manifest.command_line = args;
  manifest.config = config;
  try {
    for (const auto& [path, content] : result.files) {
      if (path.empty()) {
        out << content;
      } else {
        write_file(path, content);
        manifest.outputs.emplace_back(path, sha256_hex(content));
      }
    }
    const std::string manifest_path = !o.manifest.empty() ? o.manifest : (o.out.empty() ? "" : o.out + ".manifest.json");
    if (!manifest_path.empty()) {
      manifest.wall_clock_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      write_file(manifest_path, manifest.to_json().dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return result.code;
}

}  // namespace qalab
