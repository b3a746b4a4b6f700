#include "qalab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qalab/errors.hpp"
#include "qalab/parallel.hpp"

namespace qalab {

namespace {

constexpr double kCrossingTolerance = 1e-12;

struct BareCondition {
  std::vector<double> qa_levels;
  std::vector<double> active_levels;
  ComplexMatrix coupling;  ///< <E_a| dH_QA/df |E_b>
};

BareCondition bare_condition(const ModelEvaluator& eval, double s) {
  const auto spec = eval.qa_spectrum(s);
  BareCondition out;
  out.qa_levels = spec.eigenvalues;
  out.active_levels = penalized_levels(spec.eigenvalues, eval.initial_spectrum().eigenvalues, eval.model().penalty);
  out.coupling = spec.eigenvectors.adjoint() * eval.qa_slope().matrix() * spec.eigenvectors;
  return out;
}

void require_gap(double gap, double s, const char* what) {
  if (!(gap > kCrossingTolerance)) {
    throw NumericalError(std::string("condition_profile: ") + what + " gap " + std::to_string(gap) +
                         " closes at s = " + std::to_string(s));
  }
}

}  // namespace

std::vector<ConditionSample> condition_profile(const AnnealModel& model, const std::vector<double>& s_grid) {
  const ModelEvaluator eval(model);
  const bool nonlinear = !model.schedule.is_linear();
  std::vector<ConditionSample> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    const auto bare = bare_condition(eval, s);
    const double qa_gap = bare.qa_levels[1] - bare.qa_levels[0];
    require_gap(qa_gap, s, "H_QA");
    const double gap = bare.active_levels[1] - bare.active_levels[0];
    require_gap(gap, s, "total");

    // |<E_1| d/df |E_0>| is unchanged by the penalty; only the gap rescales it.
    const double nonadiabatic = std::abs(bare.coupling(1, 0)) / qa_gap;
    ConditionSample sample;
    sample.s = s;
    sample.gap = gap;
    sample.transition = gap * nonadiabatic / model.total_time;
    sample.eta = sample.transition / (gap * gap);
    if (nonlinear) sample.eta_gen = std::abs(model.schedule.derivative(s)) * sample.eta;
    out.push_back(sample);
  }
  return out;
}

std::vector<double> level_condition_terms(const AnnealModel& model, double s) {
  const ModelEvaluator eval(model);
  const auto bare = bare_condition(eval, s);
  std::vector<double> out;
  for (std::size_t j = 1; j < bare.qa_levels.size(); ++j) {
    const double qa_gap = bare.qa_levels[j] - bare.qa_levels[0];
    const double gap = bare.active_levels[j] - bare.active_levels[0];
    require_gap(qa_gap, s, "H_QA");
    require_gap(gap, s, "total");
    const double transition = gap * std::abs(bare.coupling(j, 0)) / qa_gap / model.total_time;
    out.push_back(transition / (gap * gap));
  }
  return out;
}

double grover_nonadiabatic_coupling(int qubits, double s, double total_time) {
  if (qubits < 2) throw ContractError("grover_nonadiabatic_coupling: L must be >= 2");
  if (!(s >= 0.0 && s <= 1.0)) throw ContractError("grover_nonadiabatic_coupling: s outside [0, 1]");
  const double x = std::ldexp(1.0, -qubits);
  return std::sqrt((1.0 - x) * x) / (total_time * (1.0 - 4.0 * s * (1.0 - s) * (1.0 - x)));
}

TransitionPeak transition_matrix_peak(const AnnealModel& model, const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw ContractError("transition_matrix_max: empty s grid");
  const auto profile = condition_profile(model, s_grid);
  auto it = std::max_element(profile.begin(), profile.end(),
                             [](const auto& a, const auto& b) { return a.transition < b.transition; });
  return {it->transition, it->s};
}

double transition_matrix_max(const AnnealModel& model, const std::vector<double>& s_grid) {
  return transition_matrix_peak(model, s_grid).value;
}

double magnetization(int qubits, double s) {
  const auto a = grover_angles(qubits, s);
  const double c = std::cos(0.5 * a.theta);
  const double sn = std::sin(0.5 * a.theta);
  return c * c - sn * sn / (std::ldexp(1.0, qubits) - 1.0);
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ContractError("scaling_fit: need at least 2 points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [size, value] : points) {
    if (!(value > 0.0)) throw ContractError("scaling_fit: values must be positive, got " + std::to_string(value));
    sx += size;
    sy += std::log2(value);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [size, value] : points) {
    sxx += (size - mx) * (size - mx);
    sxy += (size - mx) * (std::log2(value) - my);
  }
  if (sxx == 0.0) throw ContractError("scaling_fit: need at least 2 distinct L values");

  ScalingFit fit;
  fit.beta = sxy / sxx;
  const double intercept = my - fit.beta * mx;
  fit.alpha = std::exp2(intercept);
  fit.points = points;
  double ss = 0.0;
  for (const auto& [size, value] : points) {
    const double r = std::log2(value) - intercept - fit.beta * size;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

AsymptoteFit fidelity_asymptote_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ContractError("fidelity_asymptote_fit: need at least 2 points");
  Eigen::MatrixXd design(points.size(), 2);
  Eigen::VectorXd rhs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [t, f] = points[i];
    if (!(t > 0.0)) throw ContractError("fidelity_asymptote_fit: T must be positive");
    design(i, 0) = 1.0 / t;
    design(i, 1) = 1.0 / (t * t);
    rhs(i) = f - 1.0;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < 2) throw ContractError("fidelity_asymptote_fit: need at least 2 distinct T values");
  const Eigen::Vector2d coeffs = qr.solve(rhs);
  return {coeffs(0), coeffs(1), points};
}

std::vector<std::pair<double, double>> asymptotic_points(const std::vector<std::pair<double, double>>& points,
                                                         double max_infidelity) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : points)
    if (1.0 - p.second <= max_infidelity) out.push_back(p);
  return out;
}

double two_level_std(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw ContractError("two_level_std: F = " + std::to_string(fidelity) + " outside [0, 1]");
  }
  return std::sqrt(fidelity * (1.0 - fidelity));
}

std::size_t StepPolicy::steps_for(const AnnealModel& model) const {
  return steps > 0 ? steps : recommended_steps(model, drift_budget);
}

RunPoint run_point(const AnnealModel& model, const StepPolicy& policy) {
  RunPoint point;
  point.total_time = model.total_time;
  try {
    const std::size_t steps = policy.steps_for(model);
    EvolveOptions opts;
    opts.record_stride = steps;
    const auto traj = evolve(model, steps, opts);
    point.fidelity = traj.final_fidelity;
    point.cost = traj.cost;
    if (!traj.accepted) {
      point.ok = false;
      point.error = "norm drift " + std::to_string(traj.norm_drift) + " above threshold";
    }
  } catch (const NumericalError& e) {
    point.ok = false;
    point.error = e.what();
  }
  return point;
}

MinTimeResult min_annealing_time(const AnnealModel& model, const std::vector<double>& grid, double threshold,
                                 const StepPolicy& policy, const std::vector<double>& refine) {
  if (grid.empty()) throw ContractError("min_annealing_time: empty T grid");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ContractError("min_annealing_time: threshold outside (0, 1)");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ContractError("min_annealing_time: T grid must be positive and strictly ascending");
    }
  }

  MinTimeResult result;
  auto attempt = [&](double t) {
    AnnealModel m = model;
    m.total_time = t;
    const RunPoint p = run_point(m, policy);
    ++result.runs;
    if (p.ok && p.fidelity > result.best_fidelity) {
      result.best_fidelity = p.fidelity;
      result.best_time = t;
    }
    return p;
  };
  auto accept = [&](const RunPoint& p) {
    result.found = true;
    result.total_time = p.total_time;
    result.cost = p.cost;
    result.fidelity = p.fidelity;
  };

  double lower = 0.0;
  for (double t : grid) {
    const RunPoint p = attempt(t);
    if (p.ok && p.fidelity >= threshold) {
      accept(p);
      break;
    }
    lower = t;
  }
  if (!result.found) return result;

  for (double step : refine) {
    if (!(step > 0.0)) throw ContractError("min_annealing_time: refinement steps must be positive");
    const double upper = result.total_time;
    double last_fail = lower;
    for (int j = 1;; ++j) {
      const double t = lower + j * step;
      if (t >= upper * (1.0 - 1e-12)) break;
      const RunPoint p = attempt(t);
      if (p.ok && p.fidelity >= threshold) {
        accept(p);
        break;
      }
      last_fail = t;
    }
    lower = last_fail;
  }
  return result;
}

std::vector<RunPoint> cost_fidelity_sweep(const AnnealModel& model, const std::vector<double>& grid,
                                          const StepPolicy& policy, unsigned threads) {
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  return parallel_map<RunPoint>(
      sorted.size(),
      [&](std::size_t i) {
        AnnealModel m = model;
        m.total_time = sorted[i];
        return run_point(m, policy);
      },
      threads);
}

std::vector<double> arithmetic_grid(double step, int count) {
  if (!(step > 0.0) || count < 1) throw ContractError("arithmetic_grid: need step > 0 and count >= 1");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = step * (i + 1);
  return g;
}

std::vector<double> unit_grid(int count) {
  if (count < 2) throw ContractError("unit_grid: need at least 2 points");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = static_cast<double>(i) / (count - 1);
  g.back() = 1.0;
  return g;
}

}  // namespace qalab
