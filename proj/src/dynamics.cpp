#include "qalab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qalab/errors.hpp"

namespace qalab {

namespace {

constexpr Complex kMinusI{0.0, -1.0};
constexpr std::size_t kDefaultRecords = 1000;
constexpr std::size_t kMinimumSteps = 64;

// Hamiltonian at one RK4 node. Bare models use the real interpolation
// H_d + f (H_p - H_d) directly, skipping operator construction.
struct Stage {
  std::optional<HermitianOperator> total;
  RealMatrix real;
  std::optional<SpectralDecomposition> qa;

  ComplexVector apply(const ComplexVector& v) const { return total ? ComplexVector(total->matrix() * v) : ComplexVector(real * v); }
};

class StageSource {
 public:
  explicit StageSource(const ModelEvaluator& eval) : eval_(eval) {
    bare_ = eval.model().penalty == PenaltyMode::none && eval.driver().is_real() && eval.qa_slope().is_real();
    if (bare_) {
      driver_ = eval.driver().matrix().real();
      slope_ = eval.qa_slope().matrix().real();
    }
  }

  Stage at(double s) const {
    if (bare_) return {std::nullopt, driver_ + eval_.model().schedule.value(s) * slope_, std::nullopt};
    if (eval_.model().penalty == PenaltyMode::none) return {eval_.qa_hamiltonian(s), {}, std::nullopt};
    auto inst = eval_.instant(s);
    return {std::move(inst.total), {}, std::move(inst.qa)};
  }

 private:
  const ModelEvaluator& eval_;
  bool bare_ = false;
  RealMatrix driver_;
  RealMatrix slope_;
};

double spread(const Stage& stage, const ComplexVector& psi) {
  const ComplexVector hpsi = stage.apply(psi);
  const double mean = psi.dot(hpsi).real();
  return (hpsi - mean * psi).norm();
}

double ground_fidelity(const ModelEvaluator& eval, const Stage& stage, double s, const ComplexVector& psi) {
  const ComplexVector ground = stage.qa ? stage.qa->vector(0) : eval.qa_spectrum(s).vector(0);
  return std::norm(ground.dot(psi));
}

bool finite(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

}  // namespace

Trajectory evolve(const ModelEvaluator& eval, std::size_t steps, const EvolveOptions& options) {
  const AnnealModel& model = eval.model();
  if (steps == 0) throw ContractError("evolve: steps must be positive");
  if (!(options.energy_scale > 0.0)) throw ContractError("evolve: energy_scale must be positive");
  if (!(options.s_begin >= 0.0 && options.s_begin < options.s_end && options.s_end <= 1.0)) {
    throw ContractError("evolve: need 0 <= s_begin < s_end <= 1");
  }

  const double ds = (options.s_end - options.s_begin) / static_cast<double>(steps);
  const double h = ds * model.total_time;
  const double scale = options.energy_scale;
  const double step_norm = h * scale * eval.norm_bound();
  if (step_norm > kMaxStepNorm * (1.0 + 1e-12)) {
    throw ContractError("evolve: step too large, h*||H|| = " + std::to_string(step_norm) +
                        " > 0.1; use at least " +
                        std::to_string(static_cast<std::size_t>(std::ceil(steps * step_norm / kMaxStepNorm))) +
                        " steps");
  }

  ComplexVector psi;
  if (options.initial_state) {
    psi = *options.initial_state;
    if (psi.size() != eval.dim()) throw ContractError("evolve: initial state has wrong dimension");
    require_state(psi, "evolve");
  } else if (options.s_begin == 0.0) {
    psi = eval.initial_state();
  } else {
    psi = eval.qa_spectrum(options.s_begin).vector(0);
  }

  const std::size_t stride =
      options.record_stride > 0 ? options.record_stride : std::max<std::size_t>(1, steps / kDefaultRecords);

  Trajectory traj;
  traj.steps = steps;
  auto record = [&](double s, const Stage& stage, const ComplexVector& state, double running) {
    traj.times.push_back(s * model.total_time);
    traj.fidelities.push_back(ground_fidelity(eval, stage, s, state));
    traj.norms.push_back(state.norm());
    traj.running_cost.push_back(running);
    if (options.record_states) traj.states.push_back(state);
  };

  const StageSource source(eval);
  Stage current = source.at(options.s_begin);
  double sigma_prev = scale * spread(current, psi);
  double cost = 0.0;
  double drift = std::abs(psi.norm() - 1.0);
  record(options.s_begin, current, psi, 0.0);

  const Complex coeff = kMinusI * scale;
  for (std::size_t k = 0; k < steps; ++k) {
    const double s_a = options.s_begin + static_cast<double>(k) * ds;
    const double s_mid = std::min(1.0, s_a + 0.5 * ds);
    const double s_c = (k + 1 == steps) ? options.s_end : std::min(1.0, options.s_begin + (k + 1) * ds);

    const Stage mid = source.at(s_mid);
    Stage next = source.at(s_c);

    const ComplexVector k1 = coeff * current.apply(psi);
    const ComplexVector k2 = coeff * mid.apply(psi + (0.5 * h) * k1);
    const ComplexVector k3 = coeff * mid.apply(psi + (0.5 * h) * k2);
    const ComplexVector k4 = coeff * next.apply(psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!finite(psi)) throw IntegrationError("evolve: non-finite amplitude", k + 1);

    const double sigma = scale * spread(next, psi);
    cost += 0.5 * h * (sigma_prev + sigma);
    sigma_prev = sigma;
    drift = std::max(drift, std::abs(psi.norm() - 1.0));

    if ((k + 1) % stride == 0 || k + 1 == steps) record(s_c, next, psi, cost);
    current = std::move(next);
  }

  traj.final_state = psi;
  traj.final_fidelity = traj.fidelities.back();
  traj.cost = cost;
  traj.norm_drift = drift;
  traj.accepted = drift <= options.drift_threshold;
  return traj;
}

Trajectory evolve(const AnnealModel& model, std::size_t steps, const EvolveOptions& options) {
  return evolve(ModelEvaluator(model), steps, options);
}

std::size_t recommended_steps(const AnnealModel& model, double drift_budget) {
  model.validate();
  if (!(drift_budget > 0.0)) throw ContractError("recommended_steps: drift budget must be positive");
  const double bound = model.family == Family::grover ? 1.0 : static_cast<double>(model.qubits);
  const double span = model.total_time * bound;
  const double y = std::min(kMaxStepNorm, std::pow(72.0 * drift_budget / span, 0.2));
  return std::max(kMinimumSteps, static_cast<std::size_t>(std::ceil(span / y)));
}

double cost_of(const Trajectory& trajectory) {
  if (!trajectory.accepted) {
    throw ContractError("cost_of: trajectory was flagged (norm drift " + std::to_string(trajectory.norm_drift) +
                        ")");
  }
  return trajectory.cost;
}

RescalingResult rescaling_check(const AnnealModel& model, double k, std::size_t steps) {
  if (!model.schedule.is_linear()) throw ContractError("rescaling_check: requires a linear schedule");
  if (!(k > 0.0)) throw ContractError("rescaling_check: k must be positive");

  EvolveOptions opts;
  opts.record_stride = steps;
  const Trajectory reference = evolve(model, steps, opts);

  AnnealModel fast = model;
  fast.total_time = model.total_time / k;
  opts.energy_scale = k;
  const Trajectory rescaled = evolve(fast, steps, opts);

  const double overlap = std::norm(reference.final_state.dot(rescaled.final_state));
  return {overlap, cost_of(rescaled) / cost_of(reference)};
}

}  // namespace qalab
