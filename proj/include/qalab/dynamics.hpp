#pragma once

// Fixed-step RK4 integration of i d|psi>/dt = H(t)|psi> along an AnnealModel,
// with fidelity against the instantaneous H_QA ground state and the
// accumulated energy-spread cost Q = int_0^T sigma[H(t), psi(t)] dt.

#include <cstddef>
#include <optional>
#include <vector>

#include "qalab/linalg.hpp"
#include "qalab/models.hpp"

namespace qalab {

inline constexpr double kMaxStepNorm = 0.1;        ///< largest allowed h * ||H||
inline constexpr double kNormDriftThreshold = 1e-7;

struct EvolveOptions {
  /// Record every `record_stride`-th grid point (the last point is always
  /// recorded). 0 picks a stride giving about 1000 records.
  std::size_t record_stride = 0;
  bool record_states = false;
  /// Multiply the Hamiltonian by this factor (time-rescaling experiments).
  double energy_scale = 1.0;
  /// Evolve over [s_begin, s_end] of the normalized time instead of [0, 1].
  double s_begin = 0.0;
  double s_end = 1.0;
  /// Starting state; defaults to the ground state of H(s_begin = 0).
  std::optional<ComplexVector> initial_state;
  double drift_threshold = kNormDriftThreshold;
};

struct Trajectory {
  std::vector<double> times;  ///< physical time t = s * T at recorded points
  std::vector<ComplexVector> states;  ///< empty unless record_states
  std::vector<double> fidelities;
  std::vector<double> norms;
  std::vector<double> running_cost;

  ComplexVector final_state;
  double final_fidelity = 0.0;
  double cost = 0.0;
  double norm_drift = 0.0;
  std::size_t steps = 0;
  /// false when norm_drift exceeded the threshold; the data is kept but
  /// must not be treated as a valid run.
  bool accepted = true;
};

/// Integrates `model` with `steps` equal RK4 steps. Throws ContractError when
/// h * ||H|| > 0.1 and IntegrationError on NaN/Inf amplitudes.
Trajectory evolve(const AnnealModel& model, std::size_t steps, const EvolveOptions& options = {});
Trajectory evolve(const ModelEvaluator& evaluator, std::size_t steps, const EvolveOptions& options = {});

/// Smallest step count with h * ||H|| <= 0.1 whose RK4 norm loss, estimated
/// as N (h ||H||)^6 / 72, stays below `drift_budget`.
std::size_t recommended_steps(const AnnealModel& model, double drift_budget = 1e-8);

/// Q for an accepted trajectory.
double cost_of(const Trajectory& trajectory);

struct RescalingResult {
  double state_fidelity;  ///< |<psi_T | psi'_{T/k}>|^2
  double cost_ratio;      ///< Q' / Q
};

/// Runs `model` once as given and once with k * H over the horizon T / k,
/// both with `steps` steps. Requires a linear schedule.
RescalingResult rescaling_check(const AnnealModel& model, double k, std::size_t steps);

}  // namespace qalab
