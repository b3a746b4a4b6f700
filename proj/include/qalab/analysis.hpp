#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qalab/dynamics.hpp"
#include "qalab/models.hpp"

namespace qalab {

/// Adiabatic-condition diagnostics at one normalized time.
struct ConditionSample {
  double s = 0.0;
  double gap = 0.0;         ///< E_1 - E_0 of the active total Hamiltonian
  double transition = 0.0;  ///< |<E_1| d_t H |E_0>| in physical time
  double eta = 0.0;         ///< transition / gap^2
  std::optional<double> eta_gen;  ///< |df/ds| * eta, non-linear schedules only
};

/// Evaluates the condition terms on `s_grid`. For penalized models the
/// transition is rebuilt from the bare eigensystem:
///   |<E_1| d_t H |E_0>| = gap * |<E_1|dH_QA/df|E_0>| / (Delta_QA T).
/// Throws NumericalError on a level crossing (gap <= 1e-12).
std::vector<ConditionSample> condition_profile(const AnnealModel& model, const std::vector<double>& s_grid);

/// eta_j = |<E_j| d_t H |E_0>| / (E_j - E_0)^2 for j = 1 .. dim-1.
std::vector<double> level_condition_terms(const AnnealModel& model, double s);

/// Closed form for the Grover model:
///   |<E_1| d/dt |E_0>| = sqrt((1-x) x) / (T (1 - 4 s (1-s)(1-x))),  x = 2^-L.
double grover_nonadiabatic_coupling(int qubits, double s, double total_time);

struct TransitionPeak {
  double value;
  double s;
};

TransitionPeak transition_matrix_peak(const AnnealModel& model, const std::vector<double>& s_grid);
double transition_matrix_max(const AnnealModel& model, const std::vector<double>& s_grid);

/// Ground-state magnetization of the Grover model, normalized to [-1, 1]:
///   cos^2(theta/2) - sin^2(theta/2) / (2^L - 1).
double magnetization(int qubits, double s);

struct ScalingFit {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::pair<double, double>> points;  ///< (L, value)
  double residual = 0.0;  ///< RMS of log2 residuals
};

/// Least squares of log2(value) = log2(alpha) + beta L.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

struct AsymptoteFit {
  double a1 = 0.0;
  double a2 = 0.0;
  std::vector<std::pair<double, double>> points;  ///< (T, F)
};

/// Least squares for F = 1 + a1/T + a2/T^2.
AsymptoteFit fidelity_asymptote_fit(const std::vector<std::pair<double, double>>& points);

/// Keeps the (T, F) points with 1 - F <= max_infidelity, where the 1/T
/// expansion of the fidelity is meaningful.
std::vector<std::pair<double, double>> asymptotic_points(const std::vector<std::pair<double, double>>& points,
                                                         double max_infidelity = 0.3);

/// sqrt(F (1 - F)).
double two_level_std(double fidelity);

/// Maps an annealing time to an RK4 step count.
struct StepPolicy {
  /// Fixed step count; 0 selects recommended_steps(model, drift_budget).
  std::size_t steps = 0;
  double drift_budget = 1e-8;

  std::size_t steps_for(const AnnealModel& model) const;
};

struct RunPoint {
  double total_time = 0.0;
  double fidelity = 0.0;
  double cost = 0.0;
  bool ok = true;
  std::string error;
};

/// Final fidelity and cost of one run; numerical failures are reported in
/// the result rather than thrown.
RunPoint run_point(const AnnealModel& model, const StepPolicy& policy);

struct MinTimeResult {
  bool found = false;
  double total_time = 0.0;  ///< T_min (valid when found)
  double cost = 0.0;
  double fidelity = 0.0;
  double best_time = 0.0;  ///< best (T, F) seen when not found
  double best_fidelity = 0.0;
  std::size_t runs = 0;
};

/// Scans `grid` in ascending order and returns the first T whose final
/// fidelity reaches `threshold`. Each entry of `refine` (descending step
/// sizes) then rescans the bracket (T_prev, T_min] with that spacing.
/// The answer is resolution-limited by the finest grid used.
MinTimeResult min_annealing_time(const AnnealModel& model, const std::vector<double>& grid, double threshold,
                                 const StepPolicy& policy = {}, const std::vector<double>& refine = {});

/// One run per T, ordered by T. Runs in parallel over `threads` workers
/// (0 = hardware concurrency).
std::vector<RunPoint> cost_fidelity_sweep(const AnnealModel& model, const std::vector<double>& grid,
                                          const StepPolicy& policy = {}, unsigned threads = 0);

/// T = step, 2 step, ..., count * step.
std::vector<double> arithmetic_grid(double step, int count);
/// `count` evenly spaced points on [0, 1] (count >= 2).
std::vector<double> unit_grid(int count);

}  // namespace qalab
