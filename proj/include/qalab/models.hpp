#pragma once

// Hamiltonian families: adiabatic Grover search (effective two-level model in
// the {|m>, |m_perp>} basis), the ferromagnetic p-spin model in its
// maximal-spin sector, and the non-stoquastic p-spin variant. Also the
// eigenstate-preserving penalty term that pins the spectrum to its s = 0
// values.

#include <optional>
#include <string>

#include "qalab/linalg.hpp"
#include "qalab/schedule.hpp"

namespace qalab {

enum class Family { grover, pspin, pspin_nonstoquastic };

enum class PenaltyMode {
  none,
  /// C_i(s) = E_i(0) - E_i(s): every level pinned to its s = 0 energy.
  pinned,
  /// Ground level moved to 0, every excited level to max_{j>=1} |E_j(s)|.
  optimal,
};

std::string to_string(Family family);
std::string to_string(PenaltyMode mode);
Family parse_family(const std::string& name);
PenaltyMode parse_penalty(const std::string& name);

struct AnnealModel {
  Family family = Family::grover;
  int qubits = 10;
  int order = 5;          ///< p, interaction order (p-spin families)
  double mixing = 0.1;    ///< lambda, weight of the ferromagnetic term (non-stoquastic)
  Schedule schedule = Schedule::linear();
  PenaltyMode penalty = PenaltyMode::none;
  double total_time = 20.0;  ///< T

  /// 2 for Grover, L + 1 for the p-spin families.
  Eigen::Index dim() const;

  /// Throws ContractError if any invariant is violated.
  void validate() const;
};

struct GroverAngles {
  double cos_theta;
  double sin_theta;
  double gap;    ///< Delta_QA
  double theta;  ///< in [0, pi], sin(theta) >= 0
};

GroverAngles grover_angles(int qubits, double s);

/// 2x2 Grover Hamiltonian in the {|m>, |m_perp>} basis:
///   1/2 I - (g/2)(cos theta sz + sin theta sx),
/// with g = Delta_QA for PenaltyMode::none and g = 1 for PenaltyMode::pinned.
HermitianOperator grover_hamiltonian(int qubits, double s, PenaltyMode penalty);

struct GroverEigen {
  double ground_energy;
  double excited_energy;
  ComplexVector ground;   ///< (cos theta/2, sin theta/2)
  ComplexVector excited;  ///< (-sin theta/2, cos theta/2)
};

GroverEigen grover_eigen(int qubits, double s);

/// Problem and driver Hamiltonians of the effective Grover model:
/// H_p = I - |m><m|, H_d = I - |u><u| with |u> the uniform superposition.
HermitianOperator grover_problem(int qubits);
HermitianOperator grover_driver(int qubits);

struct SpinOperators {
  HermitianOperator sz;
  HermitianOperator sx;
};

/// Total-spin S^z, S^x in the S = L/2 sector, basis m = S, S-1, ..., -S.
SpinOperators spin_operators(int qubits);

/// -L (2 S^z / L)^p (diagonal).
HermitianOperator pspin_problem(int qubits, int order);
/// -2 S^x.
HermitianOperator pspin_driver(int qubits);
/// L (2 S^x / L)^2.
HermitianOperator antiferro_xx(int qubits);

HermitianOperator pspin_qa_hamiltonian(int qubits, int order, double s);
HermitianOperator nonstoquastic_hamiltonian(int qubits, int order, double mixing, double s);

/// Penalty operator for H_QA at some s, given the spectrum of the same
/// family at s = 0. Pairs levels by ascending index; throws NumericalError
/// when a pinned pairing would be ambiguous (near-degenerate levels).
HermitianOperator penalty_term(const HermitianOperator& qa_at_s, const SpectralDecomposition& at_zero,
                               PenaltyMode mode);

/// Same, reusing an already-computed decomposition of H_QA(s).
HermitianOperator penalty_term(const SpectralDecomposition& qa_spectrum, const HermitianOperator& qa_at_s,
                               const SpectralDecomposition& at_zero, PenaltyMode mode);

/// Energies of H_QA + H_pena given the H_QA spectrum at s and at 0.
std::vector<double> penalized_levels(const std::vector<double>& at_s, const std::vector<double>& at_zero,
                                     PenaltyMode mode);

/// Evaluates one AnnealModel along the normalized time s in [0,1].
/// H_QA(s) = f(s) H_p + (1 - f(s)) H_d; the total Hamiltonian adds the
/// configured penalty. Caches H_p, H_d and the s = 0 spectrum.
class ModelEvaluator {
 public:
  explicit ModelEvaluator(AnnealModel model);

  const AnnealModel& model() const noexcept { return model_; }
  Eigen::Index dim() const noexcept { return problem_.dim(); }

  const HermitianOperator& problem() const noexcept { return problem_; }
  const HermitianOperator& driver() const noexcept { return driver_; }
  /// dH_QA / df, independent of f.
  const HermitianOperator& qa_slope() const noexcept { return slope_; }
  const SpectralDecomposition& initial_spectrum() const noexcept { return initial_; }

  /// Ground state of H(0), phase-fixed.
  ComplexVector initial_state() const;

  /// H_QA at interpolation weight f (no schedule applied).
  HermitianOperator qa_at_weight(double f) const;
  HermitianOperator qa_hamiltonian(double s) const;

  /// Phase-fixed spectrum of H_QA(s).
  SpectralDecomposition qa_spectrum(double s) const;

  struct Instant {
    HermitianOperator total;
    SpectralDecomposition qa;
  };

  /// Total Hamiltonian and the H_QA spectrum at s. The total shares the
  /// eigenvectors of H_QA.
  Instant instant(double s) const;
  HermitianOperator total_hamiltonian(double s) const;

  /// Upper bound on ||H_total(s)|| over s in [0,1].
  double norm_bound() const;

 private:
  AnnealModel model_;
  HermitianOperator problem_;
  HermitianOperator driver_;
  HermitianOperator slope_;
  SpectralDecomposition initial_;
};

/// sqrt(sum_{n != m} |<E_m| d_t E_n>|^2) for the bare H_QA eigenbasis, with
/// d_t H_QA = (df/ds)(H_p - H_d)/T. Throws NumericalError naming the level pair
/// when two levels are closer than 1e-10 * ||H_QA||.
double counterdiabatic_norm(const AnnealModel& model, double s);

}  // namespace qalab
