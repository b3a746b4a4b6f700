#include "qalab/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qalab/errors.hpp"

namespace qalab {

namespace {

constexpr double kPairingTolerance = 1e-10;

void check_qubits(int qubits, const char* who) {
  if (qubits < 2) throw ContractError(std::string(who) + ": L must be >= 2, got " + std::to_string(qubits));
}

void check_s(double s, const char* who) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ContractError(std::string(who) + ": s = " + std::to_string(s) + " outside [0, 1]");
  }
}

void check_order(int order, const char* who) {
  if (order < 2) throw ContractError(std::string(who) + ": p must be >= 2, got " + std::to_string(order));
}

void check_mixing(double mixing, const char* who) {
  if (!(mixing > 0.0 && mixing <= 1.0)) {
    throw ContractError(std::string(who) + ": lambda must lie in (0, 1], got " + std::to_string(mixing));
  }
}

double spectral_scale(const std::vector<double>& levels) {
  return std::max(std::abs(levels.front()), std::abs(levels.back()));
}

void check_pairing(const std::vector<double>& levels, const char* label) {
  const double tol = kPairingTolerance * spectral_scale(levels);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] - levels[i - 1] < tol) {
      throw NumericalError(std::string("penalty_term: levels ") + std::to_string(i - 1) + " and " +
                           std::to_string(i) + " of the " + label +
                           " spectrum are degenerate; index pairing is ambiguous");
    }
  }
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::grover:
      return "grover";
    case Family::pspin:
      return "pspin";
    case Family::pspin_nonstoquastic:
      return "pspin-nonstoquastic";
  }
  return "grover";
}

std::string to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::none:
      return "none";
    case PenaltyMode::pinned:
      return "eq16";
    case PenaltyMode::optimal:
      return "opt";
  }
  return "none";
}

Family parse_family(const std::string& name) {
  if (name == "grover") return Family::grover;
  if (name == "pspin") return Family::pspin;
  if (name == "pspin-nonstoquastic" || name == "nonstoquastic") return Family::pspin_nonstoquastic;
  throw ContractError("unknown family '" + name + "' (expected grover, pspin or pspin-nonstoquastic)");
}

PenaltyMode parse_penalty(const std::string& name) {
  if (name == "none") return PenaltyMode::none;
  if (name == "eq16" || name == "pinned") return PenaltyMode::pinned;
  if (name == "opt" || name == "optimal") return PenaltyMode::optimal;
  throw ContractError("unknown penalty '" + name + "' (expected none, eq16 or opt)");
}

Eigen::Index AnnealModel::dim() const { return family == Family::grover ? 2 : qubits + 1; }

void AnnealModel::validate() const {
  check_qubits(qubits, "AnnealModel");
  if (family != Family::grover) check_order(order, "AnnealModel");
  if (family == Family::pspin_nonstoquastic) check_mixing(mixing, "AnnealModel");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ContractError("AnnealModel: T must be positive and finite");
  }
}

// ---------------------------------------------------------------------------
// Grover effective two-level model

GroverAngles grover_angles(int qubits, double s) {
  check_qubits(qubits, "grover_angles");
  check_s(s, "grover_angles");
  const double x = std::ldexp(1.0, -qubits);
  const double gap = std::sqrt((1.0 - 2.0 * s) * (1.0 - 2.0 * s) + 4.0 * x * s * (1.0 - s));
  const double c = (1.0 - 2.0 * (1.0 - s) * (1.0 - x)) / gap;
  const double sn = 2.0 * (1.0 - s) * std::sqrt(x * (1.0 - x)) / gap;
  return {c, sn, gap, std::atan2(sn, c)};
}

HermitianOperator grover_hamiltonian(int qubits, double s, PenaltyMode penalty) {
  if (penalty == PenaltyMode::optimal) {
    throw ContractError("grover_hamiltonian: closed form covers penalty none/eq16 only");
  }
  const auto a = grover_angles(qubits, s);
  const double g = penalty == PenaltyMode::none ? a.gap : 1.0;
  RealMatrix m(2, 2);
  m << 0.5 - 0.5 * g * a.cos_theta, -0.5 * g * a.sin_theta,  //
      -0.5 * g * a.sin_theta, 0.5 + 0.5 * g * a.cos_theta;
  return HermitianOperator(m);
}

GroverEigen grover_eigen(int qubits, double s) {
  const auto a = grover_angles(qubits, s);
  const double c = std::cos(0.5 * a.theta);
  const double sn = std::sin(0.5 * a.theta);
  ComplexVector ground(2), excited(2);
  ground << c, sn;
  excited << -sn, c;
  return {0.5 * (1.0 - a.gap), 0.5 * (1.0 + a.gap), ground, excited};
}

HermitianOperator grover_problem(int qubits) {
  check_qubits(qubits, "grover_problem");
  return HermitianOperator::diagonal({0.0, 1.0});
}

HermitianOperator grover_driver(int qubits) {
  check_qubits(qubits, "grover_driver");
  const double x = std::ldexp(1.0, -qubits);
  Eigen::Vector2d u(std::sqrt(x), std::sqrt(1.0 - x));
  RealMatrix m = RealMatrix::Identity(2, 2) - u * u.transpose();
  return HermitianOperator(m);
}

// ---------------------------------------------------------------------------
// p-spin, maximal-spin sector

SpinOperators spin_operators(int qubits) {
  check_qubits(qubits, "spin_operators");
  const Eigen::Index n = qubits + 1;
  const double spin = 0.5 * qubits;
  RealMatrix sz = RealMatrix::Zero(n, n);
  RealMatrix sx = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = spin - static_cast<double>(i);
    sz(i, i) = m;
    if (i + 1 < n) {
      // <m-1| S^x |m> = 1/2 sqrt(S(S+1) - m(m-1))
      const double amp = 0.5 * std::sqrt(spin * (spin + 1.0) - m * (m - 1.0));
      sx(i + 1, i) = amp;
      sx(i, i + 1) = amp;
    }
  }
  return {HermitianOperator(sz), HermitianOperator(sx)};
}

HermitianOperator pspin_problem(int qubits, int order) {
  check_qubits(qubits, "pspin_problem");
  check_order(order, "pspin_problem");
  std::vector<double> diag(qubits + 1);
  const double spin = 0.5 * qubits;
  for (int i = 0; i <= qubits; ++i) {
    const double magnetization = 2.0 * (spin - i) / qubits;
    diag[i] = -qubits * std::pow(magnetization, order);
  }
  return HermitianOperator::diagonal(diag);
}

HermitianOperator pspin_driver(int qubits) { return spin_operators(qubits).sx.scaled(-2.0); }

HermitianOperator antiferro_xx(int qubits) {
  const RealMatrix sx = spin_operators(qubits).sx.matrix().real();
  return HermitianOperator(RealMatrix((4.0 / qubits) * (sx * sx)));
}

HermitianOperator pspin_qa_hamiltonian(int qubits, int order, double s) {
  check_s(s, "pspin_qa_hamiltonian");
  return s * pspin_problem(qubits, order) + (1.0 - s) * pspin_driver(qubits);
}

HermitianOperator nonstoquastic_hamiltonian(int qubits, int order, double mixing, double s) {
  check_s(s, "nonstoquastic_hamiltonian");
  check_mixing(mixing, "nonstoquastic_hamiltonian");
  const auto target = mixing * pspin_problem(qubits, order) + (1.0 - mixing) * antiferro_xx(qubits);
  return s * target + (1.0 - s) * pspin_driver(qubits);
}

// ---------------------------------------------------------------------------
// Penalty

std::vector<double> penalized_levels(const std::vector<double>& at_s, const std::vector<double>& at_zero,
                                     PenaltyMode mode) {
  if (at_s.size() != at_zero.size()) throw ContractError("penalized_levels: dimension mismatch");
  switch (mode) {
    case PenaltyMode::none:
      return at_s;
    case PenaltyMode::pinned:
      return at_zero;
    case PenaltyMode::optimal: {
      double top = 0.0;
      for (std::size_t j = 1; j < at_s.size(); ++j) top = std::max(top, std::abs(at_s[j]));
      std::vector<double> out(at_s.size(), top);
      out[0] = 0.0;
      return out;
    }
  }
  return at_s;
}

HermitianOperator penalty_term(const SpectralDecomposition& qa_spectrum, const HermitianOperator& qa_at_s,
                               const SpectralDecomposition& at_zero, PenaltyMode mode) {
  if (qa_spectrum.dim() != at_zero.dim() || qa_at_s.dim() != at_zero.dim()) {
    throw ContractError("penalty_term: dimension mismatch between H_QA(s) and the s = 0 spectrum");
  }
  if (mode == PenaltyMode::none) return HermitianOperator::zero(qa_at_s.dim());
  if (mode == PenaltyMode::pinned) {
    check_pairing(qa_spectrum.eigenvalues, "H_QA(s)");
    check_pairing(at_zero.eigenvalues, "H_QA(0)");
  }
  const auto target = penalized_levels(qa_spectrum.eigenvalues, at_zero.eigenvalues, mode);
  std::vector<double> shifts(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) shifts[i] = target[i] - qa_spectrum.eigenvalues[i];
  return qa_spectrum.assemble(shifts);
}

HermitianOperator penalty_term(const HermitianOperator& qa_at_s, const SpectralDecomposition& at_zero,
                               PenaltyMode mode) {
  return penalty_term(eigendecompose(qa_at_s), qa_at_s, at_zero, mode);
}

// ---------------------------------------------------------------------------
// ModelEvaluator

namespace {

HermitianOperator problem_for(const AnnealModel& m) {
  switch (m.family) {
    case Family::grover:
      return grover_problem(m.qubits);
    case Family::pspin:
      return pspin_problem(m.qubits, m.order);
    case Family::pspin_nonstoquastic:
      return m.mixing * pspin_problem(m.qubits, m.order) + (1.0 - m.mixing) * antiferro_xx(m.qubits);
  }
  return grover_problem(m.qubits);
}

HermitianOperator driver_for(const AnnealModel& m) {
  return m.family == Family::grover ? grover_driver(m.qubits) : pspin_driver(m.qubits);
}

}  // namespace

ModelEvaluator::ModelEvaluator(AnnealModel model)
    : model_((model.validate(), std::move(model))),
      problem_(problem_for(model_)),
      driver_(driver_for(model_)),
      slope_(problem_ - driver_),
      initial_(qa_spectrum(0.0)) {}

ComplexVector ModelEvaluator::initial_state() const { return initial_.vector(0); }

HermitianOperator ModelEvaluator::qa_at_weight(double f) const {
  check_s(f, "ModelEvaluator::qa_at_weight");
  if (model_.family == Family::grover) return grover_hamiltonian(model_.qubits, f, PenaltyMode::none);
  return f * problem_ + (1.0 - f) * driver_;
}

HermitianOperator ModelEvaluator::qa_hamiltonian(double s) const {
  return qa_at_weight(model_.schedule.value(s));
}

SpectralDecomposition ModelEvaluator::qa_spectrum(double s) const {
  const double f = model_.schedule.value(s);
  if (model_.family == Family::grover) {
    const auto e = grover_eigen(model_.qubits, f);
    SpectralDecomposition out;
    out.eigenvalues = {e.ground_energy, e.excited_energy};
    out.eigenvectors.resize(2, 2);
    out.eigenvectors.col(0) = fix_phase(e.ground);
    out.eigenvectors.col(1) = fix_phase(e.excited);
    return out;
  }
  return eigendecompose(qa_at_weight(f));
}

ModelEvaluator::Instant ModelEvaluator::instant(double s) const {
  const double f = model_.schedule.value(s);
  auto qa = qa_at_weight(f);
  auto spectrum = qa_spectrum(s);
  if (model_.penalty == PenaltyMode::none) return {std::move(qa), std::move(spectrum)};
  if (model_.family == Family::grover && model_.penalty == PenaltyMode::pinned) {
    return {grover_hamiltonian(model_.qubits, f, PenaltyMode::pinned), std::move(spectrum)};
  }
  auto pen = penalty_term(spectrum, qa, initial_, model_.penalty);
  return {qa + pen, std::move(spectrum)};
}

HermitianOperator ModelEvaluator::total_hamiltonian(double s) const {
  if (model_.penalty == PenaltyMode::none) return qa_hamiltonian(s);
  return instant(s).total;
}

double ModelEvaluator::norm_bound() const {
  return model_.family == Family::grover ? 1.0 : static_cast<double>(model_.qubits);
}

// ---------------------------------------------------------------------------

double counterdiabatic_norm(const AnnealModel& model, double s) {
  AnnealModel bare = model;
  bare.penalty = PenaltyMode::none;
  ModelEvaluator eval(bare);
  const auto spec = eval.qa_spectrum(s);
  const double rate = bare.schedule.derivative(s) / bare.total_time;
  const ComplexMatrix coupling = spec.eigenvectors.adjoint() * eval.qa_slope().matrix() * spec.eigenvectors;
  const double tol = kPairingTolerance * spectral_scale(spec.eigenvalues);
  double sum = 0.0;
  const Eigen::Index n = spec.dim();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a == b) continue;
      const double spacing = spec.eigenvalues[b] - spec.eigenvalues[a];
      if (std::abs(spacing) < tol) {
        throw NumericalError("counterdiabatic_norm: levels " + std::to_string(a) + " and " + std::to_string(b) +
                             " are degenerate at s = " + std::to_string(s));
      }
      const double element = std::abs(coupling(a, b)) * rate / spacing;
      sum += element * element;
    }
  }
  return std::sqrt(sum);
}

}  // namespace qalab
