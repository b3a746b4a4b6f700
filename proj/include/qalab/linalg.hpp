#pragma once

// Dense complex linear algebra used by every other part of qalab.
// Units: hbar = 1, energies and times are dimensionless.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qalab {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Tolerance used wherever an operation demands a normalized state.
inline constexpr double kStateNormTolerance = 1e-9;

/// Dense square matrix that is Hermitian within
/// 1e-12 * (1 + max|entry|). Construction validates; the value is immutable.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix entries);
  explicit HermitianOperator(const RealMatrix& entries);

  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator diagonal(const std::vector<double>& values);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  /// True when every imaginary part is exactly zero.
  bool is_real() const noexcept { return real_; }

  ComplexVector apply(const ComplexVector& v) const;

  HermitianOperator operator+(const HermitianOperator& rhs) const;
  HermitianOperator operator-(const HermitianOperator& rhs) const;
  HermitianOperator scaled(double factor) const;

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix entries, Unchecked);

  ComplexMatrix entries_;
  bool real_ = false;
};

inline HermitianOperator operator*(double factor, const HermitianOperator& op) {
  return op.scaled(factor);
}

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
/// Every column is phase-fixed (see fix_phase).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index dim() const noexcept { return eigenvectors.rows(); }
  ComplexVector vector(Eigen::Index i) const { return eigenvectors.col(i); }
  double gap(Eigen::Index i = 1) const { return eigenvalues.at(i) - eigenvalues.at(i - 1); }

  /// Sum_i value_i |v_i><v_i| in this eigenbasis.
  HermitianOperator assemble(const std::vector<double>& values) const;
};

SpectralDecomposition eigendecompose(const HermitianOperator& h);

/// Spectral norm, max_i |E_i|.
double operator_norm(const HermitianOperator& h);

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and standard deviation of `h` in the normalized state `psi`.
/// The spread is ||(H - mean) psi||, free of the <H^2> - <H>^2 cancellation.
Moments expectation_and_std(const HermitianOperator& h, const ComplexVector& psi);

/// Same as expectation_and_std but skips the normalization contract; used by
/// the integrator, which monitors norm drift separately.
Moments moments_unchecked(const HermitianOperator& h, const ComplexVector& psi);

/// Returns e^{i phi} v such that the largest-magnitude entry (lowest index on
/// ties) is real and nonnegative. Idempotent.
ComplexVector fix_phase(const ComplexVector& v);

/// Throws ContractError unless | ||psi|| - 1 | <= kStateNormTolerance.
void require_state(const ComplexVector& psi, const char* context);

/// Index of the largest-magnitude entry, lowest index on ties.
Eigen::Index leading_index(const ComplexVector& v);

}  // namespace qalab
