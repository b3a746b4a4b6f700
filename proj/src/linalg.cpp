#include "qalab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qalab/errors.hpp"

namespace qalab {

namespace {

constexpr double kHermiticityTolerance = 1e-12;
constexpr double kDegeneracyTolerance = 1e-10;

// Eigen's QL iteration gives up after this many sweeps per dimension.
constexpr int kEigenSweepsPerDim = 30;

void check_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ContractError("HermitianOperator: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() < 1) throw ContractError("HermitianOperator: dimension must be >= 1");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!std::isfinite(deviation) || deviation > kHermiticityTolerance * scale) {
    throw ContractError("HermitianOperator: max |H - H^dagger| = " + std::to_string(deviation) +
                        " exceeds Hermiticity tolerance");
  }
}

bool all_real(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
  check_hermitian(entries_);
  // Symmetrize so downstream solvers see an exactly Hermitian matrix.
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
  real_ = all_real(entries_);
}

HermitianOperator::HermitianOperator(const RealMatrix& entries)
    : HermitianOperator(ComplexMatrix(entries.cast<Complex>())) {}

HermitianOperator::HermitianOperator(ComplexMatrix entries, Unchecked)
    : entries_(std::move(entries)), real_(all_real(entries_)) {}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  if (dim < 1) throw ContractError("HermitianOperator::zero: dimension must be >= 1");
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  if (dim < 1) throw ContractError("HermitianOperator::identity: dimension must be >= 1");
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& values) {
  if (values.empty()) throw ContractError("HermitianOperator::diagonal: empty diagonal");
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianOperator(std::move(m), Unchecked{});
}

ComplexVector HermitianOperator::apply(const ComplexVector& v) const {
  if (v.size() != dim()) {
    throw ContractError("HermitianOperator::apply: vector dimension " + std::to_string(v.size()) +
                        " != operator dimension " + std::to_string(dim()));
  }
  return entries_ * v;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& rhs) const {
  if (rhs.dim() != dim()) throw ContractError("HermitianOperator::operator+: dimension mismatch");
  return HermitianOperator(entries_ + rhs.entries_, Unchecked{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& rhs) const {
  if (rhs.dim() != dim()) throw ContractError("HermitianOperator::operator-: dimension mismatch");
  return HermitianOperator(entries_ - rhs.entries_, Unchecked{});
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(entries_ * factor, Unchecked{});
}

HermitianOperator SpectralDecomposition::assemble(const std::vector<double>& values) const {
  if (static_cast<Eigen::Index>(values.size()) != eigenvectors.cols()) {
    throw ContractError("SpectralDecomposition::assemble: expected " +
                        std::to_string(eigenvectors.cols()) + " coefficients, got " +
                        std::to_string(values.size()));
  }
  Eigen::VectorXd coeffs = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  ComplexMatrix m = eigenvectors * coeffs.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  return HermitianOperator(std::move(m));
}

Eigen::Index leading_index(const ComplexVector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

ComplexVector fix_phase(const ComplexVector& v) {
  if (v.size() == 0) throw ContractError("fix_phase: empty vector");
  const Eigen::Index lead = leading_index(v);
  const double mag = std::abs(v(lead));
  if (mag == 0.0) throw ContractError("fix_phase: zero vector has no phase");
  ComplexVector out = v * (std::conj(v(lead)) / mag);
  out(lead) = Complex(std::abs(out(lead)), 0.0);
  return out;
}

SpectralDecomposition eigendecompose(const HermitianOperator& h) {
  const Eigen::Index n = h.dim();
  SpectralDecomposition result;
  Eigen::VectorXd values;
  ComplexMatrix vectors;

  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.matrix().real());
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigendecompose: QL iteration did not converge within " +
                           std::to_string(kEigenSweepsPerDim * n) + " iterations (dim " +
                           std::to_string(n) + ")");
    }
    values = solver.eigenvalues();
    vectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigendecompose: QL iteration did not converge within " +
                           std::to_string(kEigenSweepsPerDim * n) + " iterations (dim " +
                           std::to_string(n) + ")");
    }
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  for (Eigen::Index j = 0; j < n; ++j) vectors.col(j) = fix_phase(vectors.col(j));

  // Eigen returns ascending values; inside a degenerate cluster reorder by
  // the position of each vector's leading entry so the order is reproducible.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double norm = std::max(std::abs(values(0)), std::abs(values(n - 1)));
  const double cluster_tol = kDegeneracyTolerance * norm;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values(stop) - values(stop - 1) <= cluster_tol) ++stop;
    if (stop - start > 1) {
      std::stable_sort(order.begin() + start, order.begin() + stop,
                       [&](Eigen::Index a, Eigen::Index b) {
                         return leading_index(vectors.col(a)) < leading_index(vectors.col(b));
                       });
    }
    start = stop;
  }

  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.eigenvalues[j] = values(order[j]);
    result.eigenvectors.col(j) = vectors.col(order[j]);
  }
  return result;
}

double operator_norm(const HermitianOperator& h) {
  const auto spec = eigendecompose(h);
  return std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
}

void require_state(const ComplexVector& psi, const char* context) {
  const double n = psi.norm();
  if (!(std::abs(n - 1.0) <= kStateNormTolerance)) {
    throw ContractError(std::string(context) + ": state norm " + std::to_string(n) +
                        " is not 1 within tolerance");
  }
}

Moments moments_unchecked(const HermitianOperator& h, const ComplexVector& psi) {
  if (psi.size() != h.dim()) {
    throw ContractError("expectation_and_std: state dimension " + std::to_string(psi.size()) +
                        " != operator dimension " + std::to_string(h.dim()));
  }
  const ComplexVector hpsi = h.matrix() * psi;
  const double mean = psi.dot(hpsi).real();
  // ||(H - mean) psi||^2 avoids the cancellation in <H^2> - <H>^2.
  return {mean, (hpsi - mean * psi).norm()};
}

Moments expectation_and_std(const HermitianOperator& h, const ComplexVector& psi) {
  require_state(psi, "expectation_and_std");
  return moments_unchecked(h, psi);
}

}  // namespace qalab
