#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qalab {

/// Monotone interpolation weight f: [0,1] -> [0,1] with f(0) = 0, f(1) = 1.
class Schedule {
 public:
  enum class Kind { linear, grover_optimal, tabulated };

  /// f(s) = s.
  static Schedule linear();

  /// Schedule that keeps the local adiabatic condition of the penalized
  /// Grover model constant:
  ///   f(s) = 1/2 + 1/2 sqrt(x/(1-x)) tan[(2s-1) atan sqrt((1-x)/x)],  x = 2^-L.
  static Schedule grover_optimal(int qubits);

  /// Piecewise-linear through (s_k, f_k). Knots must start at (0,0), end at
  /// (1,1), have strictly increasing s and nondecreasing f.
  static Schedule tabulated(std::vector<std::pair<double, double>> knots);

  Kind kind() const noexcept { return kind_; }
  int qubits() const noexcept { return qubits_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
  bool is_linear() const noexcept { return kind_ == Kind::linear; }

  double value(double s) const;
  double derivative(double s) const;

  /// "linear", "grover-optimal" or "tabulated".
  std::string name() const;

 private:
  Schedule() = default;

  Kind kind_ = Kind::linear;
  int qubits_ = 0;
  std::vector<std::pair<double, double>> knots_;
};

/// f(s) for the given schedule. Throws ContractError for s outside [0,1].
double schedule_value(const Schedule& schedule, double s);

Schedule parse_schedule(const std::string& name, int qubits);

}  // namespace qalab
