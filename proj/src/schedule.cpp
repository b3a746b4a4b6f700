#include "qalab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qalab/errors.hpp"

namespace qalab {

namespace {

void check_s(double s, const char* who) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ContractError(std::string(who) + ": s = " + std::to_string(s) + " outside [0, 1]");
  }
}

struct OptimalShape {
  double ratio;  // sqrt(x / (1 - x))
  double angle;  // atan(sqrt((1 - x) / x))
};

OptimalShape optimal_shape(int qubits) {
  const double x = std::ldexp(1.0, -qubits);
  return {std::sqrt(x / (1.0 - x)), std::atan(std::sqrt((1.0 - x) / x))};
}

}  // namespace

Schedule Schedule::linear() { return Schedule{}; }

Schedule Schedule::grover_optimal(int qubits) {
  if (qubits < 2) throw ContractError("Schedule::grover_optimal: L must be >= 2");
  Schedule s;
  s.kind_ = Kind::grover_optimal;
  s.qubits_ = qubits;
  return s;
}

Schedule Schedule::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ContractError("Schedule::tabulated: need at least two knots");
  if (knots.front() != std::pair{0.0, 0.0} || knots.back() != std::pair{1.0, 1.0}) {
    throw ContractError("Schedule::tabulated: knots must start at (0,0) and end at (1,1)");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) {
      throw ContractError("Schedule::tabulated: knot s values must be strictly increasing");
    }
    if (knots[i].second < knots[i - 1].second) {
      throw ContractError("Schedule::tabulated: knot f values must be nondecreasing");
    }
  }
  Schedule s;
  s.kind_ = Kind::tabulated;
  s.knots_ = std::move(knots);
  return s;
}

double Schedule::value(double s) const {
  check_s(s, "Schedule::value");
  switch (kind_) {
    case Kind::linear:
      return s;
    case Kind::grover_optimal: {
      if (s == 0.0) return 0.0;
      if (s == 1.0) return 1.0;
      const auto [ratio, angle] = optimal_shape(qubits_);
      const double f = 0.5 + 0.5 * ratio * std::tan((2.0 * s - 1.0) * angle);
      return std::clamp(f, 0.0, 1.0);
    }
    case Kind::tabulated: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                                 [](double v, const auto& k) { return v < k.first; });
      if (it == knots_.end()) return knots_.back().second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (s - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return s;
}

double Schedule::derivative(double s) const {
  check_s(s, "Schedule::derivative");
  switch (kind_) {
    case Kind::linear:
      return 1.0;
    case Kind::grover_optimal: {
      const auto [ratio, angle] = optimal_shape(qubits_);
      const double c = std::cos((2.0 * s - 1.0) * angle);
      return ratio * angle / (c * c);
    }
    case Kind::tabulated: {
      // Right-sided slope; the last segment covers s = 1.
      auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                                 [](double v, const auto& k) { return v < k.first; });
      if (it == knots_.end()) it = knots_.end() - 1;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      return (hi.second - lo.second) / (hi.first - lo.first);
    }
  }
  return 1.0;
}

std::string Schedule::name() const {
  switch (kind_) {
    case Kind::linear:
      return "linear";
    case Kind::grover_optimal:
      return "grover-optimal";
    case Kind::tabulated:
      return "tabulated";
  }
  return "linear";
}

double schedule_value(const Schedule& schedule, double s) { return schedule.value(s); }

Schedule parse_schedule(const std::string& name, int qubits) {
  if (name == "linear") return Schedule::linear();
  if (name == "grover-optimal") return Schedule::grover_optimal(qubits);
  throw ContractError("unknown schedule '" + name + "' (expected linear or grover-optimal)");
}

}  // namespace qalab
