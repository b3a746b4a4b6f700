// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qalab/analysis.hpp"
#include "qalab/dynamics.hpp"
#include "qalab/models.hpp"
#include "qalab/parallel.hpp"

using namespace qalab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

AnnealModel grover(int L, PenaltyMode pen, double T = 20.0) {
  AnnealModel m;
  m.qubits = L;
  m.penalty = pen;
  m.total_time = T;
  return m;
}

AnnealModel pspin(int L, PenaltyMode pen, double T = 20.0) {
  AnnealModel m = grover(L, pen, T);
  m.family = Family::pspin;
  return m;
}

std::vector<int> range(int lo, int hi, int step = 1) {
  std::vector<int> out;
  for (int L = lo; L <= hi; L += step) out.push_back(L);
  return out;
}

double final_fidelity(const AnnealModel& m) { return run_point(m, {}).fidelity; }

// Min-T cost per L and its fit; unreached L values are listed in `missing`.
ScalingFit fit_min_costs(const std::vector<int>& sizes, const std::function<AnnealModel(int)>& make,
                         const std::vector<double>& grid, const std::vector<double>& refine, std::string& log) {
  const auto results = parallel_map<MinTimeResult>(
      sizes.size(), [&](std::size_t i) { return min_annealing_time(make(sizes[i]), grid, 0.5, {}, refine); });
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (results[i].found) {
      pts.emplace_back(sizes[i], results[i].cost);
      log += " L" + std::to_string(sizes[i]) + ":T" + num(results[i].total_time) + "/Q" + num(results[i].cost, 4);
    } else {
      log += " L" + std::to_string(sizes[i]) + ":unreached";
    }
  }
  if (pts.size() < 2) return {};
  return scaling_fit(pts);
}

// ---------------------------------------------------------------------------

Outcome penalized_grover_gap() {
  double worst = 0.0;
  for (int L : range(2, 14)) {
    const ModelEvaluator eval(grover(L, PenaltyMode::pinned));
    for (double s : unit_grid(1000)) worst = std::max(worst, std::abs(eigendecompose(eval.total_hamiltonian(s)).gap() - 1.0));
  }
  return {worst <= 1e-12, "max |gap - 1| = " + num(worst) + " over L=2..14, 1000 s-points"};
}

Outcome bare_grover_min_gap() {
  double worst = 0.0;
  for (int L : range(2, 14)) {
    const double want = std::exp2(-0.5 * L);
    const double gap = eigendecompose(grover_hamiltonian(L, 0.5, PenaltyMode::none)).gap();
    worst = std::max({worst, std::abs(gap - want), std::abs(grover_angles(L, 0.5).gap - want)});
  }
  return {worst <= 1e-12, "max |Delta_QA(1/2) - 2^(-L/2)| = " + num(worst)};
}

Outcome transition_closed_form() {
  const double T = 20.0, h = 1e-7;
  double worst_rel = 0.0, worst_peak = 0.0;
  for (int L : range(2, 14)) {
    for (int i = 0; i < 100; ++i) {
      const double s = (i + 0.5) / 100.0;
      const auto a = grover_eigen(L, s - h);
      const auto b = grover_eigen(L, s + h);
      const auto c = grover_eigen(L, s);
      const double fd = std::abs(c.excited.dot((b.ground - a.ground) / (2.0 * h))) / T;
      const double closed = grover_nonadiabatic_coupling(L, s, T);
      worst_rel = std::max(worst_rel, std::abs(fd - closed) / closed);
    }
    const double peak_want = std::sqrt(std::exp2(L) - 1.0) / T;
    const auto peak = transition_matrix_peak(grover(L, PenaltyMode::pinned, T), unit_grid(201));
    worst_peak = std::max({worst_peak, std::abs(peak.value - peak_want) / peak_want,
                           std::abs(grover_nonadiabatic_coupling(L, 0.5, T) - peak_want) / peak_want,
                           std::abs(peak.s - 0.5)});
  }
  return {worst_rel < 1e-5 && worst_peak < 1e-10,
          "max rel err vs finite difference = " + num(worst_rel) + ", peak deviation = " + num(worst_peak)};
}

Outcome fidelity_ordering() {
  const auto sizes = range(4, 14);
  std::vector<double> bare, pen;
  for (int L : sizes) {
    bare.push_back(final_fidelity(grover(L, PenaltyMode::none)));
    pen.push_back(final_fidelity(grover(L, PenaltyMode::pinned)));
  }
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    pass = pass && pen[i] > bare[i];
    if (i > 0) pass = pass && pen[i] < pen[i - 1] && bare[i] < bare[i - 1];
    detail += " L" + std::to_string(sizes[i]) + ":" + num(bare[i], 3) + "/" + num(pen[i], 3);
  }
  return {pass, "F_bare/F_pen at T=20" + detail};
}

Outcome grover_scaling() {
  std::string log_bare, log_pen;
  const auto sizes = range(4, 12);
  const auto bare = fit_min_costs(
      sizes, [](int L) { return grover(L, PenaltyMode::none); }, arithmetic_grid(100.0, 60), {10.0, 1.0}, log_bare);
  const auto pen = fit_min_costs(
      sizes, [](int L) { return grover(L, PenaltyMode::pinned); }, arithmetic_grid(10.0, 20), {1.0}, log_pen);
  const bool pass = bare.points.size() == sizes.size() && pen.points.size() == sizes.size() && bare.beta >= 0.9 &&
                    bare.beta <= 1.1 && pen.beta >= 0.37 && pen.beta <= 0.57;
  return {pass, "beta_bare = " + num(bare.beta, 4) + " in [0.9, 1.1], beta_pen = " + num(pen.beta, 4) +
                    " in [0.37, 0.57]; bare" + log_bare + "; pen" + log_pen};
}

Outcome pspin_gap() {
  double worst = 0.0;
  for (int L : range(8, 40)) {
    const ModelEvaluator eval(pspin(L, PenaltyMode::pinned));
    for (double s : unit_grid(101)) worst = std::max(worst, std::abs(eigendecompose(eval.total_hamiltonian(s)).gap() - 2.0));
  }
  const ModelEvaluator bare(pspin(40, PenaltyMode::none));
  double best_s = 0.0, best_gap = 1e300;
  for (int i = 0; i <= 2000; ++i) {
    const double s = 0.40 + 1e-4 * i;
    const double g = bare.qa_spectrum(s).gap();
    if (g < best_gap) best_gap = g, best_s = s;
  }
  return {worst <= 1e-9 && std::abs(best_s - 0.463) <= 0.005,
          "max |gap - 2| = " + num(worst) + " over L=8..40; L=40 bare min gap " + num(best_gap) + " at s = " +
              num(best_s)};
}

Outcome pspin_scaling() {
  std::string log_bare, log_pen;
  const auto sizes = range(8, 20, 2);
  const auto pen = fit_min_costs(
      sizes, [](int L) { return pspin(L, PenaltyMode::pinned); }, arithmetic_grid(10.0, 20), {1.0}, log_pen);
  const auto bare = fit_min_costs(
      sizes, [](int L) { return pspin(L, PenaltyMode::none); }, arithmetic_grid(100.0, 20), {10.0, 1.0}, log_bare);
  const bool pass = bare.points.size() == sizes.size() && pen.points.size() == sizes.size() && bare.beta >= 0.45 &&
                    bare.beta <= 0.61 && pen.beta >= 0.19 && pen.beta <= 0.34;
  return {pass, "beta_bare = " + num(bare.beta, 4) + " in [0.45, 0.61], beta_pen = " + num(pen.beta, 4) +
                    " in [0.19, 0.34]; bare" + log_bare + "; pen" + log_pen};
}

Outcome optimized_schedule() {
  bool endpoints = true;
  for (int L : range(2, 30)) {
    const auto sch = Schedule::grover_optimal(L);
    endpoints = endpoints && sch.value(0.0) == 0.0 && sch.value(1.0) == 1.0 && sch.value(0.5) == 0.5;
  }
  double lo = 1.0, hi = 0.0;
  std::string detail;
  for (int L : range(4, 14)) {
    AnnealModel m = grover(L, PenaltyMode::pinned);
    m.schedule = Schedule::grover_optimal(L);
    const double f = final_fidelity(m);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    detail += " " + num(f, 4);
  }
  const double lin4 = final_fidelity(grover(4, PenaltyMode::pinned));
  const double lin14 = final_fidelity(grover(14, PenaltyMode::pinned));
  const bool decays = lin4 - lin14 > 0.5;
  return {endpoints && hi - lo < 0.05 && decays,
          "optimal-schedule F spread = " + num(hi - lo, 4) + " (<0.05) [" + detail + " ]; linear F(L=4) = " +
              num(lin4, 4) + ", F(L=14) = " + num(lin14, 4)};
}

Outcome rescaling() {
  double worst_overlap = 1.0, worst_ratio = 0.0;
  for (const auto& m : {grover(6, PenaltyMode::none, 100.0), pspin(8, PenaltyMode::none, 50.0)}) {
    for (double k : {2.0, 4.0, 10.0}) {
      const auto r = rescaling_check(m, k, recommended_steps(m));
      worst_overlap = std::min(worst_overlap, r.state_fidelity);
      worst_ratio = std::max(worst_ratio, std::abs(r.cost_ratio - 1.0));
    }
  }
  return {worst_overlap >= 1.0 - 1e-8 && worst_ratio <= 1e-6,
          "min overlap = " + num(worst_overlap, 12) + ", max |cost ratio - 1| = " + num(worst_ratio)};
}

Outcome penalty_norm_bound() {
  double worst = -1e300;
  int checked = 0;
  auto sweep = [&](const AnnealModel& m) {
    const ModelEvaluator eval(m);
    const double at_zero = operator_norm(eval.qa_hamiltonian(0.0));
    for (int i = 0; i < 100; ++i) {
      const double s = (i + 0.5) / 100.0;
      const auto qa = eval.qa_hamiltonian(s);
      const auto pen = penalty_term(qa, eval.initial_spectrum(), PenaltyMode::pinned);
      worst = std::max(worst, operator_norm(pen) - at_zero - operator_norm(qa));
      ++checked;
    }
  };
  for (int L : range(2, 14)) sweep(grover(L, PenaltyMode::none));
  for (int L : range(8, 40)) sweep(pspin(L, PenaltyMode::none));
  return {worst <= 1e-12, "max(||H_pena|| - ||H_QA(0)|| - ||H_QA(s)||) = " + num(worst) + " over " +
                              std::to_string(checked) + " samples"};
}

Outcome two_level_sigma() {
  double worst = 0.0;
  for (int L : {4, 10, 14}) {
    for (double s : {0.1, 0.5, 0.9}) {
      const auto H = grover_hamiltonian(L, s, PenaltyMode::pinned);
      const auto spec = eigendecompose(H);
      for (int i = 0; i <= 20; ++i) {
        const double F = i / 20.0;
        const ComplexVector psi = std::sqrt(F) * spec.vector(0) + std::polar(std::sqrt(1.0 - F), 1.1 * i) * spec.vector(1);
        worst = std::max(worst, std::abs(expectation_and_std(H, psi).std - two_level_std(F)));
      }
    }
  }
  const auto rows = cost_fidelity_sweep(grover(10, PenaltyMode::pinned), arithmetic_grid(10.0, 20));
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.ok) pts.emplace_back(r.total_time, r.fidelity);
  const auto fit = fidelity_asymptote_fit(asymptotic_points(pts));
  const bool a1_ok = fit.a1 > 0.0 && std::abs(fit.a1 - 4.31) <= 0.5 * 4.31;
  return {worst <= 1e-8 && a1_ok, "max |sigma - sqrt(F(1-F))| = " + num(worst) + "; a1 = " + num(fit.a1, 4) +
                                      " (4.31 +- 50%), a2 = " + num(fit.a2, 4) + " from " +
                                      std::to_string(fit.points.size()) + " points with 1-F <= 0.3"};
}

Outcome nonstoquastic_baseline() {
  const auto sizes = range(8, 24, 2);
  const auto grid = unit_grid(1001);
  auto fit_peaks = [&](const std::function<AnnealModel(int)>& make) {
    std::vector<std::pair<double, double>> pts;
    for (int L : sizes) pts.emplace_back(L, transition_matrix_max(make(L), grid));
    return scaling_fit(pts);
  };
  const auto pen = fit_peaks([](int L) { return pspin(L, PenaltyMode::pinned); });
  const auto bare = fit_peaks([](int L) { return pspin(L, PenaltyMode::none); });
  const auto ns = fit_peaks([](int L) {
    AnnealModel m = pspin(L, PenaltyMode::none);
    m.family = Family::pspin_nonstoquastic;
    return m;
  });
  return {ns.beta < 0.1 && 0.1 < pen.beta, "beta_nonstoq = " + num(ns.beta, 4) + " < 0.1 < beta_pen = " +
                                               num(pen.beta, 4) + " (bare stoquastic " + num(bare.beta, 4) + ")"};
}

Outcome magnetization_step() {
  const double m1 = magnetization(30, 1.0), m0 = magnetization(30, 0.0);
  const double a = magnetization(30, 0.45), b = magnetization(30, 0.55);
  return {m1 == 1.0 && std::abs(m0) <= 1e-12 && a < 0.1 && b > 0.9,
          "L=30: m(0) = " + num(m0) + ", m(0.45) = " + num(a) + ", m(0.55) = " + num(b) + ", m(1) = " + num(m1)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 penalized Grover gap constancy", penalized_grover_gap},
      {"2 bare Grover minimum gap", bare_grover_min_gap},
      {"3 transition-matrix closed form", transition_closed_form},
      {"4 fidelity ordering at T=20", fidelity_ordering},
      {"5 Grover cost-scaling fits", grover_scaling},
      {"6 p-spin penalized gap and bare gap minimum", pspin_gap},
      {"7 p-spin cost-scaling fits", pspin_scaling},
      {"8 optimized schedule", optimized_schedule},
      {"9 rescaling invariance", rescaling},
      {"10 penalty norm bound", penalty_norm_bound},
      {"11 two-level sigma identity and asymptote fit", two_level_sigma},
      {"12 non-stoquastic baseline ordering", nonstoquastic_baseline},
      {"13 magnetization step", magnetization_step},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
