#pragma once

// The acceptance suite: every release criterion as a standalone check with
// pinned tolerances, runnable from both the CLI ("squeezamp validate") and
// the acceptance test binary. One criterion (5, the multi-squeeze phonon
// budget value) is a documented expected failure: the printed budget formula
// misses the displacement staged at three quarters of the first half, so the
// measured trajectory maximum is ~70.5 rather than the predicted 19.72. The
// check is implemented faithfully and reported honestly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "squeezamp/fock.hpp"
#include "squeezamp/gaussian.hpp"
#include "squeezamp/metrology.hpp"
#include "squeezamp/protocol.hpp"

namespace squeezamp::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool expected_fail = false;  // failing exactly as documented
  std::string detail;
};

namespace detail {
inline std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

inline double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
}  // namespace detail

inline ProtocolSpec point_p1() { return make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0); }
inline ProtocolSpec point_m1() { return make_msp(0.01, 1.0, 0.8, 1.0); }

// 1. Engine vs oracle final states at the standard points, auto truncation.
inline CriterionResult criterion_equivalence() {
  using detail::strf;
  CriterionResult r{1, "engine/oracle state equivalence (P1, M1)"};
  double fid[2], secs[2];
  int dims[2];
  const ProtocolSpec specs[2] = {point_p1(), point_m1()};
  for (int i = 0; i < 2; ++i) {
    const double t0 = detail::now_seconds();
    const CompositionResult eng = compose_protocol(specs[i]);
    const ProtocolRun run = run_protocol(specs[i], OracleConfig{});
    const SpinFockState pred = engine_predicted_state(eng.op, run.dim);
    fid[i] = fidelity(pred, run.state);
    secs[i] = detail::now_seconds() - t0;
    dims[i] = run.dim;
  }
  r.pass = fid[0] >= 1.0 - 1e-8 && fid[1] >= 1.0 - 1e-8 && secs[0] < 10.0 && secs[1] < 10.0;
  r.detail = strf("P1: 1-fid=%.2e (dim %d, %.2fs); M1: 1-fid=%.2e (dim %d, %.2fs); need <=1e-8, <10s",
                  1.0 - fid[0], dims[0], secs[0], 1.0 - fid[1], dims[1], secs[1]);
  return r;
}

// 2. Single-squeeze signal phase and measured population at P1.
inline CriterionResult criterion_phase_population() {
  using detail::strf;
  CriterionResult r{2, "single-squeeze phase and population (P1)"};
  const double phase = std::abs(compose_protocol(point_p1()).signal_phase);
  const double pop = spin_down_population(run_protocol(point_p1(), OracleConfig{}).state);
  const bool ok_phase = std::abs(phase - 0.1149251) <= 1e-6;
  const bool ok_pop = std::abs(pop - 0.9967016) <= 1e-5;
  r.pass = ok_phase && ok_pop;
  r.detail = strf("|phase|=%.9f vs 0.1149251 +-1e-6; P=%.9f vs 0.9967016 +-1e-5", phase, pop);
  return r;
}

// 3. Finite-difference sensitivity vs the closed forms at P1 and M1.
inline CriterionResult criterion_fd_sensitivity() {
  using detail::strf;
  CriterionResult r{3, "finite-difference vs closed-form sensitivity"};
  const double fd1 = fd_sensitivity(point_p1(), OracleConfig{});
  const double fd2 = fd_sensitivity(point_m1(), OracleConfig{});
  const double rel1 = std::abs(fd1 - 0.0870135) / 0.0870135;
  const double rel2 = std::abs(fd2 - 0.0253575) / 0.0253575;
  const double cf1 = sens_single(1.0, 0.5, 4.0);
  const double cf2 = msp_sens(1.0, 0.8, 8.0);
  const double relc1 = std::abs(fd1 - cf1) / cf1;
  const double relc2 = std::abs(fd2 - cf2) / cf2;
  r.pass = rel1 <= 1e-3 && rel2 <= 1e-3 && relc1 <= 1e-3 && relc2 <= 1e-3;
  r.detail = strf("fd(P1)=%.9f (target 0.0870135, rel %.1e); fd(M1)=%.9f (target 0.0253575, rel %.1e)",
                  fd1, rel1, fd2, rel2);
  return r;
}

// 4. Entanglement-only limit of the single-squeeze sensitivity.
inline CriterionResult criterion_limit() {
  using detail::strf;
  CriterionResult r{4, "entanglement-only limit"};
  const double v = sens_single(1.0, 1e-8, 4.0);
  const double rel = std::abs(v - 0.125) / 0.125;
  r.pass = rel <= 1e-6;
  r.detail = strf("sens_single(1, 1e-8, 4)=%.12f vs 0.125, rel %.1e (need <=1e-6)", v, rel);
  return r;
}

// 5. Trajectory phonon budgets and peak locations.
inline CriterionResult criterion_phonon_budget() {
  using detail::strf;
  CriterionResult r{5, "trajectory phonon budgets"};
  const int samples = 16;
  const TrajectoryPoint tp = trajectory_max_phonon(point_p1(), samples, OracleConfig{});
  const TrajectoryPoint tm = trajectory_max_phonon(point_m1(), samples, OracleConfig{});
  const double dt_p1 = 2.0 / samples, dt_m1 = 1.0 / samples;
  const bool p1_value = std::abs(tp.value - 13.1925) <= 0.02 * 13.1925;
  const bool p1_loc = std::abs(tp.time - 2.0) <= dt_p1 + 1e-9;
  const bool m1_value = std::abs(tm.value - 19.7183) <= 0.02 * 19.7183;
  const bool m1_loc = std::abs(tm.time - 3.0) <= dt_m1 + 1e-9 || std::abs(tm.time - 4.0) <= dt_m1 + 1e-9;
  r.pass = p1_value && p1_loc && m1_value && m1_loc;
  // The only tolerated failure: M1 value near the true trajectory peak ~70.5
  // while everything else holds.
  const double engine_true = engine_max_phonon(point_m1(), 32).value;
  r.expected_fail = !r.pass && p1_value && p1_loc && m1_loc && !m1_value &&
                    std::abs(tm.value - engine_true) <= 0.02 * engine_true;
  r.detail = strf("P1 max=%.4f@t=%.3f (predicted 13.1925@2, +-2%%); "
                  "M1 max=%.4f@t=%.3f vs budget formula 19.7183@{3,4} -- true closed-form peak %.4f",
                  tp.value, tp.time, tm.value, tm.time, engine_true);
  return r;
}

// 6. Single-squeeze never beats the SQL on the 20x20 grid.
inline CriterionResult criterion_single_sql() {
  using detail::strf;
  CriterionResult r{6, "single-squeeze stays above the SQL"};
  const double t0 = detail::now_seconds();
  std::vector<double> gs, Ts;
  for (int i = 0; i < 20; ++i) gs.push_back(0.05 + (2.0 - 0.05) * i / 19.0);
  for (int i = 0; i < 20; ++i) Ts.push_back(0.5 + (10.0 - 0.5) * i / 19.0);
  const auto rows = sweep(ProtocolKind::single_squeeze, 1.0, 0.01, gs, Ts);
  double worst = 1e300;
  for (const auto& row : rows) worst = std::min(worst, row.delta_beta * std::sqrt(row.n_bar));
  const double secs = detail::now_seconds() - t0;
  r.pass = worst > 1.0 && secs < 5.0;
  r.detail = strf("min delta_beta*sqrt(n) over 400 points = %.9f (> 1 required), %.2fs", worst, secs);
  return r;
}

// 7. Multi-squeeze sub-SQL product r_m/sinh(r_m) < 1 and its M1 value.
inline CriterionResult criterion_msp_sub_sql() {
  using detail::strf;
  CriterionResult r{7, "multi-squeeze sub-SQL product"};
  bool ok = true;
  double worst_dev = 0.0;
  for (int i = 1; i <= 120; ++i) {
    const double rm = 6.0 * i / 120.0;
    const double g = 2.0, alpha = 1.0, T = 8.0 * rm / g;  // g <= 4 alpha
    const double prod = msp_sens(alpha, g, T) * T * std::sqrt(msp_nbar(0.0, alpha, g, T));
    const double ref = rm / std::sinh(rm);
    worst_dev = std::max(worst_dev, std::abs(prod - ref));
    ok = ok && prod < 1.0 && std::abs(prod - ref) <= 1e-12;
  }
  const double prod_m1 =
      msp_sens(1.0, 0.8, 8.0) * 8.0 * std::sqrt(msp_nbar(0.01, 1.0, 0.8, 8.0));
  ok = ok && std::abs(prod_m1 - 0.900793) <= 1e-3;
  r.pass = ok;
  r.detail = strf("identity deviation <= %.1e over r_m in (0,6]; value at M1 = %.6f vs 0.900793 +-1e-3",
                  worst_dev, prod_m1);
  return r;
}

namespace detail {
// Displacement sensitivity at fixed n_bar for squeezing ratio rho = g/alpha.
inline double msp_delta_beta_fixed_nbar(double n_bar, double rho) {
  const double root = std::sqrt(n_bar);
  if (rho <= 4.0) {
    const double rm = std::asinh(rho * root / 4.0);
    return rm / (std::sinh(rm) * root);
  }
  const double rm = std::asinh(root);
  return (rho / 4.0) * rm / (std::sinh(rm) * root);
}
}  // namespace detail

// 8. At fixed n_bar, the sensitivity is optimal at g = 4 alpha.
inline CriterionResult criterion_optimal_g() {
  using detail::strf;
  CriterionResult r{8, "optimal squeezing strength g = 4 alpha"};
  const double ratios[] = {2.0, 3.0, 4.0, 6.0, 8.0};
  bool ok = true;
  std::string vals;
  for (double nb : {1e2, 1e3}) {
    double best = 1e300, best_rho = 0.0;
    for (double rho : ratios) {
      const double db = detail::msp_delta_beta_fixed_nbar(nb, rho);
      if (db < best) { best = db; best_rho = rho; }
    }
    ok = ok && best_rho == 4.0;
    vals += strf("n=%g -> argmin g/alpha = %g; ", nb, best_rho);
  }
  r.pass = ok;
  r.detail = vals + "(4 required)";
  return r;
}

// 9. Gain at g = 4 alpha and n_bar = 1e3.
inline CriterionResult criterion_gain() {
  using detail::strf;
  CriterionResult r{9, "gain at g = 4 alpha, n = 1e3"};
  const double rm = std::asinh(std::sqrt(1000.0));
  const double gain = gains_db(1.0, 4.0, 2.0 * rm);  // r_m = gT/8 = T/2
  r.pass = std::abs(gain - 8.82) <= 0.05 && gain > 8.0;
  r.detail = strf("gain = %.4f dB vs 8.82 +-0.05, must exceed 8", gain);
  return r;
}

// 10. Successive-evolution bound: the 6 dB asymptote and the Fisher
// information inequality over random pure states.
inline CriterionResult criterion_successive_bound() {
  using detail::strf;
  CriterionResult r{10, "successive-evolution 6 dB bound"};
  const double gain = successive_bound_gain(1e6);
  const bool ok_gain = std::abs(gain - 6.022) <= 0.01;
  std::mt19937_64 rng(0x5eedfaceULL);
  std::normal_distribution<double> dist;
  const int dim = 40;
  double worst_margin = -1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    SpinFockState s;
    s.dim = dim;
    s.up = Vector(dim);
    s.down = Vector(dim);
    for (int n = 0; n < dim; ++n) {
      s.up(n) = complexd(dist(rng), dist(rng));
      s.down(n) = complexd(dist(rng), dist(rng));
    }
    const double nrm = s.norm();
    s.up /= nrm;
    s.down /= nrm;
    const double margin = qfi_pure(s) - (16.0 * mean_phonon(s) + 8.0);
    worst_margin = std::max(worst_margin, margin);
  }
  const bool ok_bound = worst_margin <= 1e-9;
  r.pass = ok_gain && ok_bound;
  r.detail = strf("bound gain(1e6)=%.4f dB vs 6.022 +-0.01; worst F-(16n+8) over 1000 states = %.2e",
                  gain, worst_margin);
  return r;
}

// 11. Fisher information oracle: Fock ladder exactly, squeezed vacuum to 1e-4.
inline CriterionResult criterion_qfi_oracle() {
  using detail::strf;
  CriterionResult r{11, "Fisher information oracle"};
  double worst_fock = 0.0;
  {
    const int dim = 64;
    for (int N = 0; N <= 10; ++N) {
      Vector psi = Vector::Zero(dim);
      psi(N) = 1.0;
      worst_fock = std::max(worst_fock, std::abs(qfi_pure(psi) - (8.0 * N + 4.0)));
    }
  }
  double rel_sq;
  {
    const int dim = 160;
    Vector vac = Vector::Zero(dim);
    vac(0) = 1.0;
    const Vector sq = squeeze_matrix(dim, 1.0) * vac;
    const double expect = 4.0 * std::exp(2.0);
    rel_sq = std::abs(qfi_pure(sq) - expect) / expect;
  }
  r.pass = worst_fock <= 1e-8 && rel_sq <= 1e-4;
  r.detail = strf("max |F(|N>)-(8N+4)| = %.2e (<=1e-8); squeezed r=1 rel err %.2e (<=1e-4)",
                  worst_fock, rel_sq);
  return r;
}

// 12. First-order Trotter convergence: error halves per step doubling.
inline CriterionResult criterion_trotter_order() {
  using detail::strf;
  CriterionResult r{12, "Trotter convergence order"};
  const SegmentSpec seg = point_p1().segments.front();
  OracleConfig cfg;
  cfg.dim = 160;
  const SpinFockState init = SpinFockState::plus_vacuum(cfg.dim);
  const SpinFockState exact = evolve_exact(init, seg, cfg);
  double err[3];
  const int steps[3] = {256, 512, 1024};
  for (int i = 0; i < 3; ++i) {
    const SpinFockState t = evolve_trotter(init, seg, steps[i], cfg);
    err[i] = std::sqrt((exact.up - t.up).squaredNorm() + (exact.down - t.down).squaredNorm());
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  r.pass = r1 >= 1.8 && r1 <= 2.2 && r2 >= 1.8 && r2 <= 2.2;
  r.detail = strf("errors %.3e / %.3e / %.3e, ratios %.3f, %.3f (need 2.0 +-0.2)",
                  err[0], err[1], err[2], r1, r2);
  return r;
}

// 13. The multi-squeeze scaling exponent beats the successive-evolution line.
inline CriterionResult criterion_hl_scaling() {
  using detail::strf;
  CriterionResult r{13, "HL scaling exceeds the successive bound"};
  std::vector<double> Ts;
  for (int i = 0; i <= 24; ++i) Ts.push_back(6.7 + (16.0 - 6.7) * i / 24.0);
  const auto rows = sweep(ProtocolKind::msp, 1.0, 0.01, {4.0}, Ts);
  bool ok = true;
  double worst = 1e300;
  int counted = 0;
  for (const auto& row : rows) {
    if (row.n_bar < 200.0 || !row.k) continue;
    ++counted;
    const double ref = 0.5 + std::log(4.0) / std::log(row.n_bar);
    worst = std::min(worst, *row.k - ref);
    ok = ok && *row.k > ref;
  }
  r.pass = ok && counted > 0;
  r.detail = strf("min k - (0.5 + ln4/ln n) = %.4f over %d grid points with n >= 200 (must be > 0)",
                  worst, counted);
  return r;
}

// 14. The composed phase matches the validated closed form and sits exactly a
// factor 2 above the discrepant first form.
inline CriterionResult criterion_discrepancy_guard() {
  using detail::strf;
  CriterionResult r{14, "documented phase-formula discrepancy guard"};
  const double eng = std::abs(compose_protocol(point_m1()).signal_phase);
  const double tform = msp_phase(0.01, 1.0, 0.8, 8.0);
  const double sh = std::sinh(0.8);
  const double first_form = 16.0 * 0.01 * 1.0 * sh * sh / (0.8 * 0.8);
  const double rel = std::abs(eng - tform) / tform;
  const double ratio = eng / first_form;
  r.pass = rel <= 1e-9 && std::abs(ratio - 2.0) <= 1e-6;
  r.detail = strf("engine phase %.12f vs closed form %.12f (rel %.1e); ratio to first form %.9f vs 2",
                  eng, tform, rel, ratio);
  return r;
}

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  double seconds = 0.0;

  int passed() const {
    int n = 0;
    for (const auto& r : results) n += r.pass ? 1 : 0;
    return n;
  }
  bool all_passed() const { return passed() == int(results.size()); }
  bool unexpected_failures() const {
    for (const auto& r : results)
      if (!r.pass && !r.expected_fail) return true;
    return false;
  }
};

inline AcceptanceReport run_acceptance() {
  const double t0 = detail::now_seconds();
  AcceptanceReport report;
  report.results = {
      criterion_equivalence(),     criterion_phase_population(), criterion_fd_sensitivity(),
      criterion_limit(),           criterion_phonon_budget(),    criterion_single_sql(),
      criterion_msp_sub_sql(),     criterion_optimal_g(),        criterion_gain(),
      criterion_successive_bound(), criterion_qfi_oracle(),      criterion_trotter_order(),
      criterion_hl_scaling(),      criterion_discrepancy_guard(),
  };
  report.seconds = detail::now_seconds() - t0;
  return report;
}

inline void print_report(std::ostream& os, const AcceptanceReport& report) {
  for (const auto& r : report.results) {
    const char* status = r.pass ? "PASS" : (r.expected_fail ? "FAIL*" : "FAIL");
    os << "[" << (r.id < 10 ? " " : "") << r.id << "] " << status << "  " << r.name << "\n"
       << "      " << r.detail << "\n";
  }
  os << "PASS " << report.passed() << "/" << report.results.size() << "\n";
  bool any_expected = false;
  for (const auto& r : report.results) any_expected |= (!r.pass && r.expected_fail);
  if (any_expected)
    os << "note: FAIL* marks the documented budget-formula defect; see README.\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "total runtime: %.1fs\n", report.seconds);
  os << buf;
}

}  // namespace squeezamp::validation
