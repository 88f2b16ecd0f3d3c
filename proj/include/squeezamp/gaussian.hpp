#pragma once

// Closed-form propagation of the spin-conditioned oscillator. Every segment
// evolves each spin branch as a phased displaced-squeezed operator
//   U_s = e^{i phase} D(disp) S(squeeze),   D(x) = exp(x a† - x* a),
//   S(z) = exp(z (a² - a†²)/2)  (z real, one fixed squeeze axis),
// and products are contracted exactly with the two composition rules
//   D(x) D(y)        = e^{i Im(x y*)} D(x + y)
//   S(z) D(y)        = D(cosh(z) y - sinh(z) y*) S(z)
// plus same-axis squeeze addition S(a) S(b) = S(a + b). Time evolution is
// U = e^{-iHt} throughout; the resulting sign map is pinned by the
// calibration tests against the exact Fock-space evolution.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "squeezamp/protocol.hpp"
#include "squeezamp/series.hpp"

namespace squeezamp {

using complexd = std::complex<double>;

/// Phase, displacement and squeeze for one spin branch, in the normal order
/// e^{i phase} D(disp) S(squeeze). Phases are kept unwrapped so that
/// derivatives and parameter sweeps see a continuous value.
struct BranchValues {
  double phase = 0.0;
  complexd disp{0.0, 0.0};
  double squeeze = 0.0;
};

/// The pair of branch operators for spin up (s = +1) and down (s = -1).
/// Default-constructed value is the identity.
struct BranchOperator {
  BranchValues up;
  BranchValues down;
};

struct CompositionResult {
  BranchOperator op;
  double signal_phase = 0.0;           // (phase_up - phase_down)/2
  double residual_entanglement = 0.0;  // max(|disp_up - disp_down|, |squeeze diff|)

  bool disentangling(double tol = 1e-10) const { return residual_entanglement <= tol; }
};

/// D(x) D(y) contraction: returns the accumulated phase Im(x y*) and x + y.
struct DisplaceComposition {
  double phase;
  complexd sum;
};
inline DisplaceComposition displace_compose(complexd x, complexd y) {
  return {std::imag(x * std::conj(y)), x + y};
}

/// S†(zeta) D(y) S(zeta) = D(cosh(zeta) y + sinh(zeta) y*) for the fixed axis
/// (axis angle 0 for zeta > 0, pi for zeta < 0).
inline complexd squeeze_adjoint_displace(double zeta, complexd y) {
  return std::cosh(zeta) * y + std::sinh(zeta) * std::conj(y);
}

namespace detail {
inline BranchValues branch_for(const SegmentSpec& seg, int s) {
  const double chi = seg.sdf_sign * s * seg.alpha;
  const double rate = seg.pd_sign * seg.g;  // signed PD rate
  const double x = rate * seg.duration;
  BranchValues b;
  b.disp = complexd(chi * seg.duration * expm1_over(x), -seg.eta * seg.duration * expm1_over(-x));
  b.squeeze = -x;
  b.phase = -2.0 * seg.eta * chi * seg.duration * seg.duration * sinh_rem(x);
  return b;
}
}  // namespace detail

/// Exact one-segment evolution operator in branch form.
inline BranchOperator closed_form_segment(const SegmentSpec& seg) {
  if (!(seg.duration > 0.0)) throw std::invalid_argument("segment duration must be > 0");
  return {detail::branch_for(seg, +1), detail::branch_for(seg, -1)};
}

namespace detail {
inline void accumulate(BranchValues& acc, const BranchValues& next) {
  // next * acc with acc = D(d) S(z): move acc's displacement through next's
  // squeeze, then contract displacements.
  const complexd moved = squeeze_adjoint_displace(-next.squeeze, acc.disp);
  const DisplaceComposition dc = displace_compose(next.disp, moved);
  acc.phase += next.phase + dc.phase;
  acc.disp = dc.sum;
  acc.squeeze += next.squeeze;
}

inline CompositionResult finish(const BranchOperator& op) {
  CompositionResult r;
  r.op = op;
  r.signal_phase = 0.5 * (op.up.phase - op.down.phase);
  r.residual_entanglement = std::max(std::abs(op.up.disp - op.down.disp),
                                     std::abs(op.up.squeeze - op.down.squeeze));
  return r;
}
}  // namespace detail

/// Exact product of branch operators in application order (ops[0] first).
inline CompositionResult compose(std::span<const BranchOperator> ops) {
  BranchOperator acc;
  for (const auto& o : ops) {
    detail::accumulate(acc.up, o.up);
    detail::accumulate(acc.down, o.down);
  }
  return detail::finish(acc);
}

inline CompositionResult compose(const std::vector<BranchOperator>& ops) {
  return compose(std::span<const BranchOperator>(ops.data(), ops.size()));
}

/// Engine evolution of a whole protocol.
inline CompositionResult compose_protocol(const ProtocolSpec& spec) {
  BranchOperator acc;
  for (const auto& seg : spec.segments) {
    const BranchOperator o = closed_form_segment(seg);
    detail::accumulate(acc.up, o.up);
    detail::accumulate(acc.down, o.down);
  }
  return detail::finish(acc);
}

/// Per-branch state parameters obtained by applying a composed result to an
/// initial oscillator state, |psi_s> = e^{i phase} D(disp) S(squeeze) |psi_i>.
/// Numeric states live in the Fock oracle; this is the symbolic description.
struct BranchStateParams {
  std::string psi_i;
  BranchValues up;
  BranchValues down;
};
inline BranchStateParams apply_to_state_params(const CompositionResult& result,
                                               const std::string& psi_i = "vacuum") {
  return {psi_i, result.op.up, result.op.down};
}

/// Ideal population of the measured spin state for a disentangling run,
/// P = (1 + cos phi)/2 evaluated at the engine's unwrapped signal phase.
inline double ideal_population(double signal_phase) {
  return 0.5 * (1.0 + std::cos(signal_phase));
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(phi, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

/// In-place continuous unwrapping of a phase sequence: each element is
/// shifted by a multiple of 2 pi to sit closest to its predecessor. Used by
/// sweeps that difference phases across a parameter grid.
inline void unwrap_phases(std::vector<double>& phases) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 1; i < phases.size(); ++i) {
    double d = phases[i] - phases[i - 1];
    phases[i] -= two_pi * std::round(d / two_pi);
  }
}

/// Mean phonon number of D(disp) S(squeeze) |0>.
inline double branch_mean_phonon(const BranchValues& b) {
  const double sh = std::sinh(b.squeeze);
  return std::norm(b.disp) + sh * sh;
}

struct TrajectoryPoint {
  double value = 0.0;
  double time = 0.0;
};

/// Engine-side phonon trajectory maximum for a vacuum-input run, sampled on a
/// uniform grid inside every segment (segment boundaries included).
inline TrajectoryPoint engine_max_phonon(const ProtocolSpec& spec, int samples_per_segment = 32) {
  if (samples_per_segment < 1) throw std::invalid_argument("samples_per_segment must be >= 1");
  BranchOperator acc;
  TrajectoryPoint best{0.0, 0.0};
  double t0 = 0.0;
  for (const auto& seg : spec.segments) {
    for (int j = 1; j <= samples_per_segment; ++j) {
      SegmentSpec part = seg;
      part.duration = seg.duration * j / samples_per_segment;
      const BranchOperator o = closed_form_segment(part);
      BranchOperator probe = acc;
      detail::accumulate(probe.up, o.up);
      detail::accumulate(probe.down, o.down);
      const double n = 0.5 * (branch_mean_phonon(probe.up) + branch_mean_phonon(probe.down));
      if (n > best.value) best = {n, t0 + part.duration};
    }
    const BranchOperator o = closed_form_segment(seg);
    detail::accumulate(acc.up, o.up);
    detail::accumulate(acc.down, o.down);
    t0 += seg.duration;
  }
  return best;
}

}  // namespace squeezamp
