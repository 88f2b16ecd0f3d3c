#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace squeezamp {

/// Optional record of where the field coupling came from: eta = E * q * z0.
struct FieldProvenance {
  double E = 0.0;
  double q = 0.0;
  double z0 = 0.0;
};

/// One piecewise-constant Hamiltonian segment,
///   H = eta (a + a†) + sdf_sign * i alpha (a† - a) σ_z + pd_sign * (i g / 2)(a†² - a²),
/// with hbar = 1 and all strengths in angular-frequency units. A sign of 0
/// means the corresponding drive is off (and its strength must be 0).
struct SegmentSpec {
  double eta = 0.0;
  int sdf_sign = 0;
  double alpha = 0.0;
  int pd_sign = 0;
  double g = 0.0;
  double duration = 0.0;
  std::optional<FieldProvenance> field_provenance;
};

/// An ordered segment sequence with its declared total duration.
struct ProtocolSpec {
  std::string name;
  std::vector<SegmentSpec> segments;
  double total_T = 0.0;
};

namespace detail {
inline SegmentSpec make_segment(double eta, int sdf_sign, double alpha, int pd_sign,
                                double g, double duration) {
  SegmentSpec s;
  s.eta = eta;
  s.alpha = alpha;
  s.g = g;
  s.duration = duration;
  // A drive of zero strength is "absent": its sign is normalized to 0.
  s.sdf_sign = alpha > 0.0 ? sdf_sign : 0;
  s.pd_sign = g > 0.0 ? pd_sign : 0;
  if (s.sdf_sign == 0) s.alpha = 0.0;
  if (s.pd_sign == 0) s.g = 0.0;
  return s;
}
}  // namespace detail

/// Single-squeeze sequence: simultaneous +SDF/+PD pulse of length tau, free
/// evolution for T - 2 tau, then the reversed pulse. The free segment is an
/// ordinary segment with both drives off; it is omitted when T == 2 tau.
inline ProtocolSpec make_single_squeeze(double eta, double alpha, double g, double tau,
                                        double T) {
  if (!(tau > 0.0) || !(T > 0.0)) throw std::invalid_argument("tau and T must be positive");
  if (alpha < 0.0 || g < 0.0) throw std::invalid_argument("alpha and g must be non-negative");
  if (2.0 * tau > T) throw std::invalid_argument("pulse duration exceeds total time");
  ProtocolSpec p;
  p.name = "single-squeeze";
  p.segments.push_back(detail::make_segment(eta, +1, alpha, +1, g, tau));
  if (T > 2.0 * tau) p.segments.push_back(detail::make_segment(eta, 0, 0.0, 0, 0.0, T - 2.0 * tau));
  p.segments.push_back(detail::make_segment(eta, -1, alpha, -1, g, tau));
  p.total_T = 0.0;
  for (const auto& s : p.segments) p.total_T += s.duration;
  return p;
}

// Eight-segment multi-squeeze sign tables. The SDF holds + for the first half
// and - for the second; the PD alternates (-,+,+,-) within each half. The PD
// pattern is fixed by oracle calibration: among the balanced tables it is the
// one whose composed evolution both disentangles and accumulates the
// closed-form phase (eta alpha T^2 / 2) sinh^2(gT/8)/(gT/8)^2 (guarded by the
// calibration tests).
inline constexpr std::array<int, 8> kMspSdfSigns{+1, +1, +1, +1, -1, -1, -1, -1};
inline constexpr std::array<int, 8> kMspPdSigns{-1, +1, +1, -1, -1, +1, +1, -1};

/// Multi-squeeze protocol: eight segments of equal duration tau, total 8 tau.
inline ProtocolSpec make_msp(double eta, double alpha, double g, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (alpha < 0.0 || g < 0.0) throw std::invalid_argument("alpha and g must be non-negative");
  ProtocolSpec p;
  p.name = "msp";
  for (int k = 0; k < 8; ++k)
    p.segments.push_back(detail::make_segment(eta, kMspSdfSigns[k], alpha, kMspPdSigns[k], g, tau));
  p.total_T = 8.0 * tau;
  return p;
}

/// Checks every structural invariant. Violations are returned as data, one
/// message per problem, each naming the offending segment where applicable.
inline std::vector<std::string> validate_protocol(const ProtocolSpec& spec) {
  std::vector<std::string> out;
  if (spec.segments.empty()) {
    out.push_back("protocol has no segments");
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const SegmentSpec& s = spec.segments[i];
    const std::string tag = "segment " + std::to_string(i) + ": ";
    if (!(s.duration > 0.0)) out.push_back(tag + "duration must be > 0");
    if (s.alpha < 0.0) out.push_back(tag + "alpha must be >= 0");
    if (s.g < 0.0) out.push_back(tag + "g must be >= 0");
    if (s.sdf_sign < -1 || s.sdf_sign > 1) out.push_back(tag + "sdf_sign must be in {-1,0,+1}");
    if (s.pd_sign < -1 || s.pd_sign > 1) out.push_back(tag + "pd_sign must be in {-1,0,+1}");
    if ((s.sdf_sign == 0) != (s.alpha == 0.0))
      out.push_back(tag + "sdf_sign is 0 iff alpha is 0");
    if ((s.pd_sign == 0) != (s.g == 0.0)) out.push_back(tag + "pd_sign is 0 iff g is 0");
    if (s.field_provenance) {
      const auto& f = *s.field_provenance;
      if (std::abs(s.eta - f.E * f.q * f.z0) > 1e-12 * std::abs(s.eta))
        out.push_back(tag + "field provenance inconsistent with eta");
    }
    sum += s.duration;
  }
  if (std::abs(sum - spec.total_T) > 1e-12 * std::max(1.0, std::abs(spec.total_T)))
    out.push_back("total_T inconsistent with segment durations");
  return out;
}

}  // namespace squeezamp
