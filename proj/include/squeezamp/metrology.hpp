#pragma once

// Closed-form sensitivities, phonon budgets, metrological gains and scaling
// exponents, plus the deterministic parameter sweeps that regenerate the
// figure data as tables. Pure formula evaluation; every g -> 0 limit goes
// through the stable series helpers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "squeezamp/series.hpp"

namespace squeezamp {

/// Field sensitivity of the single-squeeze sequence at tau = T/2,
/// r^2 / (alpha T^2 (e^r - 1 - r)) with r = gT/2. Monotone non-increasing
/// in g; the g -> 0 limit is the entanglement-only value 2/(alpha T^2).
inline double sens_single(double alpha, double g, double T) {
  if (!(T > 0.0) || g < 0.0) throw std::invalid_argument("sens_single: need T > 0, g >= 0");
  if (!(alpha > 0.0))
    throw std::invalid_argument("sens_single: alpha is zero, use sens_squeeze_only");
  const double r = 0.5 * g * T;
  return 1.0 / (alpha * T * T * expm1_rem(r));
}

inline double sens_entanglement_only(double alpha, double T) {
  if (!(alpha > 0.0) || !(T > 0.0)) throw std::invalid_argument("need positive alpha, T");
  return 2.0 / (alpha * T * T);
}

/// Squeezing-only sensitivity g/(e^r - 1); tends to 2/T as g -> 0.
inline double sens_squeeze_only(double g, double T) {
  if (g < 0.0 || !(T > 0.0)) throw std::invalid_argument("need g >= 0, T > 0");
  const double r = 0.5 * g * T;
  return 2.0 / (T * expm1_over(r));
}

/// Amplification over the squeezing-only (G_s) and entanglement-only (G_e)
/// sensitivities. G_e -> 1 as g -> 0; G_s is bounded by 2 alpha / g.
struct AmpFactors {
  double Gs;
  double Ge;
};
inline AmpFactors amp_factors(double alpha, double g, double T) {
  if (!(alpha > 0.0) || !(T > 0.0) || g < 0.0)
    throw std::invalid_argument("need positive alpha, T and g >= 0");
  const double r = 0.5 * g * T;
  return {alpha * T * expm1_rem(r) / expm1_over(r), 2.0 * expm1_rem(r)};
}

/// Maximum mean phonon number of the single-squeeze sequence (reached at T/2):
/// eta^2 ((e^-r - 1)/g)^2 + alpha^2 ((e^r - 1)/g)^2 + sinh^2 r.
inline double nbar_single(double eta, double alpha, double g, double T) {
  if (!(T > 0.0) || g < 0.0 || alpha < 0.0) throw std::invalid_argument("bad arguments");
  const double r = 0.5 * g * T;
  const double half_T = 0.5 * T;
  const double damped = half_T * expm1_over(-r);   // |(e^-r - 1)/g|
  const double grown = half_T * expm1_over(r);     // (e^r - 1)/g
  const double sh = std::sinh(r);
  return eta * eta * damped * damped + alpha * alpha * grown * grown + sh * sh;
}

/// Multi-squeeze accumulated phase (eta alpha T^2 / 2) sinh^2(r_m)/r_m^2,
/// r_m = gT/8.
inline double msp_phase(double eta, double alpha, double g, double T) {
  if (!(T > 0.0) || g < 0.0) throw std::invalid_argument("bad arguments");
  const double sc = sinhc(g * T / 8.0);
  return 0.5 * eta * alpha * T * T * sc * sc;
}

/// Multi-squeeze sensitivity 2 / (alpha T^2 sinh^2(r_m)/r_m^2) = 1/(dphi/deta).
inline double msp_sens(double alpha, double g, double T) {
  if (!(alpha > 0.0) || !(T > 0.0) || g < 0.0) throw std::invalid_argument("bad arguments");
  const double sc = sinhc(g * T / 8.0);
  return 2.0 / (alpha * T * T * sc * sc);
}

/// Multi-squeeze phonon budget max((alpha T/2)^2 sinh^2 r_m / r_m^2,
/// sinh^2 r_m) plus the (negligible for eta << alpha) field contribution
/// (eta T/2)^2 sinh^2 r_m / r_m^2, kept as a separate additive term.
inline double msp_nbar(double eta, double alpha, double g, double T) {
  if (!(T > 0.0) || g < 0.0 || alpha < 0.0) throw std::invalid_argument("bad arguments");
  const double rm = g * T / 8.0;
  const double sc = sinhc(rm);
  const double sh = std::sinh(rm);
  const double amp = 0.5 * alpha * T * sc;
  const double field = 0.5 * eta * T * sc;
  return std::max(amp * amp, sh * sh) + field * field;
}

/// Multi-squeeze gain over the SQL in dB: 10 log10(sinh(r_m)/r_m) for
/// g <= 4 alpha and 10 log10((4 alpha/g) sinh(r_m)/r_m) above; continuous at
/// g = 4 alpha.
inline double gains_db(double alpha, double g, double T) {
  if (!(alpha > 0.0) || !(T > 0.0) || g < 0.0) throw std::invalid_argument("bad arguments");
  const double sc = sinhc(g * T / 8.0);
  if (g <= 4.0 * alpha) return 10.0 * std::log10(sc);
  return 10.0 * std::log10(4.0 * alpha / g * sc);
}

/// Scaling exponent k = -log(delta_beta)/log(n_bar); 0.5 on the SQL, 1 on the
/// HL. Undefined (nullopt) for n_bar <= 1.
inline std::optional<double> hl_scaling(double delta_beta, double n_bar) {
  if (!(delta_beta > 0.0)) throw std::invalid_argument("delta_beta must be positive");
  if (n_bar <= 1.0) return std::nullopt;
  return -std::log(delta_beta) / std::log(n_bar);
}

/// Gain bound of any successive-evolution scheme, 10 log10(4 + 2 sqrt2 / sqrt(n)),
/// approaching 10 log10(4) ~ 6.02 dB from above.
inline double successive_bound_gain(double n_bar) {
  if (!(n_bar > 0.0)) throw std::invalid_argument("n_bar must be positive");
  return 10.0 * std::log10(4.0 + 2.0 * std::sqrt(2.0) / std::sqrt(n_bar));
}

enum class QfiKind { fock, squeezed, bound };

/// Closed-form Fisher information: 8N+4 for Fock |N>, 4 e^{2r} for squeezed
/// vacuum, and the pure-state bound 16 n_bar + 8.
inline double qfi_closed(QfiKind kind, double param) {
  switch (kind) {
    case QfiKind::fock: return 8.0 * param + 4.0;
    case QfiKind::squeezed: return 4.0 * std::exp(2.0 * param);
    case QfiKind::bound: return 16.0 * param + 8.0;
  }
  throw std::invalid_argument("unknown QFI kind");
}

// ---------------------------------------------------------------------------
// Sweeps

enum class ProtocolKind { single_squeeze, msp };

struct SweepRow {
  std::string protocol;
  double alpha = 0.0, eta = 0.0, g = 0.0, T = 0.0;
  double delta_eta = 0.0, delta_beta = 0.0, n_bar = 0.0, sql = 0.0, hl = 0.0, gain_db = 0.0;
  std::optional<double> k;
  std::string flags;
};

/// One sweep point evaluated from the closed forms. Signals (zero alpha,
/// n_bar <= 1) become flags, never exceptions.
inline SweepRow make_report(ProtocolKind kind, double alpha, double eta, double g, double T) {
  SweepRow row;
  row.protocol = kind == ProtocolKind::single_squeeze ? "single" : "msp";
  row.alpha = alpha;
  row.eta = eta;
  row.g = g;
  row.T = T;
  auto add_flag = [&](const std::string& f) {
    if (!row.flags.empty()) row.flags += ';';
    row.flags += f;
  };
  try {
    if (kind == ProtocolKind::single_squeeze) {
      if (alpha > 0.0) {
        row.delta_eta = sens_single(alpha, g, T);
      } else {
        row.delta_eta = sens_squeeze_only(g, T);
        add_flag("squeeze_only");
      }
      row.n_bar = nbar_single(eta, alpha, g, T);
    } else {
      if (alpha > 0.0) {
        row.delta_eta = msp_sens(alpha, g, T);
      } else {
        row.delta_eta = std::numeric_limits<double>::quiet_NaN();
        add_flag("alpha_zero");
      }
      row.n_bar = msp_nbar(eta, alpha, g, T);
    }
    row.delta_beta = row.delta_eta * T;
    row.sql = 1.0 / std::sqrt(row.n_bar);
    row.hl = 1.0 / row.n_bar;
    row.gain_db = 10.0 * std::log10(row.sql / row.delta_beta);
    if (row.n_bar > 1.0 && row.delta_beta > 0.0) {
      row.k = hl_scaling(row.delta_beta, row.n_bar);
    } else {
      add_flag("k_undefined");
    }
  } catch (const std::exception& e) {
    add_flag(std::string("error:") + e.what());
  }
  return row;
}

/// Concurrency cap: SQUEEZAMP_THREADS when set, hardware otherwise.
inline unsigned sweep_thread_cap() {
  if (const char* env = std::getenv("SQUEEZAMP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return unsigned(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Evaluate the full g x T grid (g outer, T inner). Rows are computed
/// concurrently into fixed slots, so the output order is the grid order
/// regardless of scheduling, and identical input reproduces identical rows.
inline std::vector<SweepRow> sweep(ProtocolKind kind, double alpha, double eta,
                                   const std::vector<double>& g_list,
                                   const std::vector<double>& T_list,
                                   unsigned max_threads = 0) {
  if (g_list.empty() || T_list.empty()) throw std::invalid_argument("sweep grids must be non-empty");
  const std::size_t total = g_list.size() * T_list.size();
  std::vector<SweepRow> rows(total);
  const unsigned cap = max_threads ? max_threads : sweep_thread_cap();
  const unsigned nthreads = unsigned(std::min<std::size_t>(cap, total));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const double g = g_list[i / T_list.size()];
      const double T = T_list[i % T_list.size()];
      rows[i] = make_report(kind, alpha, eta, g, T);
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace squeezamp
