#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "squeezamp/fock.hpp"
#include "squeezamp/gaussian.hpp"
#include "squeezamp/protocol.hpp"

using namespace squeezamp;

namespace {
SegmentSpec seg(double eta, int m, double alpha, int p, double g, double tau) {
  SegmentSpec s;
  s.eta = eta;
  s.sdf_sign = m;
  s.alpha = alpha;
  s.pd_sign = p;
  s.g = g;
  s.duration = tau;
  return s;
}

OracleConfig cfg_dim(int dim) {
  OracleConfig c;
  c.dim = dim;
  return c;
}
}  // namespace

TEST_CASE("ladder operators", "[fock]") {
  {
    auto [a, ad] = ladder_ops(2);
    CHECK(a(0, 1).real() == Approx(1.0));
    CHECK(a(1, 0) == complexd(0, 0));
  }
  {
    auto [a, ad] = ladder_ops(4);
    CHECK(a(2, 3).real() == Approx(std::sqrt(3.0)));
  }
  CHECK_THROWS_AS(ladder_ops(1), std::invalid_argument);
  // truncation artifact: [a, a+] = I - dim |dim-1><dim-1|
  const int dim = 12;
  auto [a, ad] = ladder_ops(dim);
  Matrix comm = a * ad - ad * a;
  Matrix expect = Matrix::Identity(dim, dim);
  expect(dim - 1, dim - 1) = 1.0 - double(dim);
  CHECK((comm - expect).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-12));
}

TEST_CASE("segment Hamiltonian structure", "[fock]") {
  const int dim = 16;
  {
    const SpinBlockHamiltonian H = segment_hamiltonian(seg(0.01, 0, 0, 0, 0, 1.0), dim);
    CHECK((H.up - H.down).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-15));
    auto [a, ad] = ladder_ops(dim);
    Matrix expect = 0.01 * (a + ad);
    CHECK((H.up - expect).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-15));
  }
  {
    // pure parametric drive couples n and n+-2 only
    const SpinBlockHamiltonian H = segment_hamiltonian(seg(0, 0, 0, +1, 1.0, 1.0), dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (std::abs(i - j) != 2) CHECK(std::abs(H.up(i, j)) == Approx(0.0).margin(1e-15));
    CHECK(H.up(2, 0).imag() != 0.0);
  }
  {
    // spin blocks differ only in the SDF sign
    const SpinBlockHamiltonian H = segment_hamiltonian(seg(0.01, +1, 1.0, +1, 0.5, 2.0), dim);
    auto [a, ad] = ladder_ops(dim);
    const complexd i1(0, 1);
    Matrix diff = H.up - H.down;
    Matrix expect = 2.0 * i1 * (ad - a);
    CHECK((diff - expect).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("Hamiltonian blocks are Hermitian", "[fock][property]") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 25; ++i) {
    const SegmentSpec s =
        seg(u(rng), rng() % 2 ? +1 : -1, u(rng) + 0.01, rng() % 2 ? +1 : -1, u(rng) + 0.01, 1.0);
    const SpinBlockHamiltonian H = segment_hamiltonian(s, 24);
    CHECK((H.up - H.up.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((H.down - H.down.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("exact evolution basics", "[fock]") {
  const OracleConfig cfg = cfg_dim(32);
  const SpinFockState init = SpinFockState::plus_vacuum(32);
  {
    // weak field for unit time: coherent state with <n> = eta^2 t^2
    const SpinFockState out = evolve_exact(init, seg(0.01, 0, 0, 0, 0, 1.0), cfg);
    CHECK(std::abs(mean_phonon(out) - 1e-4) <= 1e-8);
    CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
  }
  {
    // zero Hamiltonian: state unchanged
    const SpinFockState out = evolve_exact(init, seg(0.0, 0, 0, 0, 0, 1.0), cfg);
    CHECK(fidelity(init, out) == Approx(1.0).epsilon(1e-14));
  }
  {
    // pure squeeze: <n> = sinh^2(g t); needs headroom well past the ideal
    // tail because the truncated drive reflects off the basis wall
    const SpinFockState init160 = SpinFockState::plus_vacuum(160);
    const SpinFockState out = evolve_exact(init160, seg(0, 0, 0, +1, 1.0, 1.0), cfg_dim(160));
    CHECK(mean_phonon(out) == Approx(1.3810978).epsilon(1e-6));
  }
}

TEST_CASE("norm preservation over random segments", "[fock][property]") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  const OracleConfig cfg = cfg_dim(48);
  SpinFockState s = SpinFockState::plus_vacuum(48);
  for (int i = 0; i < 12; ++i) {
    const SegmentSpec step =
        seg(0.05 * u(rng), rng() % 2 ? +1 : -1, u(rng), rng() % 2 ? +1 : -1, u(rng), 0.4 * u(rng));
    s = evolve_exact(s, step, cfg);
    CHECK(std::abs(s.norm() - 1.0) <= 1e-10);
  }
}

TEST_CASE("truncation failure is reported", "[fock]") {
  const ProtocolSpec p1 = make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0);
  OracleConfig cfg = cfg_dim(16);
  CHECK_THROWS_AS(run_protocol(p1, cfg), TruncationError);
  try {
    run_protocol(p1, cfg);
  } catch (const TruncationError& e) {
    CHECK(e.leakage() > cfg.leakage_tol);
    CHECK_THAT(e.what(), Catch::Contains("truncation too small"));
  }
}

TEST_CASE("Trotter path converges toward the exact propagator", "[fock]") {
  const SegmentSpec s = make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0).segments[0];
  const OracleConfig cfg = cfg_dim(160);
  const SpinFockState init = SpinFockState::plus_vacuum(160);
  const SpinFockState exact = evolve_exact(init, s, cfg);
  const double d1 = 1.0 - fidelity(evolve_trotter(init, s, 1, cfg), exact);
  const double d2 = 1.0 - fidelity(evolve_trotter(init, s, 2, cfg), exact);
  CHECK(d1 > d2);
  CHECK(d2 > 0.0);
}

TEST_CASE("Trotter is exact for a commuting (single-term) Hamiltonian", "[fock]") {
  const SegmentSpec s = seg(0.01, 0, 0, 0, 0, 1.0);
  const OracleConfig cfg = cfg_dim(32);
  const SpinFockState init = SpinFockState::plus_vacuum(32);
  const SpinFockState exact = evolve_exact(init, s, cfg);
  const SpinFockState trot = evolve_trotter(init, s, 1, cfg);
  CHECK(fidelity(exact, trot) >= 1.0 - 1e-12);
}

TEST_CASE("population convention", "[fock]") {
  SpinFockState s = SpinFockState::plus_vacuum(16);
  CHECK(spin_down_population(s) == Approx(1.0));
  // inject a relative phase 2*phi between the branches: P = (1 + cos phi)/2
  for (double phi : {0.3, 0.7, 1.2}) {
    SpinFockState t = s;
    const complexd i1(0, 1);
    t.up *= std::exp(i1 * phi);
    t.down *= std::exp(-i1 * phi);
    CHECK(spin_down_population(t) == Approx(0.5 * (1.0 + std::cos(phi))).epsilon(1e-12));
  }
  // orthogonal branches: no contrast
  SpinFockState o = s;
  o.up = Vector::Zero(16);
  o.up(1) = 1.0 / std::sqrt(2.0);
  CHECK(spin_down_population(o) == Approx(0.5));
}

TEST_CASE("oracle matches the engine at P1 (calibration guard)", "[fock][calibration]") {
  const ProtocolSpec p1 = make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0);
  const OracleConfig cfg;  // auto truncation
  const ProtocolRun run = run_protocol(p1, cfg);
  const CompositionResult eng = compose_protocol(p1);
  const SpinFockState pred = engine_predicted_state(eng.op, run.dim);
  CHECK(fidelity(pred, run.state) >= 1.0 - 1e-8);
  CHECK(spin_down_population(run.state) == Approx(0.9967016).margin(1e-5));
}

TEST_CASE("oracle fixes the per-segment sign convention (calibration guard)",
          "[fock][calibration]") {
  // every elementary sign combination, engine closed form vs exact evolution,
  // including the accumulated phase (via the complex overlap, not just
  // fidelity)
  const OracleConfig cfg = cfg_dim(64);
  for (int m : {+1, -1})
    for (int p : {+1, -1}) {
      const SegmentSpec s = seg(0.05, m, 0.4, p, 0.3, 1.5);
      const SpinFockState evolved = evolve_exact(SpinFockState::plus_vacuum(64), s, cfg);
      const BranchOperator op = closed_form_segment(s);
      const SpinFockState pred = engine_predicted_state(op, 64);
      CAPTURE(m, p);
      CHECK(fidelity(pred, evolved) >= 1.0 - 1e-10);
      const complexd ov = pred.up.dot(evolved.up) + pred.down.dot(evolved.down);
      CHECK(std::abs(std::arg(ov)) <= 1e-8);
    }
}

TEST_CASE("oracle validates the msp sign table (calibration guard)", "[fock][calibration]") {
  const ProtocolSpec m1 = make_msp(0.01, 1.0, 0.8, 1.0);
  const OracleConfig cfg = cfg_dim(260);
  const ProtocolRun run = run_protocol(m1, cfg);
  const CompositionResult eng = compose_protocol(m1);
  const SpinFockState pred = engine_predicted_state(eng.op, run.dim);
  CHECK(fidelity(pred, run.state) >= 1.0 - 1e-8);
  CHECK(std::abs(eng.signal_phase) == Approx(0.3943661).epsilon(1e-6));
}

TEST_CASE("auto sizing covers both standard protocols", "[fock]") {
  const int d1 = auto_dim(make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0));
  CHECK(d1 >= 60);
  CHECK(d1 <= 120);
  const int d2 = auto_dim(make_msp(0.01, 1.0, 0.8, 1.0));
  CHECK(d2 >= 160);  // sized to the true staged peak, not the final state
}

TEST_CASE("trajectory maximum at P1 sits at the pulse boundary", "[fock]") {
  const TrajectoryPoint t =
      trajectory_max_phonon(make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0), 8, OracleConfig{});
  CHECK(t.value == Approx(13.1912275).epsilon(2e-3));
  CHECK(t.time == Approx(2.0).margin(0.26));
}

TEST_CASE("quantum Fisher information oracle", "[fock]") {
  const int dim = 64;
  for (int N : {0, 3, 10}) {
    Vector psi = Vector::Zero(dim);
    psi(N) = 1.0;
    CHECK(qfi_pure(psi) == Approx(8.0 * N + 4.0).margin(1e-8));
  }
  {
    // a coherent state keeps the vacuum variance: F = 4 regardless of amplitude
    Vector vac = Vector::Zero(dim);
    vac(0) = 1.0;
    const Vector coh = displacement_matrix(dim, complexd(0.7, -0.4)) * vac;
    CHECK(qfi_pure(coh) == Approx(4.0).epsilon(1e-6));
  }
  {
    const int sdim = 160;
    Vector vac = Vector::Zero(sdim);
    vac(0) = 1.0;
    const Vector sq = squeeze_matrix(sdim, 1.0) * vac;
    CHECK(qfi_pure(sq) == Approx(4.0 * std::exp(2.0)).epsilon(1e-4));
  }
}

TEST_CASE("Fisher information bound over random states", "[fock][property]") {
  std::mt19937_64 rng(0xfeedULL);
  std::normal_distribution<double> dist;
  const int dim = 40;
  for (int trial = 0; trial < 100; ++trial) {
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
    CHECK(qfi_pure(s) <= 16.0 * mean_phonon(s) + 8.0 + 1e-9);
  }
}

TEST_CASE("finite-difference sensitivity agrees with the closed form at P1", "[fock]") {
  const double fd = fd_sensitivity(make_single_squeeze(0.01, 1.0, 0.5, 2.0, 4.0), OracleConfig{});
  CHECK(fd == Approx(0.0870135).epsilon(1e-3));
}

TEST_CASE("insensitive operating point is signaled", "[fock]") {
  // field-only protocol: the spin never couples, P stays 1
  ProtocolSpec p;
  p.name = "free";
  p.segments.push_back(seg(0.05, 0, 0, 0, 0, 1.0));
  p.total_T = 1.0;
  CHECK_THROWS_AS(fd_sensitivity(p, cfg_dim(32)), InsensitivePointError);
}
