#include <doctest.h>

#include <cmath>

#include "flows.hpp"
#include "helpers.hpp"
#include "nslab/beltrami.hpp"
#include "nslab/error.hpp"
#include "nslab/fft.hpp"
#include "nslab/norms.hpp"
#include "nslab/random.hpp"
#include "nslab/solver.hpp"
#include "nslab/spectral.hpp"

using namespace nslab;
using nslab::testing::rel;
using nslab::testing::taylor_green;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::vector<double> uniform_mesh(double T, int steps) {
  std::vector<double> t;
  for (int k = 0; k <= steps; ++k) t.push_back(T * k / steps);
  return t;
}

Trajectory zeros_on(int N, const std::vector<double>& times) {
  return heat_extension(SpectralField(N, 3), times);
}

double sup_over(const Trajectory& tr) {
  double s = 0.0;
  for (const auto& f : tr.fields()) s = std::max(s, sup_norm(f));
  return s;
}

}  // namespace

TEST_CASE("pressure") {
  const int N = 16;
  SUBCASE("Beltrami field: P = -|phi|^2/2 + const") {
    const SpectralField phi = random_beltrami(N, 3, 1, 21);
    const SpectralField P = pressure(phi);
    PhysicalField q = to_physical(phi);
    PhysicalField s{N, 1, std::vector<Complex>(q.points())};
    const auto sq = q.pointwise_norm_sq();
    for (std::size_t i = 0; i < sq.size(); ++i) s.values[i] = -0.5 * sq[i];
    SpectralField expect = to_spectral(s, true);
    expect(0, 0) = 0.0;
    const double scale = sup_norm(phi) * sup_norm(phi);
    CHECK(sup_norm(P - expect) <= 1e-12 * scale);
    CHECK(sup_norm(gradient(P) + product_advect(phi, phi)) <= 1e-11 * scale);
  }
  SUBCASE("zero field") { CHECK(max_coeff(pressure(SpectralField(N, 3))) == 0.0); }
  SUBCASE("random field solves the Poisson equation") {
    const SpectralField u = random_solenoidal(N, 22, RandomBand{5, 1, 75});
    const SpectralField P = pressure(u);
    const SpectralField src = divergence(product_advect(u, u));
    CHECK(l2_norm(laplacian(P) + src) <= 1e-11 * l2_norm(src));
    CHECK(P(0, 0) == Complex{0.0});
  }
  SpectralField compressive(N, 3);
  compressive.at(0, {1, 0, 0}) = 1.0;
  compressive.at(0, {-1, 0, 0}) = 1.0;
  CHECK(kind_of([&] { pressure(compressive); }) == ErrorKind::NotDivergenceFree);
}

TEST_CASE("solver configuration") {
  CHECK(stability_bound(16) == doctest::Approx(0.5 * 9.0 / 256.0));
  SolverConfig cfg;
  cfg.dt = 0.02;
  CHECK(kind_of([&] { validate(cfg, 16); }) == ErrorKind::BadConfig);
  cfg.dt = -1.0;
  CHECK(kind_of([&] { validate(cfg, 16); }) == ErrorKind::BadConfig);
  cfg = SolverConfig{};
  cfg.record_every = 0;
  CHECK(kind_of([&] { validate(cfg, 16); }) == ErrorKind::BadConfig);
  CHECK_NOTHROW(validate(SolverConfig{}, 32));
}

TEST_CASE("solve: Beltrami data is an exact solution") {
  const int N = 16;
  for (int m : {1, 2, 3, 5, 6}) {
    const SpectralField phi = random_beltrami(N, m, m % 2 ? 1 : -1, 30 + m);
    SolverConfig cfg;
    cfg.T = 0.5;
    cfg.record_every = 100;
    const Trajectory tr = solve(phi, cfg);
    REQUIRE(tr.size() == 6);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const SpectralField exact = phi * std::exp(-m * tr.time(k));
      CHECK(l2_distance(tr.field(k), exact) <= 1e-8 * l2_norm(exact));
      CHECK(tr.diagnostics()[k].div_residual <= 1e-11);
    }
    CHECK(tr.times().back() == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("solve: zero data stays zero") {
  const Trajectory tr = solve(SpectralField(16, 3), SolverConfig{});
  for (const auto& f : tr.fields()) CHECK(max_coeff(f) == 0.0);
}

TEST_CASE("solve: resolution convergence on Taylor-Green data") {
  SolverConfig cfg;
  cfg.T = 0.1;
  cfg.record_every = 25;
  const Trajectory a = solve(taylor_green(16, 1.0), cfg);
  const Trajectory b = solve(taylor_green(32, 1.0), cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(std::abs(a.diagnostics()[k].energy - b.diagnostics()[k].energy) <= 1e-6);
}

TEST_CASE("solve: fourth-order convergence in time") {
  const SpectralField u0 = taylor_green(16, 4.0);
  auto final = [&](double dt) {
    SolverConfig cfg;
    cfg.T = 0.2;
    cfg.dt = dt;
    cfg.record_every = 1000000;
    return solve(u0, cfg).fields().back();
  };
  const SpectralField ref = final(0.000625);
  const double e1 = l2_distance(final(0.01), ref);
  const double e2 = l2_distance(final(0.005), ref);
  const double e3 = l2_distance(final(0.0025), ref);
  MESSAGE("errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e2 / e3 >= 12.0);
}

TEST_CASE("solve: energy identity and monotone decay") {
  SpectralField u0 = random_solenoidal(16, 41, RandomBand{5, 1, 75, 0.5});
  u0 *= 2.0 / l2_norm(u0);
  SolverConfig cfg;
  cfg.T = 0.3;
  cfg.record_every = 10;
  const Trajectory tr = solve(u0, cfg);
  const EnergyReport rep = energy_report(tr);
  CHECK(rep.max_identity_residual <= 1e-6);
  const double e0 = tr.diagnostics()[0].energy;
  const auto& last = tr.diagnostics().back();
  CHECK(std::abs(last.energy + last.dissipation - e0) <= 1e-6 * e0);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    CHECK(tr.diagnostics()[k].energy < tr.diagnostics()[k - 1].energy);
    CHECK(tr.diagnostics()[k].div_residual <= 1e-11);
  }
}

TEST_CASE("solve: errors") {
  SpectralField compressive(16, 3);
  compressive.at(0, {1, 0, 0}) = 1.0;
  compressive.at(0, {-1, 0, 0}) = 1.0;
  CHECK(kind_of([&] { solve(compressive, SolverConfig{}); }) == ErrorKind::NotDivergenceFree);
  SolverConfig cfg;
  cfg.instability_factor = 1e-3;
  CHECK(kind_of([&] { solve(taylor_green(16, 1.0), cfg); }) == ErrorKind::Instability);
}

TEST_CASE("duhamel map") {
  const int N = 16;
  const double T1 = 0.01;
  const auto times = uniform_mesh(T1, 40);
  SUBCASE("no nonlinearity gives the heat flow") {
    SpectralField u01(N, 3);
    const HelicalPair h = helical_basis({1, 2, 0});
    u01.set_vec(u01.grid().index({1, 2, 0}), h.plus);
    u01.set_vec(u01.grid().index({-1, -2, 0}), {-std::conj(h.plus[0]), -std::conj(h.plus[1]), -std::conj(h.plus[2])});
    const Trajectory v = duhamel_map(zeros_on(N, times), zeros_on(N, times), u01, T1);
    for (std::size_t k = 0; k < v.size(); ++k)
      CHECK(l2_distance(v.field(k), u01 * std::exp(-5.0 * v.time(k))) <= 1e-14);
  }
  SUBCASE("Beltrami heat flow source is a gradient") {
    const SpectralField phi = random_beltrami(N, 2, 1, 51);
    const SpectralField u01 = random_solenoidal(N, 52, RandomBand{3, 1, 27}) * 1e-2;
    const Trajectory v = duhamel_map(zeros_on(N, times), heat_extension(phi, times), u01, T1);
    for (std::size_t k = 0; k < v.size(); ++k) {
      const SpectralField ref = heat_semigroup(u01, v.time(k));
      CHECK(l2_distance(v.field(k), ref) <= 1e-13 * l2_norm(u01));
      CHECK(divergence_residual(v.field(k)) <= 1e-13);
    }
  }
  SUBCASE("generic inputs agree with a 4x finer mesh") {
    const SpectralField u0 = random_solenoidal(N, 53, RandomBand{5, 1, 75, 0.5});
    const SpectralField vt0 = random_solenoidal(N, 54, RandomBand{5, 1, 75, 0.5}) * 0.3;
    const SpectralField u01 = random_solenoidal(N, 55, RandomBand{5, 1, 75, 0.5}) * 0.1;
    const auto fine = uniform_mesh(T1, 160);
    const Trajectory coarse_v = duhamel_map(heat_extension(vt0, times), heat_extension(u0, times), u01, T1);
    const Trajectory fine_v = duhamel_map(heat_extension(vt0, fine), heat_extension(u0, fine), u01, T1);
    double worst = 0.0;
    for (std::size_t k = 0; k < coarse_v.size(); ++k) {
      const SpectralField& f = fine_v.field(4 * k);
      worst = std::max(worst, l2_distance(coarse_v.field(k), f) / std::max(l2_norm(f), 1e-300));
    }
    MESSAGE("worst relative mesh discrepancy " << worst);
    CHECK(worst <= 1e-5);
  }
  SUBCASE("mesh errors") {
    const SpectralField u01(N, 3);
    CHECK(kind_of([&] { duhamel_map(zeros_on(N, times), zeros_on(N, uniform_mesh(T1, 10)), u01, T1); }) ==
          ErrorKind::MeshMismatch);
    CHECK(kind_of([&] { duhamel_map(zeros_on(N, times), zeros_on(N, times), u01, 2 * T1); }) ==
          ErrorKind::MeshMismatch);
  }
}

TEST_CASE("stokes duhamel") {
  const int N = 8;
  const auto times = uniform_mesh(0.05, 10);
  Trajectory G(FlowKind::Generic);
  G.set_check_divergence(false);
  for (double t : times) G.push(t, SpectralField(N, 9));
  const Trajectory zero = stokes_duhamel(G);
  for (const auto& f : zero.fields()) CHECK(max_coeff(f) == 0.0);

  // constant-in-time gradient-free source: V(t) = (1 - e^{-|n|^2 t}) / |n|^2 * P div G
  SpectralField g0(N, 9);
  g0.at(1, {0, 0, 1}) = 0.5;
  g0.at(1, {0, 0, -1}) = 0.5;
  Trajectory Gc(FlowKind::Generic);
  Gc.set_check_divergence(false);
  const auto fine = uniform_mesh(0.05, 400);
  for (double t : fine) Gc.push(t, g0);
  const Trajectory V = stokes_duhamel(Gc);
  const SpectralField q = leray_project(divergence(g0));
  const double t = fine.back();
  CHECK(l2_distance(V.fields().back(), q * (1.0 - std::exp(-t))) <= 1e-6 * l2_norm(q));
}

TEST_CASE("picard iteration") {
  const int N = 16;
  SUBCASE("zero data converges in one iterate") {
    const auto times = uniform_mesh(0.01, 10);
    const auto [v, rep] = picard_solve(SpectralField(N, 3), zeros_on(N, times), 0.01);
    CHECK(rep.iterates == 1);
    CHECK(rep.converged);
    CHECK(rep.ratios.empty());
    CHECK(rep.differences.size() == 1);
    for (const auto& f : v.fields()) CHECK(max_coeff(f) == 0.0);
  }
  SUBCASE("small data contracts") {
    const double T1 = 0.01;
    const auto times = log_times(1e-5, T1, 4, true);
    const SpectralField u01 = random_solenoidal(N, 61, RandomBand{4, 1, 48}) * 1e-3;
    const SpectralField u2p = random_solenoidal(N, 62, RandomBand{4, 1, 48}) * 1e-3;
    const auto [v, rep] = picard_solve(u01, heat_extension(u2p, times), T1);
    CHECK(rep.converged);
    CHECK(rep.ratios.size() == static_cast<std::size_t>(rep.iterates - 1));
    CHECK(rep.differences.back() < 1e-8);
    for (double r : rep.ratios) CHECK(r <= 0.5);
    // fixed point of the map
    const Trajectory again = duhamel_map(v, heat_extension(u2p, times), u01, T1);
    CHECK(x_norm(difference(again, v), T1).value <= 1e-8);
  }
  SUBCASE("Picard limit matches the direct solver") {
    const double T1 = t1_horizon(1.0, 0.05, 1.0, 0.5, 0.1);
    const SpectralField u2p = random_beltrami(N, 1, 1, 63);
    const SpectralField u01 = random_solenoidal(N, 64, RandomBand{4, 1, 48}) * 0.05;
    SolverConfig cfg;
    cfg.T = T1;
    cfg.dt = T1 / 10;
    const Trajectory U = solve(u2p + u01, cfg);
    const Trajectory u = heat_extension(u2p, U.times());
    const auto [v, rep] = picard_solve(u01, u, T1);
    CHECK(rep.converged);
    const Trajectory direct = difference(U, u);
    CHECK(sup_over(difference(v, direct)) <= 1e-5);
  }
  SUBCASE("large data over a long horizon fails to contract") {
    const double T1 = 1.0;
    const auto times = uniform_mesh(T1, 50);
    const SpectralField u01 = random_solenoidal(N, 65, RandomBand{2, 1, 12}) * 40.0;
    const ErrorKind k = kind_of([&] { picard_solve(u01, zeros_on(N, times), T1, 1e-8, 30); });
    CHECK(k == ErrorKind::NoConvergence);
  }
  CHECK(kind_of([] { picard_solve(SpectralField(8, 3), zeros_on(8, {0.0, 0.1}), 0.1, 0.0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("T1 horizon") {
  CHECK(t1_horizon(1.0, 0.1, 0.0, 0.5, 1.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(t1_horizon(1.0, 0.1, std::sqrt(3.0), 0.5, 1.0) == doctest::Approx(3.125e-4).epsilon(1e-14));
  CHECK(t1_horizon(1.0, 0.05, 1.0, 0.5, 0.1) == doctest::Approx(0.1 * 0.0025 * std::pow(2.0, -2.5)));
  double prev = 1e300;
  for (double lam : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double t = t1_horizon(1.0, 0.1, lam, 0.3, 1.0);
    CHECK(t < prev);
    prev = t;
  }
  prev = 1e300;
  for (double b : {0.1, 0.3, 0.5, 0.9}) {
    const double t = t1_horizon(1.0, 0.1, 2.0, b, 1.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(kind_of([] { t1_horizon(1.0, 0.1, 1.0, 1.0, 1.0); }) == ErrorKind::BadExponent);
  CHECK(kind_of([] { t1_horizon(1.0, 0.1, 1.0, 0.0, 1.0); }) == ErrorKind::BadExponent);
}

TEST_CASE("energy report") {
  const int N = 16;
  SUBCASE("single-mode heat flow") {
    const int m = 5;
    SpectralField f(N, 3);
    const HelicalPair h = helical_basis({1, 2, 0});
    f.set_vec(f.grid().index({1, 2, 0}), h.plus);
    const auto times = uniform_mesh(0.2, 400);
    const EnergyReport rep = energy_report(heat_extension(f, times));
    for (const auto& row : rep.rows) {
      CHECK(row.grad_sq == doctest::Approx(m * std::exp(-2.0 * m * row.t)).epsilon(1e-13));
      const double exact = m * m * (1.0 - std::exp(-2.0 * m * row.t)) / (2.0 * m);
      CHECK(std::abs(row.lap_integral - exact) <= 1e-4 * m);
    }
  }
  SUBCASE("zero trajectory") {
    const EnergyReport rep = energy_report(zeros_on(N, uniform_mesh(0.1, 5)));
    for (const auto& row : rep.rows) {
      CHECK(row.grad_sq == 0.0);
      CHECK(row.lap_integral == 0.0);
      CHECK(row.energy == 0.0);
    }
  }
  CHECK(kind_of([] { energy_report(Trajectory{}); }) == ErrorKind::EmptyTrajectory);
}

TEST_CASE("analyticity radius") {
  const int N = 32;
  SUBCASE("planted exponential decay") {
    SpectralField f(N, 1);
    for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
      if (!n.is_zero()) f(0, idx) = std::exp(-0.3 * std::sqrt(static_cast<double>(n.norm_sq())));
    });
    const AnalyticityFit fit = analyticity_radius(f);
    CHECK(fit.rate == doctest::Approx(0.3).epsilon(0.05));
    CHECK(fit.r_squared > 0.999);
    CHECK(fit.shells >= 4);
  }
  SUBCASE("heat flow rate grows like sqrt(t)") {
    const SpectralField u = random_solenoidal(N, 71, RandomBand{10, 1, 300});
    std::vector<double> ts, rates;
    for (double t : {0.01, 0.02, 0.04, 0.08}) {
      ts.push_back(t);
      rates.push_back(analyticity_radius(heat_semigroup(u, t)).rate);
    }
    double c = 1e300;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) CHECK(rates[i] > rates[i - 1]);
      c = std::min(c, rates[i] / std::sqrt(ts[i]));
    }
    CHECK(c > 0.0);
  }
  SUBCASE("single mode is degenerate") {
    SpectralField f(N, 1);
    f.at(0, {1, 0, 0}) = 1.0;
    CHECK(kind_of([&] { analyticity_radius(f); }) == ErrorKind::DegenerateFit);
    CHECK(std::isnan(diagnose(random_beltrami(N, 1, 1, 1)).analyticity_rate));
  }
}
