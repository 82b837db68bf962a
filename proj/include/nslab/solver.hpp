#pragma once

#include <utility>
#include <vector>

#include "nslab/field.hpp"
#include "nslab/norms.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

struct SolverConfig {
  double dt = 1e-3;
  double T = 0.1;
  int record_every = 1;
  bool dealias = true;
  double instability_factor = 1e3;  // energy growth that aborts a run
};

/// dt <= 0.5 (N/3)^-2.
double stability_bound(int N);
void validate(const SolverConfig& cfg, int N);

/// Mean-zero P with Delta P + div(u . grad u) = 0 (dealiased nonlinearity).
SpectralField pressure(const SpectralField& u);

/// Nonlinear term P(u x curl u) of the rotation form, dealiased.
SpectralField rotation_nonlinearity(const SpectralField& u);

/// Integrating-factor RK4 for u_t = Delta u + P(u x curl u). The step is
/// T / ceil(T / dt), so it never exceeds cfg.dt. Diagnostics carry the
/// cumulative dissipation 2 int |grad u|^2 in `dissipation`.
Trajectory solve(const SpectralField& u0, const SolverConfig& cfg);

/// v(t) = S(t) u01 + int_0^t S(t - tau) Q(tau) dtau with
/// Q = -P div((u + v~) (x) (u + v~)), exponential trapezoid on the common mesh.
Trajectory duhamel_map(const Trajectory& v_tilde, const Trajectory& u_traj, const SpectralField& u01,
                       double T1);

/// Stokes solution V(t) = int_0^t S(t - tau) P div G(tau) dtau for a tensor
/// source sampled on a mesh starting at 0.
Trajectory stokes_duhamel(const Trajectory& G);

struct PicardReport {
  int iterates = 0;
  std::vector<double> differences;  // |v(k+1) - v(k)|_{X_T1}
  std::vector<double> ratios;
  bool converged = false;
  double T1 = 0.0;
};

std::pair<Trajectory, PicardReport> picard_solve(const SpectralField& u01, const Trajectory& u_traj,
                                                 double T1, double tol = 1e-8, int max_iter = 50);

/// C eps^2 <lambda>^{-(2b+4)}, <lambda> = sqrt(1 + lambda^2).
double t1_horizon(double M0, double epsilon, double lambda, double b, double C);

struct EnergyRow {
  double t = 0.0;
  double grad_sq = 0.0;        // |grad v|^2
  double lap_integral = 0.0;   // int_0^t |Delta v|^2
  double energy = 0.0;         // |v|^2
  double identity_residual = 0.0;  // energy identity over the interval ending at t
};

struct EnergyReport {
  std::vector<EnergyRow> rows;
  double max_identity_residual = 0.0;
};

EnergyReport energy_report(const Trajectory& tr);

struct AnalyticityFit {
  double rate = 0.0;
  double r_squared = 0.0;
  int shells = 0;
};

/// Least-squares fit of log max_{|n|^2 = m} |u_n| against sqrt(m) over
/// dealiased shells with amplitude above 1e-14; returns minus the slope.
AnalyticityFit analyticity_radius(const SpectralField& f);

/// Energy, enstrophy, sup norm, divergence residual and analyticity rate.
Diagnostics diagnose(const SpectralField& u);

/// a - b sample by sample on a common mesh.
Trajectory difference(const Trajectory& a, const Trajectory& b);

}  // namespace nslab
