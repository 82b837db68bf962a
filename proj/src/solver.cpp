#include "nslab/solver.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "nslab/error.hpp"
#include "nslab/fft.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

double stability_bound(int N) {
  const double kmax = N / 3.0;
  return 0.5 / (kmax * kmax);
}

void validate(const SolverConfig& cfg, int N) {
  if (!(cfg.dt > 0.0)) throw Error(ErrorKind::BadConfig, "dt must be positive");
  if (!(cfg.T > 0.0)) throw Error(ErrorKind::BadConfig, "T must be positive");
  if (cfg.record_every < 1) throw Error(ErrorKind::BadConfig, "record_every must be >= 1");
  if (cfg.dt > stability_bound(N) * (1.0 + 1e-12))
    throw Error(ErrorKind::BadConfig, "dt exceeds the stability bound 0.5 (N/3)^-2 = " +
                                          std::to_string(stability_bound(N)));
  if (!cfg.dealias) throw Error(ErrorKind::BadConfig, "the solver always dealiases");
}

SpectralField pressure(const SpectralField& u) {
  require_mean_zero(u, "pressure");
  require_divergence_free(u, "pressure");
  const SpectralField a = product_advect(u, u);
  SpectralField p(u.grid_size(), 1, u.is_real(), "pressure");
  for_each_mode(u.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    Complex s{};
    for (int j = 0; j < 3; ++j) s += static_cast<double>(n[j]) * a(j, idx);
    p(0, idx) = Complex{0.0, 1.0} * s / static_cast<double>(n.norm_sq());
  });
  return p;
}

SpectralField rotation_nonlinearity(const SpectralField& u) {
  return leray_project(product_cross(u, curl(u)));
}

namespace {

double energy_of(const SpectralField& u) {
  double e = 0.0;
  for (const auto& v : u.coeffs()) e += std::norm(v);
  return e;
}

double weighted_sum(const SpectralField& u, int power) {
  double s = 0.0;
  for_each_mode(u.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    double w = 1.0;
    for (int p = 0; p < power; ++p) w *= n.norm_sq();
    for (int c = 0; c < u.components(); ++c) s += w * std::norm(u(c, idx));
  });
  return s;
}

// d/dt of the enstrophy sum |n|^2 |u_n|^2 given du/dt.
double enstrophy_rate(const SpectralField& u, const SpectralField& du) {
  double s = 0.0;
  for_each_mode(u.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    for (int c = 0; c < 3; ++c) s += 2.0 * n.norm_sq() * std::real(std::conj(u(c, idx)) * du(c, idx));
  });
  return s;
}

class HeatFactors {
 public:
  HeatFactors(int N, double h) : N_(N), full_(GridIndex{N}.size()), half_(full_.size()) {
    for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
      full_[idx] = std::exp(-n.norm_sq() * h);
      half_[idx] = std::exp(-n.norm_sq() * 0.5 * h);
    });
  }
  SpectralField full(const SpectralField& f) const { return apply(f, full_); }
  SpectralField half(const SpectralField& f) const { return apply(f, half_); }

 private:
  static SpectralField apply(const SpectralField& f, const std::vector<double>& m) {
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
      auto comp = out.component(c);
      for (std::size_t i = 0; i < m.size(); ++i) comp[i] *= m[i];
    }
    return out;
  }
  int N_;
  std::vector<double> full_;
  std::vector<double> half_;
};

}  // namespace

Diagnostics diagnose(const SpectralField& u) {
  Diagnostics d;
  d.energy = energy_of(u);
  d.enstrophy = weighted_sum(u, 1);
  d.sup_norm = sup_norm(u);
  d.div_residual = u.components() == 3 ? divergence_residual(u) : 0.0;
  try {
    d.analyticity_rate = analyticity_radius(u).rate;
  } catch (const Error&) {
    d.analyticity_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

Trajectory solve(const SpectralField& u0_in, const SolverConfig& cfg) {
  const int N = u0_in.grid_size();
  validate(cfg, N);
  if (u0_in.components() != 3) throw Error(ErrorKind::InvalidArgument, "solve expects a vector field");
  require_mean_zero(u0_in, "solve");
  require_divergence_free(u0_in, "solve");
  if (!u0_in.is_real()) throw Error(ErrorKind::InvalidArgument, "solve expects real initial data");

  SpectralField u = dealias(u0_in);
  const long steps = static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9));
  const double h = cfg.T / static_cast<double>(steps);
  const HeatFactors E(N, h);

  Trajectory tr(FlowKind::NavierStokes);
  const double e0 = energy_of(u);
  double dissipation = 0.0;
  tr.push(0.0, u, diagnose(u));

  SpectralField k1 = rotation_nonlinearity(u);
  double D = weighted_sum(u, 1);
  double dD = enstrophy_rate(u, laplacian(u) + k1);
  for (long step = 1; step <= steps; ++step) {
    const SpectralField a = E.half(u + k1 * (0.5 * h));
    const SpectralField k2 = rotation_nonlinearity(a);
    const SpectralField b = E.half(u) + k2 * (0.5 * h);
    const SpectralField k3 = rotation_nonlinearity(b);
    const SpectralField c = E.full(u) + E.half(k3) * h;
    const SpectralField k4 = rotation_nonlinearity(c);

    SpectralField incr = E.full(k1);
    incr += E.half(k2 + k3) * 2.0;
    incr += k4;
    u = E.full(u) + incr * (h / 6.0);
    u.set_real(true);

    const double e = energy_of(u);
    if (!std::isfinite(e) || (e0 > 0.0 && e > cfg.instability_factor * e0))
      throw Error(ErrorKind::Instability, "energy grew beyond the instability threshold at t = " +
                                              std::to_string(step * h));

    k1 = rotation_nonlinearity(u);
    const double D_next = weighted_sum(u, 1);
    const double dD_next = enstrophy_rate(u, laplacian(u) + k1);
    dissipation += 2.0 * (0.5 * h * (D + D_next) + h * h / 12.0 * (dD - dD_next));
    D = D_next;
    dD = dD_next;

    if (step % cfg.record_every == 0 || step == steps) {
      Diagnostics d = diagnose(u);
      d.dissipation = dissipation;
      tr.push(step * h, u, d);
    }
  }
  return tr;
}

namespace {

void require_common_mesh(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::MeshMismatch, "trajectories have different sample counts");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.time(k) - b.time(k)) > 1e-12 * std::max(1.0, std::abs(a.time(k))))
      throw Error(ErrorKind::MeshMismatch, "trajectories are sampled at different times");
}

// V(t_{k+1}) = S(d) V(t_k) + d/2 (S(d) Q_k + Q_{k+1}).
Trajectory exponential_trapezoid(const std::vector<double>& times, const SpectralField& v0,
                                 const std::vector<SpectralField>& Q) {
  Trajectory out(FlowKind::Generic);
  out.set_check_divergence(false);  // roundoff-sized iterates fail a relative check
  SpectralField v = v0;
  out.push(times.front(), v);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double d = times[k + 1] - times[k];
    v = heat_semigroup(v + Q[k] * (0.5 * d), d) + Q[k + 1] * (0.5 * d);
    v.set_real(v0.is_real() && Q[k].is_real());
    out.push(times[k + 1], v);
  }
  return out;
}

}  // namespace

Trajectory duhamel_map(const Trajectory& v_tilde, const Trajectory& u_traj, const SpectralField& u01,
                       double T1) {
  require_common_mesh(v_tilde, u_traj);
  if (u_traj.empty() || u_traj.time(0) != 0.0 || u_traj.times().back() < T1 * (1.0 - 1e-12))
    throw Error(ErrorKind::MeshMismatch, "mesh must start at 0 and cover [0, T1]");
  require_mean_zero(u01, "duhamel_map");
  require_divergence_free(u01, "duhamel_map");
  std::vector<SpectralField> Q;
  Q.reserve(u_traj.size());
  for (std::size_t k = 0; k < u_traj.size(); ++k) {
    const SpectralField w = u_traj.field(k) + v_tilde.field(k);
    Q.push_back(leray_project(divergence(product_outer(w, w))) * -1.0);
  }
  Trajectory out = exponential_trapezoid(u_traj.times(), u01, Q);
  return out;
}

Trajectory stokes_duhamel(const Trajectory& G) {
  if (G.empty() || G.time(0) != 0.0) throw Error(ErrorKind::MeshMismatch, "mesh must start at 0");
  if (G.field(0).components() != 9) throw Error(ErrorKind::InvalidArgument, "Stokes source must be a tensor");
  std::vector<SpectralField> Q;
  for (std::size_t k = 0; k < G.size(); ++k) Q.push_back(leray_project(divergence(G.field(k))));
  return exponential_trapezoid(G.times(), zeros_like(Q.front()), Q);
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  require_common_mesh(a, b);
  Trajectory out(FlowKind::Generic);
  out.set_check_divergence(false);
  for (std::size_t k = 0; k < a.size(); ++k) out.push(a.time(k), a.field(k) - b.field(k));
  return out;
}

std::pair<Trajectory, PicardReport> picard_solve(const SpectralField& u01, const Trajectory& u_traj,
                                                 double T1, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
  PicardReport rep;
  rep.T1 = T1;
  Trajectory v = heat_extension(u01, u_traj.times());
  v.set_kind(FlowKind::Generic);
  for (int it = 0; it < max_iter; ++it) {
    Trajectory next = duhamel_map(v, u_traj, u01, T1);
    const double d = x_norm(difference(next, v), T1).value;
    rep.iterates += 1;
    if (!rep.differences.empty()) {
      const double prev = rep.differences.back();
      rep.ratios.push_back(prev > 0.0 ? d / prev : 0.0);
    }
    rep.differences.push_back(d);
    v = std::move(next);
    if (d < tol) {
      rep.converged = true;
      break;
    }
    if (!rep.ratios.empty() && rep.ratios.back() >= 1.0)
      throw Error(ErrorKind::NoConvergence, "Picard ratio " + std::to_string(rep.ratios.back()) +
                                                " >= 1 at iterate " + std::to_string(rep.iterates));
  }
  v.set_kind(FlowKind::Generic);
  return {std::move(v), rep};
}

double t1_horizon(double M0, double epsilon, double lambda, double b, double C) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::BadExponent, "b must lie in (0, 1)");
  if (!(M0 > 0.0) || !(epsilon > 0.0) || !(C > 0.0) || lambda < 0.0)
    throw Error(ErrorKind::InvalidArgument, "t1_horizon needs positive M0, epsilon, C and lambda >= 0");
  return C * epsilon * epsilon * std::pow(1.0 + lambda * lambda, -(2.0 * b + 4.0) / 2.0);
}

EnergyReport energy_report(const Trajectory& tr) {
  if (tr.empty()) throw Error(ErrorKind::EmptyTrajectory, "energy_report on an empty trajectory");
  EnergyReport rep;
  double lap_integral = 0.0;
  double prev_lap = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const SpectralField& v = tr.field(k);
    EnergyRow row;
    row.t = tr.time(k);
    row.grad_sq = weighted_sum(v, 1);
    row.energy = energy_of(v);
    const double lap = weighted_sum(v, 2);
    if (k > 0) lap_integral += 0.5 * (tr.time(k) - tr.time(k - 1)) * (lap + prev_lap);
    row.lap_integral = lap_integral;
    prev_lap = lap;
    if (k > 0 && tr.kind() == FlowKind::NavierStokes) {
      const Diagnostics& a = tr.diagnostics()[k - 1];
      const Diagnostics& b = tr.diagnostics()[k];
      const double before = rep.rows.back().energy;
      row.identity_residual =
          before > 0.0 ? std::abs(row.energy + (b.dissipation - a.dissipation) - before) / before : 0.0;
      rep.max_identity_residual = std::max(rep.max_identity_residual, row.identity_residual);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

AnalyticityFit analyticity_radius(const SpectralField& f) {
  const int N = f.grid_size();
  std::map<int, double> shell_max;
  for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    if (3 * std::abs(n.n1) > N || 3 * std::abs(n.n2) > N || 3 * std::abs(n.n3) > N) return;
    double a = 0.0;
    for (int c = 0; c < f.components(); ++c) a += std::norm(f(c, idx));
    a = std::sqrt(a);
    auto& slot = shell_max[n.norm_sq()];
    slot = std::max(slot, a);
  });
  std::vector<double> xs, ys;
  for (const auto& [m, a] : shell_max) {
    if (a <= 1e-14) continue;
    xs.push_back(std::sqrt(static_cast<double>(m)));
    ys.push_back(std::log(a));
  }
  if (xs.size() < 4) throw Error(ErrorKind::DegenerateFit, "fewer than 4 usable shells");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) throw Error(ErrorKind::DegenerateFit, "shell radii do not vary");
  AnalyticityFit fit;
  fit.rate = -cxy / vx;
  fit.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  fit.shells = static_cast<int>(xs.size());
  return fit;
}

}  // namespace nslab
