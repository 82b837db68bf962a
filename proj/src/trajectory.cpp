#include "nslab/trajectory.hpp"

#include <cmath>

#include "nslab/error.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

void Trajectory::push(double t, SpectralField field, const Diagnostics& diag) {
  if (!times_.empty() && !(t > times_.back()))
    throw Error(ErrorKind::InvalidArgument, "trajectory times must increase strictly");
  if (!fields_.empty() && !field.same_shape(fields_.front()))
    throw Error(ErrorKind::InvalidArgument, "trajectory samples must share one shape");
  if (check_divergence_ && field.components() == 3 && divergence_residual(field) > 1e-11)
    throw Error(ErrorKind::NotDivergenceFree, "trajectory sample has divergence");
  times_.push_back(t);
  fields_.push_back(std::move(field));
  diagnostics_.push_back(diag);
}

namespace {

SpectralField nonlinear_term(const SpectralField& u) {
  return leray_project(divergence(product_outer(u, u))) * -1.0;
}

// -P div(a (x) b + b (x) a)
SpectralField symmetric_nonlinear(const SpectralField& a, const SpectralField& b) {
  SpectralField t = product_outer(a, b);
  t += product_outer(b, a);
  return leray_project(divergence(t)) * -1.0;
}

// Derivative of the Lagrange interpolant through samples i0 < i1 < i2 at time t.
SpectralField lagrange_derivative(const Trajectory& tr, std::size_t i0, std::size_t i1,
                                  std::size_t i2, double t, int m) {
  const double t0 = tr.time(i0), t1 = tr.time(i1), t2 = tr.time(i2);
  double w0, w1, w2;
  if (m == 1) {
    w0 = ((t - t1) + (t - t2)) / ((t0 - t1) * (t0 - t2));
    w1 = ((t - t0) + (t - t2)) / ((t1 - t0) * (t1 - t2));
    w2 = ((t - t0) + (t - t1)) / ((t2 - t0) * (t2 - t1));
  } else {
    w0 = 2.0 / ((t0 - t1) * (t0 - t2));
    w1 = 2.0 / ((t1 - t0) * (t1 - t2));
    w2 = 2.0 / ((t2 - t0) * (t2 - t1));
  }
  SpectralField out = tr.field(i0) * w0;
  out += tr.field(i1) * w1;
  out += tr.field(i2) * w2;
  return out;
}

}  // namespace

SpectralField navier_stokes_rhs(const SpectralField& u) { return laplacian(u) + nonlinear_term(u); }

SpectralField Trajectory::time_derivative(std::size_t k, int m) const {
  if (m < 0 || m > 2) throw Error(ErrorKind::BadExponent, "time derivatives of order 0..2 only");
  if (k >= size()) throw Error(ErrorKind::InvalidArgument, "sample index out of range");
  const SpectralField& u = fields_[k];
  if (m == 0) return u;
  switch (kind_) {
    case FlowKind::Heat:
      return m == 1 ? laplacian(u) : laplacian(laplacian(u));
    case FlowKind::NavierStokes: {
      const SpectralField du = navier_stokes_rhs(u);
      if (m == 1) return du;
      return laplacian(du) + symmetric_nonlinear(du, u);
    }
    case FlowKind::Generic:
      break;
  }
  if (size() < 3) throw Error(ErrorKind::EmptyTrajectory, "divided differences need 3 samples");
  const std::size_t i1 = std::min(std::max<std::size_t>(k, 1), size() - 2);
  return lagrange_derivative(*this, i1 - 1, i1, i1 + 1, times_[k], m);
}

Trajectory heat_extension(const SpectralField& f, const std::vector<double>& times) {
  Trajectory tr(FlowKind::Heat);
  tr.set_check_divergence(false);
  for (double t : times) {
    if (t < 0.0) throw Error(ErrorKind::NegativeTime, "heat extension at negative time");
    tr.push(t, heat_semigroup(f, t));
  }
  return tr;
}

std::vector<double> log_times(double t_min, double T, int per_level, bool include_zero) {
  if (!(t_min > 0.0) || !(T >= t_min) || per_level < 1)
    throw Error(ErrorKind::InvalidArgument, "log_times needs 0 < t_min <= T");
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  const int count = static_cast<int>(std::ceil(per_level * std::log2(T / t_min) - 1e-9));
  for (int i = count; i >= 1; --i) out.push_back(T * std::exp2(-static_cast<double>(i) / per_level));
  out.push_back(T);
  return out;
}

Trajectory heat_trajectory(const SpectralField& f, double T, double t_min, int per_level) {
  return heat_extension(f, log_times(t_min, T, per_level, true));
}

}  // namespace nslab
