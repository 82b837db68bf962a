#pragma once

#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// How the time derivatives of a trajectory are obtained.
enum class FlowKind {
  Generic,       // divided differences between samples
  Heat,          // d/dt = Laplacian
  NavierStokes,  // d/dt u = Laplacian u - P div(u (x) u)
};

struct Diagnostics {
  double energy = 0.0;     // sum |u_n|^2
  double enstrophy = 0.0;  // sum |n|^2 |u_n|^2
  double sup_norm = 0.0;
  double div_residual = 0.0;
  double analyticity_rate = 0.0;  // NaN when the fit is degenerate
  double dissipation = 0.0;       // 2 int_0^t |grad u|^2, filled in by the solver
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(FlowKind kind) : kind_(kind) {}

  /// Appends a sample; times must increase strictly. Three-component samples
  /// must be divergence-free to 1e-11 unless the check is disabled.
  void push(double t, SpectralField field, const Diagnostics& diag = {});

  FlowKind kind() const { return kind_; }
  void set_kind(FlowKind kind) { kind_ = kind; }
  void set_check_divergence(bool on) { check_divergence_ = on; }

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpectralField>& fields() const { return fields_; }
  const std::vector<Diagnostics>& diagnostics() const { return diagnostics_; }
  std::vector<Diagnostics>& diagnostics() { return diagnostics_; }
  const SpectralField& field(std::size_t k) const { return fields_[k]; }
  double time(std::size_t k) const { return times_[k]; }

  /// d^m/dt^m of sample k (m <= 2).
  SpectralField time_derivative(std::size_t k, int m) const;

 private:
  FlowKind kind_ = FlowKind::Generic;
  bool check_divergence_ = true;
  std::vector<double> times_;
  std::vector<SpectralField> fields_;
  std::vector<Diagnostics> diagnostics_;
};

/// W(t) = S(t) f at the given non-negative, increasing times.
Trajectory heat_extension(const SpectralField& f, const std::vector<double>& times);
/// t = 0 and log-spaced times from t_min to T, per_level samples per factor 2.
std::vector<double> log_times(double t_min, double T, int per_level = 8, bool include_zero = true);
Trajectory heat_trajectory(const SpectralField& f, double T, double t_min, int per_level = 8);

/// Navier-Stokes right-hand side Laplacian u - P div(u (x) u), dealiased.
SpectralField navier_stokes_rhs(const SpectralField& u);

}  // namespace nslab
