#pragma once

#include <array>
#include <string>
#include <vector>

#include "nslab/field.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

/// One time node of a cylinder quadrature.
struct TimeNode {
  double t;
  double weight;
};

/// Parabolic cylinders B(y0, r) x (0, r^2] used to evaluate Carleson sups.
struct CylinderGrid {
  int N = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  int center_stride = 1;
  int radii_per_octave = 1;
  int nodes_per_level = 4;
  std::vector<double> radii;  // ascending, last one is r_max

  /// r_min defaults to the grid spacing 2 pi / N; r_max to the half period pi.
  static CylinderGrid make(int N, int center_stride = 1, int radii_per_octave = 1,
                           int nodes_per_level = 4, double r_min = 0.0, double r_max = 0.0);

  /// Composite midpoint rule on (r^2/2^{i+1}, r^2/2^i] down to r_min^2, then
  /// one more level on (0, floor].
  std::vector<TimeNode> time_nodes(double r) const;
  /// Grid indices (j1, j2, j3) of the centers, in storage order.
  std::vector<std::array<int, 3>> centers() const;
  std::string describe() const;
};

struct NormReport {
  std::string name;
  double value = 0.0;
  double sup_part = 0.0;       // weighted sup-in-time part (space-time norms)
  double carleson_part = 0.0;  // cylinder part
  std::array<int, 3> argmax_center{0, 0, 0};
  double argmax_radius = 0.0;
  double argmax_time = 0.0;
  int argmax_level = 0;
  std::string metadata;
};

/// Ball of radius r around the origin in periodic distance on the N^3 grid.
struct BallStencil {
  double radius = 0.0;
  double volume = 0.0;  // 4 pi r^3 / 3
  std::size_t count = 0;
  std::vector<double> indicator;  // N^3
};

BallStencil ball_stencil(int N, double r);

/// Accumulates sum_t w_r(t) rho(x, t) per radius and then takes the sup over
/// centers and radii of (r^-p (vol_r / count_r) sum_{x in B(y, r)} ...)^q,
/// where q = 1/2 for square densities and 1 otherwise.
class CarlesonAccumulator {
 public:
  CarlesonAccumulator(int N, std::vector<double> radii, double r_power, double outer_power);

  const std::vector<double>& radii() const { return radii_; }
  void add(std::size_t radius_index, const std::vector<double>& density, double weight);

  struct Result {
    double value = 0.0;
    std::array<int, 3> center{0, 0, 0};
    double radius = 0.0;
  };
  Result sup(int center_stride) const;

 private:
  int N_;
  std::vector<double> radii_;
  double r_power_;
  double outer_power_;
  std::vector<std::vector<double>> integrated_;
};

/// Pointwise |f|^2 summed over components, on the grid.
std::vector<double> density_sq(const SpectralField& f);
/// Pointwise |grad^k f|^2 summed over all components and derivative indices.
std::vector<double> derivative_density_sq(const SpectralField& f, int k);

NormReport bmo_minus1_norm(const SpectralField& f, const CylinderGrid& grid);
/// Same with |grad W|^2 as density.
NormReport bmo_norm(const SpectralField& f, const CylinderGrid& grid);
/// sum_i [g_i]_{BMO^-1} for the representative g_i = d_i Delta^{-1} f; an upper
/// bound of the infimum over all representations.
NormReport bmo_minus2_upper(const SpectralField& f, const CylinderGrid& grid);
/// The representative used above; sum_i d_i g_i = f.
std::array<SpectralField, 3> bmo_minus2_representative(const SpectralField& f);
/// sum_i [g_i]_{BMO} with g_i = d_i Delta^{-1} f (divergence-form BMO^-1 bound).
NormReport bmo_minus1_divergence_form(const SpectralField& f, const CylinderGrid& grid);

enum class CarlesonDensity { Value, Gradient };

/// (r^-3 int_Q |W|^2)^{1/2} for one cylinder, by direct summation over the
/// ball; independent of the convolution path used for the sup.
double cylinder_value(const SpectralField& f, const std::array<int, 3>& center, double r,
                      const CylinderGrid& grid, CarlesonDensity density = CarlesonDensity::Value);

/// Radii of the grid below sqrt(T), then min(sqrt(T), pi).
std::vector<double> horizon_radii(int N, double T, int radii_per_octave = 1);

/// sup_t t^{1/2} |g|_inf + sup (r^-3 int_Q |g|^2)^{1/2}, 0 < t, r^2 <= T.
NormReport x_norm(const Trajectory& tr, double T, int center_stride = 1);
/// sup_t t |g|_inf + sup r^-3 int_Q |g|.
NormReport y_norm(const Trajectory& tr, double T, int center_stride = 1);
/// sup_t t^{(1-d)/2} |g|_inf + sup (r^{-(1+2d)} int_Q |g|^2)^{1/2}.
NormReport z_norm(const Trajectory& tr, double T, double d, int center_stride = 1);
/// Sum over m <= M, k <= K of the weighted sup of d_t^m grad^k g and the
/// Carleson average of t^{k/2+m} d_t^m grad^k g.
NormReport xmk_norm(const Trajectory& tr, double T, int M, int K, int center_stride = 1);
/// (int_0^T |g|_inf^2 dt)^{1/2} by the trapezoid rule on the samples.
double l2_time_sup(const Trajectory& tr, double T);

}  // namespace nslab
