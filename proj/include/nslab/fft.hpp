#pragma once

#include <span>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Grid-point samples of a field at x_j = 2 pi j / N (the torus [-pi, pi)^3
/// shifted by pi; every quantity computed here is translation invariant).
struct PhysicalField {
  int N = 0;
  int components = 0;
  std::vector<Complex> values;  // component-major, row-major (j1, j2, j3)

  std::size_t points() const { return static_cast<std::size_t>(N) * N * N; }
  std::span<Complex> component(int c) { return {values.data() + c * points(), points()}; }
  std::span<const Complex> component(int c) const {
    return {values.data() + c * points(), points()};
  }
  /// Euclidean norm over components at each grid point.
  std::vector<double> pointwise_norm_sq() const;
  /// max over grid points of the Euclidean norm over components.
  double sup_norm() const;
};

namespace fft {

/// u_j = sum_n c_n exp(i n.x_j), in place, for one N^3 block.
void to_physical_inplace(std::span<Complex> data, int N);
/// c_n = N^-3 sum_j u_j exp(-i n.x_j), in place.
void to_spectral_inplace(std::span<Complex> data, int N);

}  // namespace fft

PhysicalField to_physical(const SpectralField& f);
/// Forward transform; when `real` is set the imaginary parts of the samples
/// are dropped first so the result is exactly Hermitian up to rounding.
SpectralField to_spectral(const PhysicalField& p, bool real);

/// max_x |f(x)| on the grid (Euclidean norm over components).
double sup_norm(const SpectralField& f);

}  // namespace nslab
