#pragma once

#include <cmath>

#include "nslab/fft.hpp"
#include "nslab/spectral.hpp"

namespace nslab::testing {

/// (sin x cos y cos z, -cos x sin y cos z, 0) + a second TG cell with k_y = 2, scaled by amp.
inline SpectralField taylor_green(int N, double amp) {
  PhysicalField p{N, 3, std::vector<Complex>(3 * static_cast<std::size_t>(N) * N * N)};
  const double h = 2.0 * M_PI / N;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const double x = a * h, y = b * h, z = c * h;
        const std::size_t i = (static_cast<std::size_t>(a) * N + b) * N + c;
        p.component(0)[i] = amp * (std::sin(x) * std::cos(y) * std::cos(z) +
                                   0.5 * std::sin(x) * std::cos(2 * y) * std::cos(z));
        p.component(1)[i] = amp * (-std::cos(x) * std::sin(y) * std::cos(z) -
                                   0.25 * std::cos(x) * std::sin(2 * y) * std::cos(z));
        p.component(2)[i] = 0.0;
      }
  SpectralField f = leray_project(to_spectral(p, true));
  f.set_real(true);
  return f;
}

}  // namespace nslab::testing
