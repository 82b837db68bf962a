#pragma once

#include <cmath>
#include <functional>

#include "nslab/field.hpp"

namespace nslab::testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Copies the modes of f that fit into an M^3 grid.
inline SpectralField resample(const SpectralField& f, int M) {
  SpectralField g(M, f.components(), f.is_real());
  const GridIndex src{f.grid_size()};
  const GridIndex dst{M};
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    if (!dst.contains(n)) return;
    for (int c = 0; c < f.components(); ++c) g(c, dst.index(n)) = f(c, idx);
  });
  (void)src;
  return g;
}

/// Explicit mode-pair convolution: out_n = sum_{j+k=n} w(j,k) a_j b_k for one
/// component pair, restricted to the grid of a.
inline std::vector<Complex> convolve(const SpectralField& a, int ca, const SpectralField& b, int cb,
                                     const std::function<Complex(const Wavevector&, const Wavevector&)>& w) {
  const GridIndex g{a.grid_size()};
  std::vector<Complex> out(a.modes());
  for_each_mode(a.grid_size(), [&](std::size_t i, const Wavevector& j) {
    if (a(ca, i) == Complex{}) return;
    for_each_mode(b.grid_size(), [&](std::size_t k_idx, const Wavevector& k) {
      if (b(cb, k_idx) == Complex{}) return;
      const Wavevector n{j.n1 + k.n1, j.n2 + k.n2, j.n3 + k.n3};
      if (!g.contains(n)) return;
      out[g.index(n)] += w(j, k) * a(ca, i) * b(cb, k_idx);
    });
  });
  return out;
}

}  // namespace nslab::testing
