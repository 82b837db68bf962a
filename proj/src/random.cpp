#include "nslab/random.hpp"

#include <cmath>
#include <numbers>

#include "nslab/error.hpp"

namespace nslab {

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex{re, im} * (1.0 / std::numbers::sqrt2);
}

namespace {

// Visits each +/- pair of the band once, through its lexicographically larger
// member n > 0.
template <class F>
void for_each_half_band(int N, const RandomBand& band, F&& f) {
  if (3 * band.box > N)
    throw Error(ErrorKind::InvalidArgument, "random band is not resolved (dealiased) on this grid");
  const int B = band.box;
  for (int a = -B; a <= B; ++a)
    for (int b = -B; b <= B; ++b)
      for (int c = -B; c <= B; ++c) {
        const Wavevector n{a, b, c};
        const int m = n.norm_sq();
        if (m < std::max(1, band.kmin_sq) || m > band.kmax_sq) continue;
        if (!(Wavevector{} < n)) continue;
        f(n);
      }
}

double band_weight(const Wavevector& n, const RandomBand& band) {
  return band.decay == 0.0 ? 1.0 : std::pow(static_cast<double>(n.norm_sq()), -0.5 * band.decay);
}

}  // namespace

SpectralField random_solenoidal(int N, std::uint64_t seed, const RandomBand& band) {
  Rng rng(seed);
  SpectralField f(N, 3, true);
  const GridIndex g{N};
  for_each_half_band(N, band, [&](const Wavevector& n) {
    CVec3 v{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
    const double k2 = n.norm_sq();
    const Complex kv = static_cast<double>(n.n1) * v[0] + static_cast<double>(n.n2) * v[1] +
                       static_cast<double>(n.n3) * v[2];
    const double w = band_weight(n, band);
    const std::size_t i = g.index(n);
    const std::size_t j = g.index(-n);
    for (int c = 0; c < 3; ++c) {
      const Complex val = w * (v[c] - static_cast<double>(n[c]) * kv / k2);
      f(c, i) = val;
      f(c, j) = std::conj(val);
    }
  });
  return f;
}

SpectralField random_real(int N, int components, std::uint64_t seed, const RandomBand& band) {
  Rng rng(seed);
  SpectralField f(N, components, true);
  const GridIndex g{N};
  for_each_half_band(N, band, [&](const Wavevector& n) {
    const double w = band_weight(n, band);
    const std::size_t i = g.index(n);
    const std::size_t j = g.index(-n);
    for (int c = 0; c < components; ++c) {
      const Complex val = w * rng.complex_normal();
      f(c, i) = val;
      f(c, j) = std::conj(val);
    }
  });
  return f;
}

}  // namespace nslab
