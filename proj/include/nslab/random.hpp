#pragma once

#include <cstdint>
#include <random>

#include "nslab/field.hpp"

namespace nslab {

/// mt19937_64 with a hand-rolled Box-Muller transform, so draws are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1).
  double uniform();
  double normal();
  /// Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Band of wavevectors for random fields: kmin_sq <= |n|^2 <= kmax_sq and
/// |n_i| <= box. Amplitudes are scaled by |n|^-decay.
struct RandomBand {
  int box = 2;
  int kmin_sq = 1;
  int kmax_sq = 1 << 20;
  double decay = 0.0;
};

/// Real, mean-zero, divergence-free field. Modes are drawn in lexicographic
/// order of n over the band, independently of N, so the same seed gives the
/// same continuous field on every grid that resolves the band.
SpectralField random_solenoidal(int N, std::uint64_t seed, const RandomBand& band);
/// Real mean-zero field with 1 or 9 components, same drawing rule.
SpectralField random_real(int N, int components, std::uint64_t seed, const RandomBand& band);

}  // namespace nslab
