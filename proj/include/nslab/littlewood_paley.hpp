#pragma once

#include "nslab/field.hpp"
#include "nslab/norms.hpp"

namespace nslab {

/// Dyadic partition of unity psi(2^-j xi), j = -1..J, on the resolvable modes
/// of an N^3 grid. phi(r) = 1 for r <= 1/2, 0 for r >= 2 and
/// 1 - s((log2 r + 1)/2) in between, with the smooth step
/// s(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}); psi(xi) = phi(|xi|/2) - phi(|xi|).
class LPFilter {
 public:
  explicit LPFilter(int N);

  int grid_size() const { return N_; }
  int min_level() const { return -1; }
  int max_level() const { return max_level_; }

  static double phi(double r);
  static double psi(double r);
  /// psi(2^-j |n|).
  double weight(int j, double norm) const;

 private:
  int N_;
  int max_level_;
};

SpectralField lp_block(const SpectralField& f, const LPFilter& filter, int j);

enum class BesovQ { Two, Infinity };

/// q = infinity: sup_j 2^{js} |P_j f|_inf; q = 2: the l2 sum over levels.
NormReport besov_norm(const SpectralField& f, double s, BesovQ q);

/// C_n = sum_{j+k=n} a_j b_k / (|j| + |k|), component by component, outputs
/// outside the grid dropped and the result dealiased.
SpectralField bilinear_symbol_op(const SpectralField& g, const SpectralField& h);

struct BesovProductReport {
  double numerator = 0.0;    // |F|_{B^kappa}
  double g_norm = 0.0;       // |g|_{B^{kappa-1+a}}
  double h_norm = 0.0;       // |h|_{B^{-a}}
  double ratio = 0.0;        // 0 when the numerator vanishes
};

/// Requires 1/2 < a < 1 and 0 < kappa < 1 - a.
BesovProductReport besov_product_check(const SpectralField& g, const SpectralField& h, double a,
                                       double kappa);

}  // namespace nslab
