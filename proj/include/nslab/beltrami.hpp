#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Every n with |n|^2 = lambda_sq, lexicographic. EmptyShell for 4^a(8b+7).
std::vector<Wavevector> lattice_shell(int lambda_sq);
bool is_sum_of_three_squares(int m);

struct HelicalPair {
  CVec3 plus;   // i n x h = +|n| h
  CVec3 minus;  // i n x h = -|n| h
};

/// e1 = (n x a)/|n x a| with a = e3 unless n is parallel to e3 (then a = e1),
/// e2 = n/|n| x e1, h(+/-) = (e1 +/- i e2)/sqrt 2.
HelicalPair helical_basis(const Wavevector& n);

struct ShellBasis {
  int lambda_sq = 0;
  std::vector<Wavevector> wavevectors;
  std::vector<HelicalPair> helical_pairs;
};

ShellBasis shell_basis(int lambda_sq);

/// sum_n a_n h(sign)(n) exp(i n.x) over the shell, amplitudes in shell order.
/// The result is flagged real when the amplitudes make it Hermitian.
SpectralField beltrami_field(int N, int lambda_sq, int sign, const std::vector<Complex>& amplitudes);
/// Real Beltrami field with Gaussian amplitudes, scaled to unit l2 norm.
SpectralField random_beltrami(int N, int lambda_sq, int sign, std::uint64_t seed);
/// curl u03 + (-Delta)^{1/2} u03 for divergence-free u03.
SpectralField beltrami_from_potential(const SpectralField& u03);

/// Per-mode helical amplitudes: u_n = a+(n) h+(n) + a-(n) h-(n).
struct HelicalDecomposition {
  int N = 0;
  std::vector<Complex> plus;
  std::vector<Complex> minus;
};

HelicalDecomposition helical_decompose(const SpectralField& u);
/// sign = +1 or -1 keeps one helicity, 0 keeps both.
SpectralField helical_reconstruct(const HelicalDecomposition& d, int sign = 0);

struct PmSplit {
  SpectralField plus;
  SpectralField minus;
};

/// (u0 +/- (-Delta)^{-1/2} curl u0) / 2.
PmSplit split_pm(const SpectralField& u0);
/// Same split through the helical eigenbasis.
PmSplit split_pm_eigen(const SpectralField& u0);

struct BandSplit {
  SpectralField u1p;  // + helicity, |n| <= lambda/2 or |n| >= 2 lambda
  SpectralField u2p;  // + helicity, lambda/2 < |n| < 2 lambda
  SpectralField u0m;  // - helicity
};

BandSplit band_split(const SpectralField& u0, double lambda);
/// True when lambda/2 < sqrt(norm_sq) < 2 lambda, boundaries excluded.
bool in_band(int norm_sq, double lambda);

struct ShellSpec {
  int lambda_sq = 1;
  double amplitude = 1.0;  // l2 norm of the shell field
};

struct AdmissibilityReport {
  bool ordered = false;       // 1 <= lambda_1 < ... < lambda_N
  double spread = 0.0;        // lambda_N - lambda_1
  double spread_bound = 0.0;  // epsilon lambda_1^{1-b}
  bool spread_ok = false;
  double epsilon1 = 0.0;
  double epsilon1_bound = 0.0;  // eps_threshold lambda_1^{-b} (1 + lambda_1)^{-1}
  bool epsilon1_ok = false;
  bool admissible() const { return ordered && spread_ok && epsilon1_ok; }
};

struct Corollary18Data {
  SpectralField u0;
  SpectralField u01;
  std::vector<SpectralField> phis;
  std::vector<double> lambdas;
  AdmissibilityReport report;
};

/// u0 = sum of real + helicity Beltrami fields on the given shells plus u02.
/// eps_threshold plays the role of the admissible epsilon bound for epsilon1.
Corollary18Data corollary18_data(int N, const std::vector<ShellSpec>& shells, double b,
                                 double epsilon, double epsilon1, double eps_threshold,
                                 const std::optional<SpectralField>& u02, std::uint64_t seed);

}  // namespace nslab
