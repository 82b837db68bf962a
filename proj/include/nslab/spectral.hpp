#pragma once

#include <array>
#include <string_view>

#include "nslab/fft.hpp"
#include "nslab/field.hpp"

namespace nslab {

// Linear Fourier multipliers. All are exact coefficient-wise maps.

/// Leray projector delta_ij - n_i n_j / |n|^2; the zero mode passes through.
SpectralField leray_project(const SpectralField& f);
/// i n x u_n.
SpectralField curl(const SpectralField& f);
/// (-Delta)^{-1} curl; requires a mean-zero, divergence-free input.
SpectralField inverse_curl(const SpectralField& f);
/// exp(-|n|^2 t) u_n.
SpectralField heat_semigroup(const SpectralField& f, double t);
/// |n|^s u_n; for s < 0 the input must be mean-zero and the zero mode is dropped.
SpectralField fractional_laplacian(const SpectralField& f, double s);
/// -|n|^2 u_n.
SpectralField laplacian(const SpectralField& f);
/// Scalar -> vector (i n phi), vector -> tensor with entry [3i+j] = d_j u_i.
SpectralField gradient(const SpectralField& f);
/// Vector -> scalar (i n.u), tensor -> vector with row i = sum_j d_j G_ij.
SpectralField divergence(const SpectralField& f);
/// Zeroes every mode with some |n_i| > N/3.
SpectralField dealias(const SpectralField& f);
bool is_dealiased(const SpectralField& f);

/// max_n |n.u_n| / max_n |n||u_n| (0 for a zero field).
double divergence_residual(const SpectralField& f);
void require_mean_zero(const SpectralField& f, std::string_view who);
void require_divergence_free(const SpectralField& f, std::string_view who);

// Products. Inputs are transformed to the grid, multiplied pointwise and the
// result is transformed back and dealiased (2/3 rule).

SpectralField product_cross(const SpectralField& a, const SpectralField& b);
SpectralField product_dot(const SpectralField& a, const SpectralField& b);
/// (a . grad) b for vector fields.
SpectralField product_advect(const SpectralField& a, const SpectralField& b);
/// Tensor a_i b_j at [3i+j].
SpectralField product_outer(const SpectralField& a, const SpectralField& b);

/// sup-norm of (b.grad h + h.grad b) - (-b x curl h - h x curl b + grad(b.h)),
/// both sides assembled from dealiased physical-space products.
double rotation_form_identity(const SpectralField& b, const SpectralField& h);

/// Heat kernel K(x,t) = t^{-3/2} exp(-|x|^2 / 4t) differentiated m times in t
/// and along the multi-index alpha in x.
struct HeatKernelDerivative {
  double value = 0.0;             // K * P(x, 1/t) from the symbolic recursion
  double factorized_value = 0.0;  // t^{-(m+k/2)} K J(x / sqrt t)
  double relative_discrepancy = 0.0;
  int polynomial_degree = 0;      // degree of J, at most k + 2m
  bool homogeneous = true;        // every term scales as t^{-(m+k/2)}
};

HeatKernelDerivative heat_kernel_eval(const std::array<double, 3>& x, double t, int m,
                                      const std::array<int, 3>& alpha);

}  // namespace nslab
