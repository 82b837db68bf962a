#include "nslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "nslab/error.hpp"

namespace nslab {

namespace {

constexpr Complex I{0.0, 1.0};

void require_components(const SpectralField& f, int c, std::string_view who) {
  if (f.components() != c)
    throw Error(ErrorKind::InvalidArgument,
                std::string(who) + " expects " + std::to_string(c) + " components");
}

CVec3 cross(const std::array<double, 3>& n, const CVec3& u) {
  return {n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
}

std::array<double, 3> as_real(const Wavevector& n) {
  return {static_cast<double>(n.n1), static_cast<double>(n.n2), static_cast<double>(n.n3)};
}

template <class Multiplier>
SpectralField scale_modes(const SpectralField& f, Multiplier&& mult) {
  SpectralField out = f;
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    const double s = mult(n);
    for (int c = 0; c < f.components(); ++c) out(c, idx) *= s;
  });
  return out;
}

}  // namespace

SpectralField leray_project(const SpectralField& f) {
  require_components(f, 3, "leray_project");
  SpectralField out = f;
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    const auto k = as_real(n);
    const CVec3 u = f.vec(idx);
    const Complex kdotu = k[0] * u[0] + k[1] * u[1] + k[2] * u[2];
    const double k2 = n.norm_sq();
    for (int c = 0; c < 3; ++c) out(c, idx) = u[c] - k[c] * kdotu / k2;
  });
  return out;
}

SpectralField curl(const SpectralField& f) {
  require_components(f, 3, "curl");
  SpectralField out = zeros_like(f);
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    const CVec3 w = cross(as_real(n), f.vec(idx));
    out.set_vec(idx, {I * w[0], I * w[1], I * w[2]});
  });
  return out;
}

SpectralField inverse_curl(const SpectralField& f) {
  require_components(f, 3, "inverse_curl");
  require_mean_zero(f, "inverse_curl");
  require_divergence_free(f, "inverse_curl");
  SpectralField out = curl(f);
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    const double k2 = n.norm_sq();
    for (int c = 0; c < 3; ++c) out(c, idx) = n.is_zero() ? Complex{} : out(c, idx) / k2;
  });
  return out;
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (t < 0.0) throw Error(ErrorKind::NegativeTime, "heat_semigroup with t < 0");
  if (t == 0.0) return f;
  return scale_modes(f, [t](const Wavevector& n) { return std::exp(-n.norm_sq() * t); });
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
  if (s < 0.0) require_mean_zero(f, "fractional_laplacian");
  if (s == 0.0) return f;
  return scale_modes(f, [s](const Wavevector& n) {
    if (n.is_zero()) return s < 0.0 ? 0.0 : 1.0;
    return std::pow(static_cast<double>(n.norm_sq()), 0.5 * s);
  });
}

SpectralField laplacian(const SpectralField& f) {
  return scale_modes(f, [](const Wavevector& n) { return -static_cast<double>(n.norm_sq()); });
}

SpectralField gradient(const SpectralField& f) {
  if (f.components() == 9) throw Error(ErrorKind::InvalidArgument, "gradient of a tensor");
  SpectralField out(f.grid_size(), 3 * f.components(), f.is_real());
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    for (int i = 0; i < f.components(); ++i)
      for (int j = 0; j < 3; ++j) out(3 * i + j, idx) = I * static_cast<double>(n[j]) * f(i, idx);
  });
  return out;
}

SpectralField divergence(const SpectralField& f) {
  if (f.components() == 1) throw Error(ErrorKind::InvalidArgument, "divergence of a scalar");
  const int rows = f.components() / 3;
  SpectralField out(f.grid_size(), rows, f.is_real());
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    for (int i = 0; i < rows; ++i) {
      Complex s{};
      for (int j = 0; j < 3; ++j) s += static_cast<double>(n[j]) * f(3 * i + j, idx);
      out(i, idx) = I * s;
    }
  });
  return out;
}

SpectralField dealias(const SpectralField& f) {
  const int N = f.grid_size();
  return scale_modes(f, [N](const Wavevector& n) {
    const bool keep = 3 * std::abs(n.n1) <= N && 3 * std::abs(n.n2) <= N && 3 * std::abs(n.n3) <= N;
    return keep ? 1.0 : 0.0;
  });
}

bool is_dealiased(const SpectralField& f) {
  const int N = f.grid_size();
  bool ok = true;
  for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
    const bool keep = 3 * std::abs(n.n1) <= N && 3 * std::abs(n.n2) <= N && 3 * std::abs(n.n3) <= N;
    if (keep) return;
    for (int c = 0; c < f.components(); ++c)
      if (f(c, idx) != Complex{}) ok = false;
  });
  return ok;
}

double divergence_residual(const SpectralField& f) {
  require_components(f, 3, "divergence_residual");
  double worst = 0.0;
  double scale = 0.0;
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    const auto k = as_real(n);
    const CVec3 u = f.vec(idx);
    worst = std::max(worst, std::abs(k[0] * u[0] + k[1] * u[1] + k[2] * u[2]));
    scale = std::max(scale, std::sqrt(n.norm_sq()) *
                                std::sqrt(std::norm(u[0]) + std::norm(u[1]) + std::norm(u[2])));
  });
  return scale > 0.0 ? worst / scale : 0.0;
}

void require_mean_zero(const SpectralField& f, std::string_view who) {
  const double norm = l2_norm(f);
  if (f.mean_magnitude() > 1e-12 * norm && f.mean_magnitude() > 0.0)
    throw Error(ErrorKind::NonZeroMean, std::string(who) + ": zero mode is nonzero");
}

void require_divergence_free(const SpectralField& f, std::string_view who) {
  if (divergence_residual(f) > 1e-10)
    throw Error(ErrorKind::NotDivergenceFree, std::string(who) + ": input has divergence");
}

namespace {

// Pointwise products on the grid. Indices follow the component layout of the
// inputs; the output is transformed back and dealiased.
template <class Kernel>
SpectralField grid_product(const SpectralField& a, const SpectralField& b, int out_components,
                           Kernel&& kernel) {
  if (a.grid_size() != b.grid_size()) throw Error(ErrorKind::InvalidArgument, "grid mismatch");
  const PhysicalField pa = to_physical(a);
  const PhysicalField pb = to_physical(b);
  PhysicalField out{a.grid_size(), out_components,
                    std::vector<Complex>(out_components * pa.points())};
  const std::size_t P = pa.points();
  for (std::size_t j = 0; j < P; ++j) kernel(pa, pb, out, j, P);
  return dealias(to_spectral(out, a.is_real() && b.is_real()));
}

}  // namespace

SpectralField product_cross(const SpectralField& a, const SpectralField& b) {
  require_components(a, 3, "product_cross");
  require_components(b, 3, "product_cross");
  return grid_product(a, b, 3, [](const PhysicalField& x, const PhysicalField& y, PhysicalField& o,
                                  std::size_t j, std::size_t P) {
    const Complex* u = x.values.data();
    const Complex* v = y.values.data();
    Complex* w = o.values.data();
    w[j] = u[P + j] * v[2 * P + j] - u[2 * P + j] * v[P + j];
    w[P + j] = u[2 * P + j] * v[j] - u[j] * v[2 * P + j];
    w[2 * P + j] = u[j] * v[P + j] - u[P + j] * v[j];
  });
}

SpectralField product_dot(const SpectralField& a, const SpectralField& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::InvalidArgument, "product_dot shape mismatch");
  const int comps = a.components();
  return grid_product(a, b, 1, [comps](const PhysicalField& x, const PhysicalField& y,
                                       PhysicalField& o, std::size_t j, std::size_t P) {
    Complex s{};
    for (int c = 0; c < comps; ++c) s += x.values[c * P + j] * y.values[c * P + j];
    o.values[j] = s;
  });
}

SpectralField product_advect(const SpectralField& a, const SpectralField& b) {
  require_components(a, 3, "product_advect");
  require_components(b, 3, "product_advect");
  return grid_product(a, gradient(b), 3,
                      [](const PhysicalField& x, const PhysicalField& gb, PhysicalField& o,
                         std::size_t j, std::size_t P) {
                        for (int i = 0; i < 3; ++i) {
                          Complex s{};
                          for (int k = 0; k < 3; ++k)
                            s += x.values[k * P + j] * gb.values[(3 * i + k) * P + j];
                          o.values[i * P + j] = s;
                        }
                      });
}

SpectralField product_outer(const SpectralField& a, const SpectralField& b) {
  require_components(a, 3, "product_outer");
  require_components(b, 3, "product_outer");
  return grid_product(a, b, 9, [](const PhysicalField& x, const PhysicalField& y, PhysicalField& o,
                                  std::size_t j, std::size_t P) {
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) o.values[(3 * i + k) * P + j] = x.values[i * P + j] * y.values[k * P + j];
  });
}

double rotation_form_identity(const SpectralField& b, const SpectralField& h) {
  require_components(b, 3, "rotation_form_identity");
  require_components(h, 3, "rotation_form_identity");
  require_divergence_free(b, "rotation_form_identity");
  require_divergence_free(h, "rotation_form_identity");
  const SpectralField lhs = product_advect(b, h) + product_advect(h, b);
  SpectralField rhs = gradient(product_dot(b, h));
  rhs -= product_cross(b, curl(h));
  rhs -= product_cross(h, curl(b));
  return sup_norm(lhs - rhs);
}

namespace {

// Terms c * t^{-a} * x^beta of the polynomial multiplying K.
using Term = std::array<int, 4>;  // a, beta1, beta2, beta3
using Poly = std::map<Term, double>;

Poly differentiate_x(const Poly& p, int i) {
  Poly out;
  for (const auto& [term, c] : p) {
    if (term[1 + i] > 0) {
      Term d = term;
      d[1 + i] -= 1;
      out[d] += c * term[1 + i];
    }
    Term e = term;
    e[0] += 1;
    e[1 + i] += 1;
    out[e] += -0.5 * c;
  }
  return out;
}

// d/dt K = K (-3/2 t^{-1} + |x|^2 / (4 t^2)) in three space dimensions.
Poly differentiate_t(const Poly& p) {
  Poly out;
  for (const auto& [term, c] : p) {
    Term d = term;
    d[0] += 1;
    out[d] += c * (-1.5 - term[0]);
    for (int i = 0; i < 3; ++i) {
      Term e = term;
      e[0] += 2;
      e[1 + i] += 2;
      out[e] += 0.25 * c;
    }
  }
  return out;
}

}  // namespace

HeatKernelDerivative heat_kernel_eval(const std::array<double, 3>& x, double t, int m,
                                      const std::array<int, 3>& alpha) {
  if (t <= 0.0) throw Error(ErrorKind::NonPositiveTime, "heat kernel needs t > 0");
  const int k = alpha[0] + alpha[1] + alpha[2];
  if (m < 0 || alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0)
    throw Error(ErrorKind::InvalidArgument, "derivative orders must be non-negative");

  Poly p{{Term{0, 0, 0, 0}, 1.0}};
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < alpha[i]; ++r) p = differentiate_x(p, i);
  for (int r = 0; r < m; ++r) p = differentiate_t(p);

  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double kernel = std::pow(t, -1.5) * std::exp(-r2 / (4.0 * t));
  const double sqrt_t = std::sqrt(t);
  const double order = m + 0.5 * k;

  HeatKernelDerivative out;
  double direct = 0.0;
  double scaled = 0.0;
  for (const auto& [term, c] : p) {
    if (c == 0.0) continue;
    const int degree = term[1] + term[2] + term[3];
    out.polynomial_degree = std::max(out.polynomial_degree, degree);
    if (std::abs(term[0] - 0.5 * degree - order) > 1e-12) out.homogeneous = false;
    double mono = std::pow(t, -term[0]);
    double mono_y = 1.0;
    for (int i = 0; i < 3; ++i) {
      mono *= std::pow(x[i], term[1 + i]);
      mono_y *= std::pow(x[i] / sqrt_t, term[1 + i]);
    }
    direct += c * mono;
    scaled += c * mono_y;
  }
  out.value = kernel * direct;
  out.factorized_value = std::pow(t, -order) * kernel * scaled;
  const double mag = std::max(std::abs(out.value), std::abs(out.factorized_value));
  out.relative_discrepancy = mag > 0.0 ? std::abs(out.value - out.factorized_value) / mag : 0.0;
  return out;
}

}  // namespace nslab
