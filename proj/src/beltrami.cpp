#include "nslab/beltrami.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nslab/error.hpp"
#include "nslab/random.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

namespace {

using RVec3 = std::array<double, 3>;

RVec3 cross(const RVec3& a, const RVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

RVec3 normalized(const RVec3& a) {
  const double s = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / s, a[1] / s, a[2] / s};
}

Complex dot_conj(const CVec3& h, const CVec3& u) {
  return std::conj(h[0]) * u[0] + std::conj(h[1]) * u[1] + std::conj(h[2]) * u[2];
}

void require_resolved(int N, const Wavevector& n) {
  const auto ok = [N](int k) { return 2 * std::abs(k) < N; };
  if (!ok(n.n1) || !ok(n.n2) || !ok(n.n3))
    throw Error(ErrorKind::ShellNotResolved, "shell does not fit strictly inside the grid");
}

}  // namespace

bool is_sum_of_three_squares(int m) {
  if (m < 0) return false;
  if (m == 0) return true;
  while (m % 4 == 0) m /= 4;
  return m % 8 != 7;
}

std::vector<Wavevector> lattice_shell(int lambda_sq) {
  if (lambda_sq < 1) throw Error(ErrorKind::InvalidArgument, "lambda_sq must be >= 1");
  if (!is_sum_of_three_squares(lambda_sq))
    throw Error(ErrorKind::EmptyShell, "no lattice point with |n|^2 = " + std::to_string(lambda_sq));
  std::vector<Wavevector> out;
  int r = 0;
  while ((r + 1) * (r + 1) <= lambda_sq) ++r;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) {
      const int rest = lambda_sq - a * a - b * b;
      if (rest < 0) continue;
      const int c = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rest))));
      if (c * c != rest) continue;
      if (c == 0) {
        out.push_back({a, b, 0});
      } else {
        out.push_back({a, b, -c});
        out.push_back({a, b, c});
      }
    }
  return out;
}

HelicalPair helical_basis(const Wavevector& n) {
  if (n.is_zero()) throw Error(ErrorKind::ZeroWavevector, "helical basis at n = 0");
  const RVec3 k{static_cast<double>(n.n1), static_cast<double>(n.n2), static_cast<double>(n.n3)};
  const bool along_e3 = n.n1 == 0 && n.n2 == 0;
  const RVec3 a = along_e3 ? RVec3{1.0, 0.0, 0.0} : RVec3{0.0, 0.0, 1.0};
  const RVec3 e1 = normalized(cross(k, a));
  const RVec3 e2 = cross(normalized(k), e1);
  const double s = (1.0 / std::numbers::sqrt2);
  HelicalPair h;
  for (int i = 0; i < 3; ++i) {
    h.plus[i] = s * Complex{e1[i], e2[i]};
    h.minus[i] = s * Complex{e1[i], -e2[i]};
  }
  return h;
}

ShellBasis shell_basis(int lambda_sq) {
  ShellBasis b;
  b.lambda_sq = lambda_sq;
  b.wavevectors = lattice_shell(lambda_sq);
  for (const auto& n : b.wavevectors) b.helical_pairs.push_back(helical_basis(n));
  return b;
}

SpectralField beltrami_field(int N, int lambda_sq, int sign, const std::vector<Complex>& amplitudes) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  const ShellBasis basis = shell_basis(lambda_sq);
  if (amplitudes.size() != basis.wavevectors.size())
    throw Error(ErrorKind::InvalidArgument, "need one amplitude per shell wavevector");
  SpectralField f(N, 3, false, "beltrami");
  const GridIndex g{N};
  for (std::size_t k = 0; k < basis.wavevectors.size(); ++k) {
    const Wavevector& n = basis.wavevectors[k];
    require_resolved(N, n);
    const CVec3& h = sign > 0 ? basis.helical_pairs[k].plus : basis.helical_pairs[k].minus;
    const std::size_t idx = g.index(n);
    for (int c = 0; c < 3; ++c) f(c, idx) = amplitudes[k] * h[c];
  }
  f.set_real(f.hermitian_defect() <= 1e-13);
  return f;
}

SpectralField random_beltrami(int N, int lambda_sq, int sign, std::uint64_t seed) {
  const auto shell = lattice_shell(lambda_sq);
  Rng rng(seed);
  std::vector<Complex> amps(shell.size());
  for (auto& a : amps) a = rng.complex_normal();
  SpectralField f = beltrami_field(N, lambda_sq, sign, amps);
  f.make_hermitian();
  const double norm = l2_norm(f);
  if (norm > 0.0) f *= 1.0 / norm;
  f.set_label("beltrami");
  return f;
}

SpectralField beltrami_from_potential(const SpectralField& u03) {
  require_divergence_free(u03, "beltrami_from_potential");
  SpectralField out = curl(u03) + fractional_laplacian(u03, 1.0);
  out.set_real(u03.is_real());
  return out;
}

HelicalDecomposition helical_decompose(const SpectralField& u) {
  if (u.components() != 3) throw Error(ErrorKind::InvalidArgument, "helical_decompose expects 3 components");
  require_mean_zero(u, "helical_decompose");
  require_divergence_free(u, "helical_decompose");
  HelicalDecomposition d{u.grid_size(), std::vector<Complex>(u.modes()),
                         std::vector<Complex>(u.modes())};
  for_each_mode(u.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    const HelicalPair h = helical_basis(n);
    const CVec3 v = u.vec(idx);
    d.plus[idx] = dot_conj(h.plus, v);
    d.minus[idx] = dot_conj(h.minus, v);
  });
  return d;
}

SpectralField helical_reconstruct(const HelicalDecomposition& d, int sign) {
  SpectralField u(d.N, 3, false);
  for_each_mode(d.N, [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    const HelicalPair h = helical_basis(n);
    CVec3 v{};
    for (int c = 0; c < 3; ++c) {
      if (sign >= 0) v[c] += d.plus[idx] * h.plus[c];
      if (sign <= 0) v[c] += d.minus[idx] * h.minus[c];
    }
    u.set_vec(idx, v);
  });
  return u;
}

PmSplit split_pm(const SpectralField& u0) {
  require_mean_zero(u0, "split_pm");
  require_divergence_free(u0, "split_pm");
  const SpectralField r = fractional_laplacian(curl(u0), -1.0);
  PmSplit s{(u0 + r) * 0.5, (u0 - r) * 0.5};
  s.plus.set_label("u0+");
  s.minus.set_label("u0-");
  return s;
}

PmSplit split_pm_eigen(const SpectralField& u0) {
  const HelicalDecomposition d = helical_decompose(u0);
  PmSplit s{helical_reconstruct(d, 1), helical_reconstruct(d, -1)};
  s.plus.set_real(u0.is_real());
  s.minus.set_real(u0.is_real());
  return s;
}

bool in_band(int norm_sq, double lambda) {
  const double l2 = lambda * lambda;
  const double m = static_cast<double>(norm_sq);
  const double slack = 1e-12 * l2;
  return 4.0 * m > l2 + slack && m < 4.0 * l2 - slack;
}

BandSplit band_split(const SpectralField& u0, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "band_split needs lambda >= 0");
  PmSplit pm = split_pm(u0);
  BandSplit out{zeros_like(u0), zeros_like(u0), std::move(pm.minus)};
  for_each_mode(u0.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    SpectralField& dst = in_band(n.norm_sq(), lambda) ? out.u2p : out.u1p;
    for (int c = 0; c < 3; ++c) dst(c, idx) = pm.plus(c, idx);
  });
  out.u1p.set_label("u1+");
  out.u2p.set_label("u2+");
  out.u0m.set_label("u0-");
  return out;
}

Corollary18Data corollary18_data(int N, const std::vector<ShellSpec>& shells, double b,
                                 double epsilon, double epsilon1, double eps_threshold,
                                 const std::optional<SpectralField>& u02, std::uint64_t seed) {
  if (shells.empty()) throw Error(ErrorKind::InvalidArgument, "at least one shell is required");
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::BadExponent, "b must lie in (0, 1)");
  Corollary18Data out;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (shells[i].lambda_sq < 1 || (i > 0 && shells[i].lambda_sq <= shells[i - 1].lambda_sq))
      throw Error(ErrorKind::UnorderedRadii, "radii must satisfy 1 <= lambda_1 < ... < lambda_N");
  }
  out.u01 = SpectralField(N, 3, true, "u01");
  for (std::size_t i = 0; i < shells.size(); ++i) {
    SpectralField phi = random_beltrami(N, shells[i].lambda_sq, 1, seed + 7919 * i);
    phi *= shells[i].amplitude;
    out.u01 += phi;
    out.phis.push_back(std::move(phi));
    out.lambdas.push_back(std::sqrt(static_cast<double>(shells[i].lambda_sq)));
  }
  out.u0 = out.u01;
  if (u02) out.u0 += *u02;
  out.u0.set_label("u0");

  AdmissibilityReport& r = out.report;
  const double l1 = out.lambdas.front();
  r.ordered = true;
  r.spread = out.lambdas.back() - l1;
  r.spread_bound = epsilon * std::pow(l1, 1.0 - b);
  r.spread_ok = r.spread <= r.spread_bound;
  r.epsilon1 = epsilon1;
  r.epsilon1_bound = eps_threshold * std::pow(l1, -b) / (1.0 + l1);
  r.epsilon1_ok = epsilon1 <= r.epsilon1_bound;
  return out;
}

}  // namespace nslab
