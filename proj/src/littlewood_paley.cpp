#include "nslab/littlewood_paley.hpp"

#include <cmath>
#include <vector>

#include "nslab/error.hpp"
#include "nslab/fft.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

namespace {

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

LPFilter::LPFilter(int N) : N_(N), max_level_(0) {
  const double top = std::sqrt(3.0) * N / 2.0;
  while (std::exp2(max_level_) < top) ++max_level_;
}

double LPFilter::phi(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 2.0) return 0.0;
  return 1.0 - smooth_step(0.5 * (std::log2(r) + 1.0));
}

double LPFilter::psi(double r) { return phi(0.5 * r) - phi(r); }

double LPFilter::weight(int j, double norm) const { return psi(std::exp2(-j) * norm); }

SpectralField lp_block(const SpectralField& f, const LPFilter& filter, int j) {
  SpectralField out = f;
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    const double w = filter.weight(j, std::sqrt(static_cast<double>(n.norm_sq())));
    for (int c = 0; c < f.components(); ++c) out(c, idx) *= w;
  });
  return out;
}

NormReport besov_norm(const SpectralField& f, double s, BesovQ q) {
  const LPFilter filter(f.grid_size());
  NormReport rep;
  rep.name = q == BesovQ::Infinity ? "besov_inf" : "besov_2";
  double sum_sq = 0.0;
  double best = -1.0;
  for (int j = filter.min_level(); j <= filter.max_level(); ++j) {
    const double v = std::exp2(j * s) * sup_norm(lp_block(f, filter, j));
    sum_sq += v * v;
    if (v > best) {
      best = v;
      rep.argmax_level = j;
    }
  }
  rep.value = q == BesovQ::Infinity ? std::max(best, 0.0) : std::sqrt(sum_sq);
  rep.metadata = "levels=" + std::to_string(filter.min_level()) + ".." + std::to_string(filter.max_level()) +
                 " s=" + std::to_string(s);
  return rep;
}

SpectralField bilinear_symbol_op(const SpectralField& g, const SpectralField& h) {
  if (!g.same_shape(h)) throw Error(ErrorKind::InvalidArgument, "bilinear_symbol_op shape mismatch");
  require_mean_zero(g, "bilinear_symbol_op");
  require_mean_zero(h, "bilinear_symbol_op");
  const int N = g.grid_size();
  const GridIndex grid{N};
  struct Entry {
    Wavevector n;
    std::size_t idx;
    double norm;
  };
  const auto support = [&](const SpectralField& f, int c) {
    std::vector<Entry> out;
    for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
      if (f(c, idx) != Complex{}) out.push_back({n, idx, std::sqrt(static_cast<double>(n.norm_sq()))});
    });
    return out;
  };
  SpectralField out(N, g.components(), g.is_real() && h.is_real());
  for (int c = 0; c < g.components(); ++c) {
    const auto sg = support(g, c);
    const auto sh = support(h, c);
    for (const Entry& a : sg)
      for (const Entry& b : sh) {
        const Wavevector n{a.n.n1 + b.n.n1, a.n.n2 + b.n.n2, a.n.n3 + b.n.n3};
        if (!grid.contains(n)) continue;
        out(c, grid.index(n)) += g(c, a.idx) * h(c, b.idx) / (a.norm + b.norm);
      }
  }
  return dealias(out);
}

BesovProductReport besov_product_check(const SpectralField& g, const SpectralField& h, double a,
                                       double kappa) {
  if (!(a > 0.5 && a < 1.0 && kappa > 0.0 && kappa < 1.0 - a))
    throw Error(ErrorKind::BadExponents, "need 1/2 < a < 1 and 0 < kappa < 1 - a");
  BesovProductReport r;
  const SpectralField F = bilinear_symbol_op(g, h);
  r.numerator = besov_norm(F, kappa, BesovQ::Infinity).value;
  r.g_norm = besov_norm(g, kappa - 1.0 + a, BesovQ::Infinity).value;
  r.h_norm = besov_norm(h, -a, BesovQ::Infinity).value;
  r.ratio = r.numerator == 0.0 ? 0.0 : r.numerator / (r.g_norm * r.h_norm);
  return r;
}

}  // namespace nslab
