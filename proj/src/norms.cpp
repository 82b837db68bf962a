#include "nslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/fft.hpp"
#include "nslab/parallel.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

namespace {

constexpr double kPi = std::numbers::pi;

double grid_coordinate_distance(int N, int a, int b) {
  int d = std::abs(a - b) % N;
  d = std::min(d, N - d);
  return 2.0 * kPi * d / N;
}

}  // namespace

CylinderGrid CylinderGrid::make(int N, int center_stride, int radii_per_octave, int nodes_per_level,
                                double r_min, double r_max) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::InvalidArgument, "grid size must be even");
  if (center_stride < 1 || radii_per_octave < 1)
    throw Error(ErrorKind::InvalidArgument, "stride and radii per octave must be >= 1");
  if (nodes_per_level < 4) throw Error(ErrorKind::InvalidArgument, "at least 4 time nodes per level");
  const double spacing = 2.0 * kPi / N;
  CylinderGrid g;
  g.N = N;
  g.r_min = r_min > 0.0 ? r_min : spacing;
  g.r_max = r_max > 0.0 ? r_max : kPi;
  if (g.r_min < spacing * (1.0 - 1e-12))
    throw Error(ErrorKind::InvalidArgument, "r_min below the grid spacing is not resolvable");
  if (g.r_max > kPi * (1.0 + 1e-12) || g.r_max < g.r_min)
    throw Error(ErrorKind::InvalidArgument, "r_max must lie in [r_min, pi]");
  g.center_stride = center_stride;
  g.radii_per_octave = radii_per_octave;
  g.nodes_per_level = nodes_per_level;
  for (int k = 0;; ++k) {
    const double r = g.r_min * std::exp2(static_cast<double>(k) / radii_per_octave);
    if (r >= g.r_max * (1.0 - 1e-12)) break;
    g.radii.push_back(r);
  }
  g.radii.push_back(g.r_max);
  return g;
}

std::vector<TimeNode> CylinderGrid::time_nodes(double r) const {
  std::vector<TimeNode> nodes;
  const double floor_t = r_min * r_min * (1.0 - 1e-12);
  double hi = r * r;
  const auto level = [&](double a, double b) {
    const double h = (b - a) / nodes_per_level;
    for (int i = 0; i < nodes_per_level; ++i) nodes.push_back({a + (i + 0.5) * h, h});
  };
  while (hi / 2.0 >= floor_t) {
    level(hi / 2.0, hi);
    hi /= 2.0;
  }
  level(0.0, hi);
  std::sort(nodes.begin(), nodes.end(), [](const TimeNode& a, const TimeNode& b) { return a.t < b.t; });
  return nodes;
}

std::vector<std::array<int, 3>> CylinderGrid::centers() const {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < N; a += center_stride)
    for (int b = 0; b < N; b += center_stride)
      for (int c = 0; c < N; c += center_stride) out.push_back({a, b, c});
  return out;
}

std::string CylinderGrid::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "N=" << N << " r_min=" << r_min << " r_max=" << r_max << " radii=" << radii.size()
     << " stride=" << center_stride << " nodes_per_level=" << nodes_per_level;
  return os.str();
}

BallStencil ball_stencil(int N, double r) {
  BallStencil b;
  b.radius = r;
  b.volume = 4.0 * kPi * r * r * r / 3.0;
  b.indicator.assign(static_cast<std::size_t>(N) * N * N, 0.0);
  const double r2 = r * r * (1.0 + 1e-12);
  std::size_t idx = 0;
  for (int a = 0; a < N; ++a) {
    const double da = grid_coordinate_distance(N, a, 0);
    for (int c2 = 0; c2 < N; ++c2) {
      const double db = grid_coordinate_distance(N, c2, 0);
      for (int c3 = 0; c3 < N; ++c3, ++idx) {
        const double dc = grid_coordinate_distance(N, c3, 0);
        if (da * da + db * db + dc * dc <= r2) {
          b.indicator[idx] = 1.0;
          ++b.count;
        }
      }
    }
  }
  return b;
}

CarlesonAccumulator::CarlesonAccumulator(int N, std::vector<double> radii, double r_power,
                                         double outer_power)
    : N_(N), radii_(std::move(radii)), r_power_(r_power), outer_power_(outer_power) {
  const std::size_t P = static_cast<std::size_t>(N) * N * N;
  integrated_.assign(radii_.size(), std::vector<double>(P, 0.0));
}

void CarlesonAccumulator::add(std::size_t radius_index, const std::vector<double>& density, double weight) {
  auto& acc = integrated_.at(radius_index);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * density[i];
}

CarlesonAccumulator::Result CarlesonAccumulator::sup(int center_stride) const {
  const std::size_t P = static_cast<std::size_t>(N_) * N_ * N_;
  std::vector<Result> per_radius(radii_.size());
  parallel_for(radii_.size(), [&](std::size_t ri) {
    const double r = radii_[ri];
    const BallStencil ball = ball_stencil(N_, r);
    std::vector<Complex> a(integrated_[ri].begin(), integrated_[ri].end());
    std::vector<Complex> b(ball.indicator.begin(), ball.indicator.end());
    fft::to_spectral_inplace(a, N_);
    fft::to_spectral_inplace(b, N_);
    for (std::size_t i = 0; i < P; ++i) a[i] *= b[i] * static_cast<double>(P);
    fft::to_physical_inplace(a, N_);
    const double scale = std::pow(r, -r_power_) * ball.volume / static_cast<double>(ball.count);
    Result best{0.0, {0, 0, 0}, r};
    for (int i = 0; i < N_; i += center_stride)
      for (int j = 0; j < N_; j += center_stride)
        for (int k = 0; k < N_; k += center_stride) {
          const double s = std::max(0.0, a[(static_cast<std::size_t>(i) * N_ + j) * N_ + k].real());
          const double v = std::pow(scale * s, outer_power_);
          if (v > best.value) best = {v, {i, j, k}, r};
        }
    per_radius[ri] = best;
  });
  Result best{0.0, {0, 0, 0}, radii_.empty() ? 0.0 : radii_.front()};
  for (const auto& r : per_radius)
    if (r.value > best.value) best = r;
  return best;
}

std::vector<double> density_sq(const SpectralField& f) { return to_physical(f).pointwise_norm_sq(); }

std::vector<double> derivative_density_sq(const SpectralField& f, int k) {
  if (k < 0 || k > 3) throw Error(ErrorKind::BadExponent, "derivative order must lie in 0..3");
  if (k == 0) return density_sq(f);
  const int N = f.grid_size();
  const GridIndex g{N};
  std::vector<double> out(g.size(), 0.0);
  std::vector<Complex> work(g.size());
  int combos = 1;
  for (int i = 0; i < k; ++i) combos *= 3;
  for (int c = 0; c < f.components(); ++c) {
    const auto comp = f.component(c);
    for (int combo = 0; combo < combos; ++combo) {
      std::array<int, 3> dirs{};
      for (int i = 0, rest = combo; i < k; ++i, rest /= 3) dirs[i] = rest % 3;
      for_each_mode(N, [&](std::size_t idx, const Wavevector& n) {
        Complex m{1.0, 0.0};
        for (int i = 0; i < k; ++i) m *= Complex{0.0, static_cast<double>(n[dirs[i]])};
        work[idx] = m * comp[idx];
      });
      fft::to_physical_inplace(work, N);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::norm(work[i]);
    }
  }
  return out;
}

namespace {

NormReport heat_carleson(const SpectralField& f, const CylinderGrid& grid, CarlesonDensity kind,
                         const std::string& name) {
  require_mean_zero(f, name);
  if (f.grid_size() != grid.N) throw Error(ErrorKind::InvalidArgument, "cylinder grid size mismatch");
  std::map<double, std::vector<std::pair<std::size_t, double>>> nodes;
  for (std::size_t ri = 0; ri < grid.radii.size(); ++ri)
    for (const TimeNode& n : grid.time_nodes(grid.radii[ri])) nodes[n.t].push_back({ri, n.weight});

  std::vector<double> times;
  for (const auto& [t, uses] : nodes) times.push_back(t);
  std::vector<std::vector<double>> densities(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const SpectralField W = heat_semigroup(f, times[i]);
    densities[i] = kind == CarlesonDensity::Value ? density_sq(W) : derivative_density_sq(W, 1);
  });

  CarlesonAccumulator acc(grid.N, grid.radii, 3.0, 0.5);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (const auto& [ri, w] : nodes[times[i]]) acc.add(ri, densities[i], w);
  const auto best = acc.sup(grid.center_stride);

  NormReport rep;
  rep.name = name;
  rep.value = best.value;
  rep.carleson_part = best.value;
  rep.argmax_center = best.center;
  rep.argmax_radius = best.radius;
  rep.metadata = grid.describe();
  return rep;
}

}  // namespace

NormReport bmo_minus1_norm(const SpectralField& f, const CylinderGrid& grid) {
  return heat_carleson(f, grid, CarlesonDensity::Value, "bmo_minus1");
}

NormReport bmo_norm(const SpectralField& f, const CylinderGrid& grid) {
  return heat_carleson(f, grid, CarlesonDensity::Gradient, "bmo");
}

std::array<SpectralField, 3> bmo_minus2_representative(const SpectralField& f) {
  require_mean_zero(f, "bmo_minus2");
  std::array<SpectralField, 3> g{zeros_like(f), zeros_like(f), zeros_like(f)};
  for_each_mode(f.grid_size(), [&](std::size_t idx, const Wavevector& n) {
    if (n.is_zero()) return;
    const double k2 = n.norm_sq();
    for (int i = 0; i < 3; ++i) {
      const Complex m{0.0, -static_cast<double>(n[i]) / k2};
      for (int c = 0; c < f.components(); ++c) g[i](c, idx) = m * f(c, idx);
    }
  });
  return g;
}

NormReport bmo_minus2_upper(const SpectralField& f, const CylinderGrid& grid) {
  const auto g = bmo_minus2_representative(f);
  NormReport rep;
  rep.name = "bmo_minus2_upper";
  double best = -1.0;
  for (int i = 0; i < 3; ++i) {
    const NormReport part = bmo_minus1_norm(g[i], grid);
    rep.value += part.value;
    if (part.value > best) {
      best = part.value;
      rep.argmax_center = part.argmax_center;
      rep.argmax_radius = part.argmax_radius;
      rep.argmax_level = i;
    }
  }
  rep.carleson_part = rep.value;
  rep.metadata = grid.describe() + " representative=d_i Delta^-1 f (upper bound)";
  return rep;
}

NormReport bmo_minus1_divergence_form(const SpectralField& f, const CylinderGrid& grid) {
  const auto g = bmo_minus2_representative(f);
  NormReport rep;
  rep.name = "bmo_minus1_divergence_form";
  for (int i = 0; i < 3; ++i) rep.value += bmo_norm(g[i], grid).value;
  rep.carleson_part = rep.value;
  rep.metadata = grid.describe() + " representative=d_i Delta^-1 f (upper bound)";
  return rep;
}

double cylinder_value(const SpectralField& f, const std::array<int, 3>& center, double r,
                      const CylinderGrid& grid, CarlesonDensity density) {
  const int N = f.grid_size();
  std::vector<std::size_t> members;
  const double r2 = r * r * (1.0 + 1e-12);
  std::size_t idx = 0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c, ++idx) {
        const double da = grid_coordinate_distance(N, a, center[0]);
        const double db = grid_coordinate_distance(N, b, center[1]);
        const double dc = grid_coordinate_distance(N, c, center[2]);
        if (da * da + db * db + dc * dc <= r2) members.push_back(idx);
      }
  double total = 0.0;
  for (const TimeNode& node : grid.time_nodes(r)) {
    const SpectralField W = heat_semigroup(f, node.t);
    const auto dens = density == CarlesonDensity::Value ? density_sq(W) : derivative_density_sq(W, 1);
    double s = 0.0;
    for (std::size_t m : members) s += dens[m];
    total += node.weight * s;
  }
  const double volume = 4.0 * kPi * r * r * r / 3.0;
  return std::sqrt(std::pow(r, -3.0) * volume / static_cast<double>(members.size()) * total);
}

std::vector<double> horizon_radii(int N, double T, int radii_per_octave) {
  if (!(T > 0.0)) throw Error(ErrorKind::NonPositiveTime, "horizon must be positive");
  const double top = std::min(std::sqrt(T), kPi);
  const double r_min = 2.0 * kPi / N;
  std::vector<double> radii;
  for (int k = 0;; ++k) {
    const double r = r_min * std::exp2(static_cast<double>(k) / radii_per_octave);
    if (r >= top * (1.0 - 1e-12)) break;
    radii.push_back(r);
  }
  radii.push_back(top);
  return radii;
}

namespace {

struct SpaceTimeTerm {
  double sup_t_power;       // weight t^a on the sup-in-time part
  double carleson_t_power;  // weight t^c inside the Carleson integrand
  std::function<std::vector<double>(std::size_t)> density_sq;  // pointwise |g|^2 at sample k
};

struct TermResult {
  double sup_part = 0.0;
  double sup_time = 0.0;
  CarlesonAccumulator::Result carleson;
};

// Sample cells run between neighbouring midpoints; the last cell is extended
// to the top of every cylinder it meets.
TermResult evaluate_term(const Trajectory& tr, double T, const SpaceTimeTerm& term, double r_power,
                         bool squared, int stride) {
  const int N = tr.field(0).grid_size();
  std::vector<std::size_t> samples;
  for (std::size_t k = 0; k < tr.size(); ++k)
    if (tr.time(k) <= T * (1.0 + 1e-12)) samples.push_back(k);
  if (samples.empty()) throw Error(ErrorKind::EmptyTrajectory, "no samples inside the horizon");

  const std::vector<double> radii = horizon_radii(N, T);
  CarlesonAccumulator acc(N, radii, r_power, squared ? 0.5 : 1.0);
  TermResult out;
  std::vector<double> sup_values(samples.size(), 0.0);
  std::vector<std::vector<double>> integrands(samples.size());
  parallel_for(samples.size(), [&](std::size_t s) {
    const std::size_t k = samples[s];
    const double t = tr.time(k);
    std::vector<double> dens = term.density_sq(k);
    const double peak = std::sqrt(*std::max_element(dens.begin(), dens.end()));
    sup_values[s] = t > 0.0 ? std::pow(t, term.sup_t_power) * peak : 0.0;
    const double w = term.carleson_t_power == 0.0 ? 1.0 : std::pow(t, term.carleson_t_power);
    for (auto& v : dens) v = squared ? w * w * v : w * std::sqrt(v);
    integrands[s] = std::move(dens);
  });
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (sup_values[s] > out.sup_part) {
      out.sup_part = sup_values[s];
      out.sup_time = tr.time(samples[s]);
    }
    const double lo = s == 0 ? 0.0 : 0.5 * (tr.time(samples[s - 1]) + tr.time(samples[s]));
    const double hi = s + 1 == samples.size() ? std::numeric_limits<double>::infinity()
                                              : 0.5 * (tr.time(samples[s]) + tr.time(samples[s + 1]));
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double top = radii[ri] * radii[ri];
      const double w = std::min(hi, top) - std::min(lo, top);
      if (w > 0.0) acc.add(ri, integrands[s], w);
    }
  }
  out.carleson = acc.sup(stride);
  return out;
}

NormReport assemble(const std::string& name, const std::vector<TermResult>& terms) {
  NormReport rep;
  rep.name = name;
  double best = -1.0;
  for (const auto& t : terms) {
    rep.sup_part += t.sup_part;
    rep.carleson_part += t.carleson.value;
    const double largest = std::max(t.sup_part, t.carleson.value);
    if (largest > best) {
      best = largest;
      rep.argmax_time = t.sup_time;
      rep.argmax_center = t.carleson.center;
      rep.argmax_radius = t.carleson.radius;
    }
  }
  rep.value = rep.sup_part + rep.carleson_part;
  return rep;
}

void require_samples(const Trajectory& tr) {
  if (tr.empty()) throw Error(ErrorKind::EmptyTrajectory, "empty trajectory");
}

std::string horizon_metadata(const Trajectory& tr, double T) {
  std::ostringstream os;
  os << "N=" << tr.field(0).grid_size() << " T=" << T << " samples=" << tr.size()
     << " radii=" << horizon_radii(tr.field(0).grid_size(), T).size();
  return os.str();
}

}  // namespace

NormReport x_norm(const Trajectory& tr, double T, int center_stride) {
  require_samples(tr);
  const SpaceTimeTerm term{0.5, 0.0, [&](std::size_t k) { return density_sq(tr.field(k)); }};
  NormReport rep = assemble("x", {evaluate_term(tr, T, term, 3.0, true, center_stride)});
  rep.metadata = horizon_metadata(tr, T);
  return rep;
}

NormReport y_norm(const Trajectory& tr, double T, int center_stride) {
  require_samples(tr);
  const SpaceTimeTerm term{1.0, 0.0, [&](std::size_t k) { return density_sq(tr.field(k)); }};
  NormReport rep = assemble("y", {evaluate_term(tr, T, term, 3.0, false, center_stride)});
  rep.metadata = horizon_metadata(tr, T);
  return rep;
}

NormReport z_norm(const Trajectory& tr, double T, double d, int center_stride) {
  if (!(d > 0.0 && d < 1.0)) throw Error(ErrorKind::BadExponent, "z norm needs 0 < d < 1");
  require_samples(tr);
  const SpaceTimeTerm term{0.5 * (1.0 - d), 0.0, [&](std::size_t k) { return density_sq(tr.field(k)); }};
  NormReport rep = assemble("z", {evaluate_term(tr, T, term, 1.0 + 2.0 * d, true, center_stride)});
  rep.metadata = horizon_metadata(tr, T) + " d=" + std::to_string(d);
  return rep;
}

NormReport xmk_norm(const Trajectory& tr, double T, int M, int K, int center_stride) {
  if (M < 0 || K < 0 || M > 2 || K > 2) throw Error(ErrorKind::BadExponent, "X^{M,K} needs 0 <= M, K <= 2");
  require_samples(tr);
  std::vector<TermResult> terms;
  for (int m = 0; m <= M; ++m)
    for (int k = 0; k <= K; ++k) {
      const SpaceTimeTerm term{0.5 * (k + 1) + m, 0.5 * k + m, [&tr, m, k](std::size_t s) {
                                 return derivative_density_sq(tr.time_derivative(s, m), k);
                               }};
      terms.push_back(evaluate_term(tr, T, term, 3.0, true, center_stride));
    }
  NormReport rep = assemble("xmk", terms);
  rep.metadata = horizon_metadata(tr, T) + " M=" + std::to_string(M) + " K=" + std::to_string(K);
  return rep;
}

double l2_time_sup(const Trajectory& tr, double T) {
  require_samples(tr);
  double total = 0.0;
  double prev_t = 0.0, prev_v = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < tr.size() && tr.time(k) <= T * (1.0 + 1e-12); ++k) {
    const double s = sup_norm(tr.field(k));
    const double v = s * s;
    if (!first) total += 0.5 * (tr.time(k) - prev_t) * (v + prev_v);
    prev_t = tr.time(k);
    prev_v = v;
    first = false;
  }
  return std::sqrt(total);
}

}  // namespace nslab
