#include "nslab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "nslab/error.hpp"

namespace nslab {

namespace {

struct PlanPair {
  fftw_plan backward = nullptr;  // sign +1: spectral -> physical
  fftw_plan forward = nullptr;   // sign -1: physical -> spectral
};

// Plans are created once per grid size under a lock; fftw_execute_dft on
// distinct arrays is thread safe. FFTW_UNALIGNED keeps results independent of
// buffer alignment, which the bit-reproducibility of reports depends on.
const PlanPair& plans_for(int N) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  std::vector<Complex> scratch(static_cast<std::size_t>(N) * N * N);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.backward = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_BACKWARD, flags);
  p.forward = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_FORWARD, flags);
  if (!p.backward || !p.forward) throw Error(ErrorKind::InvalidArgument, "FFTW planning failed");
  return cache.emplace(N, p).first->second;
}

}  // namespace

namespace fft {

void to_physical_inplace(std::span<Complex> data, int N) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(N).backward, buf, buf);
}

void to_spectral_inplace(std::span<Complex> data, int N) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(N).forward, buf, buf);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace fft

std::vector<double> PhysicalField::pointwise_norm_sq() const {
  std::vector<double> out(points(), 0.0);
  for (int c = 0; c < components; ++c) {
    const auto comp = component(c);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += std::norm(comp[j]);
  }
  return out;
}

double PhysicalField::sup_norm() const {
  const auto sq = pointwise_norm_sq();
  return sq.empty() ? 0.0 : std::sqrt(*std::max_element(sq.begin(), sq.end()));
}

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField p{f.grid_size(), f.components(), f.coeffs()};
  for (int c = 0; c < p.components; ++c) fft::to_physical_inplace(p.component(c), p.N);
  return p;
}

SpectralField to_spectral(const PhysicalField& p, bool real) {
  SpectralField f(p.N, p.components, real);
  f.coeffs() = p.values;
  if (real)
    for (auto& v : f.coeffs()) v = {v.real(), 0.0};
  for (int c = 0; c < p.components; ++c) fft::to_spectral_inplace(f.component(c), p.N);
  return f;
}

double sup_norm(const SpectralField& f) { return to_physical(f).sup_norm(); }

}  // namespace nslab
