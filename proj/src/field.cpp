#include "nslab/field.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/error.hpp"

namespace nslab {

bool GridIndex::contains(const Wavevector& n) const {
  const auto in = [&](int k) { return k > -N / 2 && k <= N / 2; };
  return in(n.n1) && in(n.n2) && in(n.n3);
}

std::size_t GridIndex::index(const Wavevector& n) const {
  if (!contains(n)) throw Error(ErrorKind::InvalidArgument, "wavevector outside grid");
  return (static_cast<std::size_t>(slot(n.n1)) * N + slot(n.n2)) * N + slot(n.n3);
}

Wavevector GridIndex::mode(std::size_t idx) const {
  const int c = static_cast<int>(idx % N);
  const int b = static_cast<int>((idx / N) % N);
  const int a = static_cast<int>(idx / (static_cast<std::size_t>(N) * N));
  return {wavenumber(a), wavenumber(b), wavenumber(c)};
}

std::size_t GridIndex::conjugate_index(std::size_t idx) const {
  const int c = static_cast<int>(idx % N);
  const int b = static_cast<int>((idx / N) % N);
  const int a = static_cast<int>(idx / (static_cast<std::size_t>(N) * N));
  const auto neg = [&](int s) { return s == 0 ? 0 : N - s; };
  return (static_cast<std::size_t>(neg(a)) * N + neg(b)) * N + neg(c);
}

SpectralField::SpectralField(int N, int components, bool real, std::string label)
    : N_(N), components_(components), real_(real), label_(std::move(label)) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::InvalidArgument, "grid size must be even and >= 2");
  if (components != 1 && components != 3 && components != 9)
    throw Error(ErrorKind::InvalidArgument, "components must be 1, 3 or 9");
  coeffs_.assign(static_cast<std::size_t>(components) * modes(), Complex{});
}

Complex& SpectralField::at(int c, const Wavevector& n) { return (*this)(c, grid().index(n)); }
Complex SpectralField::at(int c, const Wavevector& n) const { return (*this)(c, grid().index(n)); }

CVec3 SpectralField::vec(std::size_t idx) const {
  return {(*this)(0, idx), (*this)(1, idx), (*this)(2, idx)};
}

void SpectralField::set_vec(std::size_t idx, const CVec3& v) {
  for (int c = 0; c < 3; ++c) (*this)(c, idx) = v[c];
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!same_shape(other)) throw Error(ErrorKind::InvalidArgument, "shape mismatch in +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!same_shape(other)) throw Error(ErrorKind::InvalidArgument, "shape mismatch in -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
  for (auto& v : coeffs_) v *= s;
  if (s.imag() != 0.0) real_ = false;
  return *this;
}

double SpectralField::mean_magnitude() const {
  double m = 0.0;
  for (int c = 0; c < components_; ++c) m += std::abs((*this)(c, 0));
  return m;
}

double SpectralField::hermitian_defect() const {
  const GridIndex g = grid();
  double defect = 0.0;
  for (int c = 0; c < components_; ++c)
    for (std::size_t i = 0; i < modes(); ++i)
      defect = std::max(defect, std::abs((*this)(c, g.conjugate_index(i)) - std::conj((*this)(c, i))));
  const double scale = max_coeff(*this);
  return scale > 0.0 ? defect / scale : 0.0;
}

void SpectralField::make_hermitian() {
  const GridIndex g = grid();
  for (int c = 0; c < components_; ++c)
    for (std::size_t i = 0; i < modes(); ++i) {
      const std::size_t j = g.conjugate_index(i);
      if (j < i) continue;
      const Complex avg = 0.5 * ((*this)(c, i) + std::conj((*this)(c, j)));
      (*this)(c, i) = avg;
      (*this)(c, j) = std::conj(avg);
    }
  real_ = true;
}

SpectralField zeros_like(const SpectralField& f, int components) {
  return SpectralField(f.grid_size(), components < 0 ? f.components() : components, f.is_real());
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& v : f.coeffs()) s += std::norm(v);
  return std::sqrt(s);
}

Complex inner(const SpectralField& a, const SpectralField& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::InvalidArgument, "shape mismatch in inner");
  Complex s{};
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::conj(a.coeffs()[i]) * b.coeffs()[i];
  return s;
}

double max_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& v : f.coeffs()) m = std::max(m, std::abs(v));
  return m;
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::InvalidArgument, "shape mismatch in l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(s);
}

}  // namespace nslab
