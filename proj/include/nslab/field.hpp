#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nslab {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;

/// Integer wavevector on the torus [-pi, pi]^3.
struct Wavevector {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;

  constexpr int norm_sq() const { return n1 * n1 + n2 * n2 + n3 * n3; }
  constexpr int operator[](int i) const { return i == 0 ? n1 : (i == 1 ? n2 : n3); }
  constexpr bool is_zero() const { return n1 == 0 && n2 == 0 && n3 == 0; }
  constexpr Wavevector operator-() const { return {-n1, -n2, -n3}; }
  friend constexpr bool operator==(const Wavevector&, const Wavevector&) = default;
  friend constexpr auto operator<=>(const Wavevector&, const Wavevector&) = default;
};

/// Index helpers for an N^3 grid stored in FFT order: slot i carries the
/// wavenumber i for i <= N/2 and i - N otherwise, so every axis spans
/// {-N/2+1, ..., N/2}.
struct GridIndex {
  int N;

  std::size_t size() const { return static_cast<std::size_t>(N) * N * N; }
  int wavenumber(int slot) const { return slot <= N / 2 ? slot : slot - N; }
  int slot(int wavenumber) const { return wavenumber >= 0 ? wavenumber : wavenumber + N; }
  bool contains(const Wavevector& n) const;
  std::size_t index(const Wavevector& n) const;
  Wavevector mode(std::size_t idx) const;
  /// Index of -n (mod N); the Nyquist plane maps onto itself.
  std::size_t conjugate_index(std::size_t idx) const;
};

/// Calls f(idx, Wavevector) for every mode of an N^3 grid in storage order.
template <class F>
void for_each_mode(int N, F&& f) {
  const GridIndex g{N};
  std::size_t idx = 0;
  for (int a = 0; a < N; ++a) {
    const int n1 = g.wavenumber(a);
    for (int b = 0; b < N; ++b) {
      const int n2 = g.wavenumber(b);
      for (int c = 0; c < N; ++c, ++idx) f(idx, Wavevector{n1, n2, g.wavenumber(c)});
    }
  }
}

/// Truncated Fourier representation u(x) = sum_n u_n exp(i n.x) of a periodic
/// scalar (1 component), vector (3) or rank-2 tensor (9, row-major ij) field.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int N, int components, bool real = true, std::string label = {});

  int grid_size() const { return N_; }
  int components() const { return components_; }
  std::size_t modes() const { return GridIndex{N_}.size(); }
  GridIndex grid() const { return GridIndex{N_}; }

  bool is_real() const { return real_; }
  void set_real(bool real) { real_ = real; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  Complex& operator()(int c, std::size_t idx) { return coeffs_[c * modes() + idx]; }
  const Complex& operator()(int c, std::size_t idx) const { return coeffs_[c * modes() + idx]; }
  Complex& at(int c, const Wavevector& n);
  Complex at(int c, const Wavevector& n) const;

  /// Vector value (components 0..2) at a mode; requires 3 components.
  CVec3 vec(std::size_t idx) const;
  void set_vec(std::size_t idx, const CVec3& v);

  std::span<Complex> component(int c) { return {coeffs_.data() + c * modes(), modes()}; }
  std::span<const Complex> component(int c) const {
    return {coeffs_.data() + c * modes(), modes()};
  }
  std::vector<Complex>& coeffs() { return coeffs_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  bool same_shape(const SpectralField& other) const {
    return N_ == other.N_ && components_ == other.components_;
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, Complex s) { return a *= s; }
  friend SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

  /// Zero mode magnitude, summed over components.
  double mean_magnitude() const;
  /// max over modes of |u_{-n} - conj(u_n)| relative to max |u_n|.
  double hermitian_defect() const;
  /// Averages each pair (u_n, conj(u_{-n})) so Hermitian symmetry holds exactly.
  void make_hermitian();

 private:
  int N_ = 0;
  int components_ = 0;
  bool real_ = true;
  std::string label_;
  std::vector<Complex> coeffs_;
};

SpectralField zeros_like(const SpectralField& f, int components = -1);

/// sqrt(sum |u_n|^2): the root-mean-square of u over the torus.
double l2_norm(const SpectralField& f);
/// sum over components and modes of conj(a) b.
Complex inner(const SpectralField& a, const SpectralField& b);
/// max over components and modes of |u_n|.
double max_coeff(const SpectralField& f);
/// l2 norm of a - b.
double l2_distance(const SpectralField& a, const SpectralField& b);

}  // namespace nslab
