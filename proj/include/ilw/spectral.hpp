#pragma once

// Spectral representation layer: periodic grids on [0, 2pi), truncated
// Fourier coefficients, norms, projectors and dealiased products.
//
// Fourier convention (hatted quantities carry a 1/sqrt(2pi)):
//   c(xi) = (1/sqrt(2pi)) \int_0^{2pi} f(x) e^{-i xi x} dx
//   f(x)  = (1/sqrt(2pi)) \sum_xi    c(xi) e^{+i xi x}
// so that Plancherel reads ||f||_{L^2} = ||c||_{l^2}.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ilw {

using Real = double;
using Complex = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr Real kTwoPi = 6.283185307179586476925286766559;
inline constexpr Real kSqrtTwoPi = 2.5066282746310005024157652848110;

/// Thrown on malformed run/problem configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform periodic grid of M points on the 2pi torus.  The frequency
/// lattice is xi in {-M/2+1, ..., M/2}; the lone Nyquist mode xi = M/2 is
/// kept at zero amplitude so the stored set pairs symmetrically.
struct Grid {
  int modes = 0;

  Grid() = default;
  explicit Grid(int m) : modes(m) {
    if (m < 8 || m % 2 != 0) {
      throw ConfigError("Grid: modes must be even and >= 8, got " + std::to_string(m));
    }
  }

  int nyquist() const { return modes / 2; }
  /// Largest frequency carrying data (Nyquist excluded).
  int band() const { return modes / 2 - 1; }
  Real node(int n) const { return kTwoPi * Real(n) / Real(modes); }

  bool operator==(const Grid&) const = default;
};

/// A function on the torus stored as truncated Fourier coefficients.
/// Layout follows the usual FFT order: slot k holds frequency k for
/// k <= M/2 and k - M above.  Fields built from real samples satisfy
/// c(-xi) = conj(c(xi)); the class does not force that on mutation since
/// single-mode complex probes are legitimate operator inputs.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(Grid g) : grid_(g), coeffs_(VectorXcd::Zero(g.modes)) {}
  SpectralField(Grid g, VectorXcd coeffs, bool mean_zero = false)
      : grid_(g), coeffs_(std::move(coeffs)), mean_zero_(mean_zero) {
    if (coeffs_.size() != grid_.modes) throw ConfigError("SpectralField: coefficient length mismatch");
    coeffs_[grid_.nyquist()] = Complex(0, 0);
    if (mean_zero_) coeffs_[0] = Complex(0, 0);
  }

  const Grid& grid() const { return grid_; }
  bool mean_zero() const { return mean_zero_; }
  void set_mean_zero() {
    coeffs_[0] = Complex(0, 0);
    mean_zero_ = true;
  }

  bool in_band(int xi) const { return xi > -grid_.nyquist() && xi <= grid_.nyquist(); }

  /// Coefficient at integer frequency xi; zero outside the stored band.
  Complex coeff(int xi) const {
    if (!in_band(xi) || xi == grid_.nyquist()) return Complex(0, 0);
    return coeffs_[index_of(xi)];
  }
  void set_coeff(int xi, Complex v) {
    if (!in_band(xi)) throw std::out_of_range("SpectralField::set_coeff: frequency outside band");
    if (xi == grid_.nyquist()) return;  // Nyquist pinned to zero
    if (xi == 0 && mean_zero_) throw std::logic_error("SpectralField: mean-zero field cannot take a dc coefficient");
    coeffs_[index_of(xi)] = v;
  }
  void add_coeff(int xi, Complex v) { set_coeff(xi, coeff(xi) + v); }

  const VectorXcd& data() const { return coeffs_; }
  VectorXcd& raw() { return coeffs_; }

  /// Max deviation from Hermitian symmetry (0 for real-valued fields).
  Real hermitian_defect() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(Real s) {
    coeffs_ *= s;
    return *this;
  }

 private:
  int index_of(int xi) const { return xi >= 0 ? xi : xi + grid_.modes; }

  Grid grid_;
  VectorXcd coeffs_;
  bool mean_zero_ = false;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Real s, SpectralField a);

/// Collocation transform of M real samples (values at grid.node(n)).
SpectralField forward(const Grid& grid, const VectorXd& samples);

/// Complex-sample variants used by the dealiased product machinery.
SpectralField forward(const Grid& grid, const VectorXcd& samples);
VectorXcd inverse(const SpectralField& f);
/// Inverse transform of a real-valued field; throws if the coefficients
/// are not Hermitian-symmetric to round-off.
VectorXd inverse_real(const SpectralField& f);

/// L^2(torus) norm; equals the coefficient l^2 norm by Plancherel.
Real l2_norm(const SpectralField& f);

enum class Band { Low, High };

/// Dirichlet projector: Band::Low keeps |xi| <= N, Band::High keeps |xi| > N.
SpectralField project(const SpectralField& f, Real n, Band side);

/// Transform of the pointwise product f*g, carrying the 1/sqrt(2pi)
/// convolution normalization.  Computed on a zero-padded grid (factor 2,
/// beyond the 3/2 dealiasing threshold) so every stored output frequency
/// is alias-free.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

/// Mean removal: returns the mean-zero field and the removed mean mu(u).
std::pair<SpectralField, Real> galilean_reduce(const SpectralField& f);

/// Flat text record: header (M, meanZero), then re/im pairs for xi = 0..M/2.
std::string to_record(const SpectralField& f);
SpectralField from_record(const std::string& record);

}  // namespace ilw
