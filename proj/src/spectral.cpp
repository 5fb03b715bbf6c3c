#include "ilw/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

namespace ilw {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform, sign = -1 for the analysis direction.
void fft_pow2(VectorXcd& a, int sign) {
  const int n = int(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const Real ang = Real(sign) * kTwoPi / Real(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      Complex w(1, 0);
      for (int k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Cached dense DFT matrices for non power-of-two sizes.
const Eigen::MatrixXcd& dft_matrix(int n) {
  static std::map<int, Eigen::MatrixXcd> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Eigen::MatrixXcd w(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Real ang = -kTwoPi * Real(j) * Real(k) / Real(n);
        w(j, k) = Complex(std::cos(ang), std::sin(ang));
      }
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

// Unnormalized DFT: out_k = sum_n in_n e^{-2 pi i k n / N} (sign=-1).
VectorXcd dft(const VectorXcd& in, int sign) {
  if (is_pow2(int(in.size()))) {
    VectorXcd a = in;
    fft_pow2(a, sign);
    return a;
  }
  if (sign < 0) return dft_matrix(int(in.size())) * in;
  return (dft_matrix(int(in.size())) * in.conjugate()).conjugate();
}

// Re-embed a field's coefficients on a larger grid, Nyquist cleared.
VectorXcd embed(const SpectralField& f, const Grid& big) {
  VectorXcd out = VectorXcd::Zero(big.modes);
  const int m = f.grid().modes;
  for (int xi = -m / 2 + 1; xi <= m / 2 - 1; ++xi) {
    out[xi >= 0 ? xi : xi + big.modes] = f.coeff(xi);
  }
  return out;
}

}  // namespace

Real SpectralField::hermitian_defect() const {
  Real worst = std::abs(coeffs_[0].imag());
  for (int xi = 1; xi <= grid_.band(); ++xi) {
    worst = std::max(worst, std::abs(coeff(xi) - std::conj(coeff(-xi))));
  }
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(grid_ == o.grid_)) throw ConfigError("SpectralField: grid mismatch");
  coeffs_ += o.coeffs_;
  mean_zero_ = mean_zero_ && o.mean_zero_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!(grid_ == o.grid_)) throw ConfigError("SpectralField: grid mismatch");
  coeffs_ -= o.coeffs_;
  mean_zero_ = mean_zero_ && o.mean_zero_;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Real s, SpectralField a) { return a *= s; }

SpectralField forward(const Grid& grid, const VectorXcd& samples) {
  if (samples.size() != grid.modes) {
    throw ConfigError("forward: expected " + std::to_string(grid.modes) + " samples, got " +
                      std::to_string(samples.size()));
  }
  VectorXcd c = dft(samples, -1) * (kSqrtTwoPi / Real(grid.modes));
  SpectralField out(grid, std::move(c));
  return out;
}

SpectralField forward(const Grid& grid, const VectorXd& samples) {
  return forward(grid, VectorXcd(samples.cast<Complex>()));
}

VectorXcd inverse(const SpectralField& f) {
  return dft(f.data(), +1) / kSqrtTwoPi;
}

VectorXd inverse_real(const SpectralField& f) {
  if (f.hermitian_defect() > 1e-9) {
    throw std::logic_error("inverse_real: field is not real-valued");
  }
  return inverse(f).real();
}

Real l2_norm(const SpectralField& f) { return f.data().norm(); }

SpectralField project(const SpectralField& f, Real n, Band side) {
  if (n <= 0) throw ConfigError("project: cutoff must be positive");
  SpectralField out(f.grid());
  for (int xi = -f.grid().band(); xi <= f.grid().band(); ++xi) {
    const bool low = std::abs(Real(xi)) <= n;
    if ((side == Band::Low) == low) out.set_coeff(xi, f.coeff(xi));
  }
  if (f.mean_zero() || (side == Band::High && n >= 0)) out.set_mean_zero();
  return out;
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw ConfigError("convolve: grid mismatch");
  const Grid big(2 * f.grid().modes);
  SpectralField fb(big, embed(f, big));
  SpectralField gb(big, embed(g, big));
  VectorXcd prod = inverse(fb).cwiseProduct(inverse(gb));
  SpectralField hb = forward(big, prod);
  VectorXcd out = VectorXcd::Zero(f.grid().modes);
  for (int xi = -f.grid().band(); xi <= f.grid().band(); ++xi) {
    out[xi >= 0 ? xi : xi + f.grid().modes] = hb.coeff(xi);
  }
  return SpectralField(f.grid(), std::move(out));
}

std::pair<SpectralField, Real> galilean_reduce(const SpectralField& f) {
  const Real mean = f.coeff(0).real() / kSqrtTwoPi;
  SpectralField out = f;
  out.set_mean_zero();
  return {std::move(out), mean};
}

std::string to_record(const SpectralField& f) {
  std::string out = "ilw-field 1\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d %d\n", f.grid().modes, f.mean_zero() ? 1 : 0);
  out += buf;
  for (int xi = 0; xi <= f.grid().nyquist(); ++xi) {
    const Complex c = f.coeff(xi);
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", c.real(), c.imag());
    out += buf;
  }
  return out;
}

SpectralField from_record(const std::string& record) {
  std::istringstream in(record);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "ilw-field" || version != 1) throw ConfigError("from_record: bad header");
  int m = 0, mz = 0;
  in >> m >> mz;
  SpectralField f{Grid(m)};
  for (int xi = 0; xi <= m / 2; ++xi) {
    Real re = 0, im = 0;
    if (!(in >> re >> im)) throw ConfigError("from_record: truncated record");
    if (xi == m / 2) continue;
    f.set_coeff(xi, Complex(re, im));
    if (xi > 0) f.set_coeff(-xi, std::conj(Complex(re, im)));
  }
  if (mz) f.set_mean_zero();
  return f;
}

}  // namespace ilw
