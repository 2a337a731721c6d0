#pragma once

// Fourier conventions used throughout the library:
//   analysis   theta_k = int_0^1 f(x) exp(-2 i pi k x) dx
//   synthesis  f(x)    = sum_k theta_k exp(+2 i pi k x)

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace shiftdecon {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// Coefficients theta_k for k = -K..K stored flat; index(k) = k + K.
class Template {
 public:
  /// `coeffs` must have length 2K+1. Real-valued templates are checked for
  /// exact Hermitian symmetry.
  Template(std::vector<cplx> coeffs, bool real_valued = true, std::string label = {});

  /// Builds a real-valued template from theta_0..theta_K, filling negative
  /// frequencies by conjugation. theta_0 keeps only its real part.
  static Template from_nonnegative(std::span<const cplx> half, std::string label = {});

  static Template zero(int K, std::string label = "zero");

  int K() const noexcept { return K_; }
  bool real_valued() const noexcept { return real_valued_; }
  const std::string& label() const noexcept { return label_; }

  cplx operator[](int k) const { return coeffs_[static_cast<std::size_t>(k + K_)]; }
  cplx at(int k) const;
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  double squared_norm() const;
  /// sum over |k| <= K of (1 + |k|^{2s}) |theta_k|^2
  double sobolev_norm(double s) const;
  /// Same coefficients viewed with a larger (zero-padded) or smaller band.
  Template resized(int K) const;

 private:
  std::vector<cplx> coeffs_;
  int K_;
  bool real_valued_;
  std::string label_;
};

struct DecayBounds {
  double beta = 0.0;
  double c_min = 1.0;
  double c_max = 1.0;
};

/// Law of the random shifts: exact Fourier coefficients plus a sampler.
/// Samplers draw from the caller's generator and hold no state of their own.
class ShiftDensity {
 public:
  using GammaFn = std::function<cplx(int)>;
  using SamplerFn = std::function<double(Rng&)>;

  ShiftDensity(GammaFn gamma, SamplerFn sampler, DecayBounds decay, std::string label);

  cplx gamma(int k) const { return k == 0 ? cplx{1.0, 0.0} : gamma_(k); }
  double sample(Rng& rng) const { return sampler_(rng); }
  const DecayBounds& decay() const noexcept { return decay_; }
  const std::string& label() const noexcept { return label_; }

  /// |gamma_k|^2 for k = 0..k_max.
  std::vector<double> gamma_sq_table(int k_max) const;

 private:
  GammaFn gamma_;
  SamplerFn sampler_;
  DecayBounds decay_;
  std::string label_;
};

/// Laplace law with standard deviation sigma: g(x) = exp(-sqrt(2)|x|/sigma)/(sqrt(2) sigma),
/// gamma_k = 1/(1 + 2 sigma^2 pi^2 k^2), beta = 2.
ShiftDensity laplace_density(double sigma);

/// Centered Gaussian, gamma_k = exp(-2 pi^2 k^2 sigma^2). Decays faster than any
/// polynomial, so its decay record is nominal only.
ShiftDensity gaussian_density(double sigma);

/// Uniform on [-a, a], gamma_k = sin(2 pi k a)/(2 pi k a). Has exact zeros when 2ka is integer.
ShiftDensity uniform_density(double half_width);

/// No shifts: gamma_k = 1 for all k.
ShiftDensity point_mass_density();

struct DecayCheck {
  bool holds = true;
  std::optional<int> first_violation;
};

/// Checks C_min |k|^-beta <= |gamma_k| <= C_max |k|^-beta for 1 <= k <= k_max
/// against the density's declared bounds (negative k follow by symmetry).
DecayCheck verify_polynomial_decay(const ShiftDensity& d, int k_max);
DecayCheck verify_polynomial_decay(const ShiftDensity& d, const DecayBounds& bounds, int k_max);

/// Evaluates a real-valued template on x_i = i / grid_size.
std::vector<double> synthesize(const Template& t, int grid_size);

/// Same synthesis for an arbitrary coefficient array over -K..K. The imaginary
/// residue must stay below 1e-10; coefficients are not required to be Hermitian
/// beyond that.
std::vector<double> synthesize_coefficients(std::span<const cplx> coeffs, int grid_size);

/// Rectangle-rule analysis of uniform samples on [0,1), returning theta_{-K..K}.
Template analyze(std::span<const double> samples, int K);

}  // namespace shiftdecon
