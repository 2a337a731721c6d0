#include "shiftdecon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shiftdecon/error.hpp"

namespace shiftdecon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kImagResidueTol = 1e-10;

// exp(+2 i pi m / n) for m = 0..n-1; indexing by (k*i mod n) keeps the phase exact.
std::vector<cplx> unit_roots(int n) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) w[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * kPi * m / n);
  return w;
}

int mod(long long a, int n) {
  const long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::aliasing: return "aliasing";
    case ErrorCode::invariant_violation: return "invariant-violation";
    case ErrorCode::division_by_zero: return "division-by-zero";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::insufficient_points: return "insufficient-points";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Template

Template::Template(std::vector<cplx> coeffs, bool real_valued, std::string label)
    : coeffs_(std::move(coeffs)), K_(0), real_valued_(real_valued), label_(std::move(label)) {
  require(coeffs_.size() % 2 == 1 && coeffs_.size() >= 3, ErrorCode::invalid_parameter,
          "template needs 2K+1 coefficients with K >= 1");
  K_ = static_cast<int>(coeffs_.size() / 2);
  for (const auto& c : coeffs_)
    require(std::isfinite(c.real()) && std::isfinite(c.imag()), ErrorCode::invalid_parameter,
            "template coefficients must be finite");
  if (real_valued_) {
    for (int k = 0; k <= K_; ++k)
      require((*this)[-k] == std::conj((*this)[k]), ErrorCode::invariant_violation,
              "real-valued template is not Hermitian at k=" + std::to_string(k));
  }
}

Template Template::from_nonnegative(std::span<const cplx> half, std::string label) {
  require(half.size() >= 2, ErrorCode::invalid_parameter, "need theta_0..theta_K with K >= 1");
  const int K = static_cast<int>(half.size()) - 1;
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  c[static_cast<std::size_t>(K)] = {half[0].real(), 0.0};
  for (int k = 1; k <= K; ++k) {
    c[static_cast<std::size_t>(K + k)] = half[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(K - k)] = std::conj(half[static_cast<std::size_t>(k)]);
  }
  return Template(std::move(c), true, std::move(label));
}

Template Template::zero(int K, std::string label) {
  require(K >= 1, ErrorCode::invalid_parameter, "K must be >= 1");
  return Template(std::vector<cplx>(static_cast<std::size_t>(2 * K + 1)), true, std::move(label));
}

cplx Template::at(int k) const {
  if (k < -K_ || k > K_) return {0.0, 0.0};
  return (*this)[k];
}

double Template::squared_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double Template::sobolev_norm(double s) const {
  double acc = 0.0;
  for (int k = -K_; k <= K_; ++k) acc += (1.0 + std::pow(std::abs(k), 2.0 * s)) * std::norm((*this)[k]);
  return acc;
}

Template Template::resized(int K) const {
  require(K >= 1, ErrorCode::invalid_parameter, "K must be >= 1");
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) c[static_cast<std::size_t>(k + K)] = at(k);
  return Template(std::move(c), real_valued_, label_);
}

// ---------------------------------------------------------------- ShiftDensity

ShiftDensity::ShiftDensity(GammaFn gamma, SamplerFn sampler, DecayBounds decay, std::string label)
    : gamma_(std::move(gamma)), sampler_(std::move(sampler)), decay_(decay), label_(std::move(label)) {
  require(decay_.beta >= 0.0 && decay_.c_min > 0.0 && decay_.c_max >= decay_.c_min,
          ErrorCode::invalid_parameter, "decay bounds need beta >= 0 and 0 < C_min <= C_max");
}

std::vector<double> ShiftDensity::gamma_sq_table(int k_max) const {
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  for (int k = 0; k <= k_max; ++k) out[static_cast<std::size_t>(k)] = std::norm(gamma(k));
  return out;
}

ShiftDensity laplace_density(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_parameter, "laplace sigma must be > 0");
  const double c = 2.0 * sigma * sigma * kPi * kPi;
  const double scale = sigma / std::numbers::sqrt2;
  auto gamma = [c](int k) { return cplx{1.0 / (1.0 + c * k * k), 0.0}; };
  auto sampler = [scale](Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    const double e = expo(rng);
    return (rng() & 1u) ? scale * e : -scale * e;
  };
  return ShiftDensity(gamma, sampler, {2.0, 1.0 / (c + 1.0), 1.0 / c}, "laplace");
}

ShiftDensity gaussian_density(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_parameter, "gaussian sigma must be > 0");
  const double c = 2.0 * kPi * kPi * sigma * sigma;
  auto gamma = [c](int k) { return cplx{std::exp(-c * k * k), 0.0}; };
  auto sampler = [sigma](Rng& rng) {
    std::normal_distribution<double> normal(0.0, sigma);
    return normal(rng);
  };
  return ShiftDensity(gamma, sampler, {0.0, std::exp(-c), 1.0}, "gaussian");
}

ShiftDensity uniform_density(double half_width) {
  require(half_width > 0.0 && std::isfinite(half_width), ErrorCode::invalid_parameter,
          "uniform half-width must be > 0");
  const double a = half_width;
  auto gamma = [a](int k) {
    const double x = 2.0 * kPi * k * a;
    return cplx{std::sin(x) / x, 0.0};
  };
  auto sampler = [a](Rng& rng) {
    std::uniform_real_distribution<double> uni(-a, a);
    return uni(rng);
  };
  return ShiftDensity(gamma, sampler, {1.0, std::numeric_limits<double>::min(), 1.0 / (2.0 * kPi * a)},
                      "uniform");
}

ShiftDensity point_mass_density() {
  return ShiftDensity([](int) { return cplx{1.0, 0.0}; }, [](Rng&) { return 0.0; }, {0.0, 1.0, 1.0},
                      "point_mass");
}

DecayCheck verify_polynomial_decay(const ShiftDensity& d, int k_max) {
  return verify_polynomial_decay(d, d.decay(), k_max);
}

DecayCheck verify_polynomial_decay(const ShiftDensity& d, const DecayBounds& b, int k_max) {
  require(k_max >= 1, ErrorCode::invalid_parameter, "k_max must be >= 1");
  constexpr double rel = 1e-12;
  for (int k = 1; k <= k_max; ++k) {
    const double scaled = std::abs(d.gamma(k)) * std::pow(static_cast<double>(k), b.beta);
    if (scaled < b.c_min * (1.0 - rel) || scaled > b.c_max * (1.0 + rel)) return {false, k};
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------- synthesis / analysis

std::vector<double> synthesize_coefficients(std::span<const cplx> coeffs, int grid_size) {
  require(coeffs.size() % 2 == 1, ErrorCode::invalid_parameter, "coefficient array must have odd length");
  const int K = static_cast<int>(coeffs.size() / 2);
  require(grid_size >= 2 * K + 1, ErrorCode::aliasing,
          "grid of " + std::to_string(grid_size) + " points aliases frequencies up to K=" + std::to_string(K));
  const auto w = unit_roots(grid_size);
  std::vector<double> out(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k)
      acc += coeffs[static_cast<std::size_t>(k + K)] * w[static_cast<std::size_t>(mod(1LL * k * i, grid_size))];
    require(std::abs(acc.imag()) < kImagResidueTol, ErrorCode::invariant_violation,
            "synthesized samples are not real; coefficients are not Hermitian");
    out[static_cast<std::size_t>(i)] = acc.real();
  }
  return out;
}

std::vector<double> synthesize(const Template& t, int grid_size) {
  require(t.real_valued(), ErrorCode::invariant_violation, "synthesize needs a real-valued template");
  return synthesize_coefficients(t.coeffs(), grid_size);
}

Template analyze(std::span<const double> samples, int K) {
  const int n = static_cast<int>(samples.size());
  require(K >= 1, ErrorCode::invalid_parameter, "K must be >= 1");
  require(n >= 2 * K + 1, ErrorCode::aliasing,
          "K=" + std::to_string(K) + " is above the Nyquist range of " + std::to_string(n) + " samples");
  const auto w = unit_roots(n);
  std::vector<cplx> half(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i)
      acc += samples[static_cast<std::size_t>(i)] * std::conj(w[static_cast<std::size_t>(mod(1LL * k * i, n))]);
    half[static_cast<std::size_t>(k)] = acc / static_cast<double>(n);
  }
  return Template::from_nonnegative(half, "analyzed");
}

}  // namespace shiftdecon
