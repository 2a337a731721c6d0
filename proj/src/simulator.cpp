#include "shiftdecon/simulator.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "shiftdecon/error.hpp"
#include "shiftdecon/replicate.hpp"

namespace shiftdecon {

SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, Rng& rng) {
  require(n >= 1, ErrorCode::invalid_parameter, "n must be >= 1");
  require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorCode::invalid_parameter, "epsilon must be >= 0");

  SequenceObservations obs;
  obs.n = n;
  obs.K = t.K();
  obs.epsilon = epsilon;
  const int K = t.K();
  const std::size_t width = obs.width();
  obs.per_curve.assign(static_cast<std::size_t>(n) * width, cplx{});
  obs.c_tilde.assign(width, cplx{});
  obs.gamma_tilde.assign(width, cplx{});

  obs.shifts.resize(static_cast<std::size_t>(n));
  for (auto& tau : obs.shifts) tau = d.sample(rng);

  std::normal_distribution<double> half_var(0.0, std::sqrt(0.5));
  std::normal_distribution<double> unit_var(0.0, 1.0);
  std::vector<cplx> phase(width);

  for (int j = 0; j < n; ++j) {
    const double tau = obs.shifts[static_cast<std::size_t>(j)];
    phase[static_cast<std::size_t>(K)] = {1.0, 0.0};
    for (int k = 1; k <= K; ++k) {
      const cplx p = std::polar(1.0, -2.0 * std::numbers::pi * k * tau);
      phase[static_cast<std::size_t>(K + k)] = p;
      phase[static_cast<std::size_t>(K - k)] = std::conj(p);
    }
    cplx* row = obs.per_curve.data() + static_cast<std::size_t>(j) * width;
    row[K] = t[0] + epsilon * unit_var(rng);
    for (int k = 1; k <= K; ++k) {
      const double re = half_var(rng);
      const double im = half_var(rng);
      const cplx z{re, im};
      row[K + k] = t[k] * phase[static_cast<std::size_t>(K + k)] + epsilon * z;
      row[K - k] = t[-k] * phase[static_cast<std::size_t>(K - k)] + epsilon * std::conj(z);
    }
    for (std::size_t i = 0; i < width; ++i) {
      obs.c_tilde[i] += row[i];
      obs.gamma_tilde[i] += phase[i];
    }
  }
  const auto dn = static_cast<double>(n);
  for (std::size_t i = 0; i < width; ++i) {
    obs.c_tilde[i] /= dn;
    obs.gamma_tilde[i] /= dn;  // exact 1 at k = 0
  }
  return obs;
}

SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  return simulate(t, d, n, epsilon, rng);
}

SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, int K, Rng& rng) {
  require(t.K() == K, ErrorCode::invalid_parameter,
          fmt::format("template has K = {} but K = {} was requested", t.K(), K));
  return simulate(t, d, n, epsilon, rng);
}

std::vector<std::vector<double>> render_curves(const SequenceObservations& obs, int grid_size,
                                               std::optional<int> rows) {
  require(!obs.per_curve.empty(), ErrorCode::invalid_parameter, "observations carry no per-curve coefficients");
  const int count = rows ? std::min(*rows, obs.n) : obs.n;
  require(count >= 0, ErrorCode::invalid_parameter, "row count must be >= 0");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<cplx> sym(obs.width());
  for (int j = 0; j < count; ++j) {
    auto row = obs.curve_row(j);
    for (int k = -obs.K; k <= obs.K; ++k) {
      const cplx a = row[static_cast<std::size_t>(k + obs.K)];
      const cplx b = std::conj(row[static_cast<std::size_t>(-k + obs.K)]);
      sym[static_cast<std::size_t>(k + obs.K)] = 0.5 * (a + b);
    }
    out.push_back(synthesize_coefficients(sym, grid_size));
  }
  return out;
}

void write_curves_csv(std::ostream& os, const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) {
    os << "curve\n";
    return;
  }
  const std::size_t g = curves.front().size();
  os << "curve";
  for (std::size_t i = 0; i < g; ++i) os << fmt::format(",{}", static_cast<double>(i) / static_cast<double>(g));
  os << '\n';
  for (std::size_t j = 0; j < curves.size(); ++j) {
    os << j;
    for (double v : curves[j]) os << fmt::format(",{}", v);
    os << '\n';
  }
}

}  // namespace shiftdecon
