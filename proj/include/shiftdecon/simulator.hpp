#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "shiftdecon/spectral.hpp"

namespace shiftdecon {

/// One simulated dataset in sequence space:
///   c_{j,k} = theta_k exp(-2 i pi k tau_j) + epsilon z_{k,j}
/// with frequency-averaged statistics c~_k and gamma~_k.
struct SequenceObservations {
  int n = 0;
  int K = 0;
  double epsilon = 0.0;
  /// Row-major n x (2K+1); row j holds c_{j,-K..K}.
  std::vector<cplx> per_curve;
  std::vector<cplx> c_tilde;      // over -K..K
  std::vector<cplx> gamma_tilde;  // over -K..K
  /// True shifts, kept for diagnostics. Estimators never read them.
  std::vector<double> shifts;

  std::size_t width() const noexcept { return static_cast<std::size_t>(2 * K + 1); }
  cplx curve(int j, int k) const { return per_curve[static_cast<std::size_t>(j) * width() + static_cast<std::size_t>(k + K)]; }
  std::span<const cplx> curve_row(int j) const {
    return std::span<const cplx>(per_curve).subspan(static_cast<std::size_t>(j) * width(), width());
  }
  cplx c(int k) const { return c_tilde[static_cast<std::size_t>(k + K)]; }
  cplx g(int k) const { return gamma_tilde[static_cast<std::size_t>(k + K)]; }
};

/// Draws tau_j from the density and complex Gaussian noise with E|z|^2 = 1.
/// Noise is Hermitian in k (z_{-k} = conj(z_k), z_0 real N(0,1)) so every curve
/// is real. Deterministic in `rng`: shifts are drawn first, then noise curve by curve.
SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, Rng& rng);
SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, std::uint64_t seed);
/// As above, but rejects a template whose band differs from K.
SequenceObservations simulate(const Template& t, const ShiftDensity& d, int n, double epsilon, int K, Rng& rng);

/// Time-domain samples of each curve on x_i = i/grid_size, one row per curve.
/// `rows` limits output to the first curves (all when empty).
std::vector<std::vector<double>> render_curves(const SequenceObservations& obs, int grid_size,
                                               std::optional<int> rows = std::nullopt);

/// CSV: header "curve,x0,x1,..." with grid abscissae, then one row per curve.
void write_curves_csv(std::ostream& os, const std::vector<std::vector<double>>& curves);

}  // namespace shiftdecon
