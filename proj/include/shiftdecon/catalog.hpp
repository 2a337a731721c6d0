#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "shiftdecon/spectral.hpp"

namespace shiftdecon {

/// Smooth 1-periodic wave used as the default template. The low band
/// (|k| <= 7) is a fixed coefficient list; for k >= 8 the coefficients follow
/// 0.6 (-1)^k / k^2, so |theta_k| stays above the default noise level up to
/// k ~ 30. This is a stand-in shape, not a recovered published curve.
/// Requires K >= 8.
Template wave_template(int K);

/// Single frequency: theta_{+-k0} = amplitude, everything else zero.
Template spike_template(int K, int k0 = 3, double amplitude = 0.5);

/// Reads "k,re,im" rows for k = 0..K (header optional) and extends by conjugation.
Template load_template_csv(const std::filesystem::path& path);

/// "wave", "spike", "sobolev" (s = 2, A = 1), "zero", or a path to a coefficient CSV.
Template template_by_name(std::string_view name, int K);

/// "laplace" (param = sigma), "gaussian" (sigma), "uniform" (half width) or "point_mass".
ShiftDensity density_by_name(std::string_view kind, double param);

}  // namespace shiftdecon
