#include "shiftdecon/catalog.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "shiftdecon/error.hpp"
#include "shiftdecon/risk.hpp"

namespace shiftdecon {

namespace {

// theta_0..theta_7 of the wave stand-in.
constexpr std::array<cplx, 8> kWaveLowBand = {
    cplx{0.0, 0.0},  cplx{0.5, -0.3}, cplx{0.0, 0.35},  cplx{-0.2, 0.0},
    cplx{0.1, 0.05}, cplx{0.0, -0.06}, cplx{0.04, 0.0}, cplx{0.03, 0.0},
};
constexpr double kWaveTailAmplitude = 0.6;

}  // namespace

Template wave_template(int K) {
  require(K >= 8, ErrorCode::invalid_parameter, "wave template needs K >= 8");
  std::vector<cplx> half(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    if (k < static_cast<int>(kWaveLowBand.size())) {
      half[static_cast<std::size_t>(k)] = kWaveLowBand[static_cast<std::size_t>(k)];
    } else {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      half[static_cast<std::size_t>(k)] = sign * kWaveTailAmplitude / (static_cast<double>(k) * k);
    }
  }
  return Template::from_nonnegative(half, "wave");
}

Template spike_template(int K, int k0, double amplitude) {
  require(k0 >= 0 && k0 <= K, ErrorCode::invalid_parameter, "spike frequency outside [0, K]");
  std::vector<cplx> half(static_cast<std::size_t>(K + 1));
  half[static_cast<std::size_t>(k0)] = amplitude;
  return Template::from_nonnegative(half, "spike");
}

Template load_template_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open template file " + path.string());
  std::vector<cplx> half;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
    std::istringstream row(line);
    std::string f0, f1, f2;
    if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') || !std::getline(row, f2))
      fail(ErrorCode::invalid_config, path.string() + ":" + std::to_string(lineno) + ": expected k,re,im");
    try {
      const int k = std::stoi(f0);
      require(k == static_cast<int>(half.size()), ErrorCode::invalid_config,
              path.string() + ":" + std::to_string(lineno) + ": frequencies must run 0,1,2,...");
      half.emplace_back(std::stod(f1), std::stod(f2));
    } catch (const std::logic_error&) {
      fail(ErrorCode::invalid_config, path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  require(half.size() >= 2, ErrorCode::invalid_config, path.string() + ": need coefficients for k = 0..K, K >= 1");
  require(half[0].imag() == 0.0, ErrorCode::invalid_config, path.string() + ": theta_0 must be real");
  return Template::from_nonnegative(half, path.stem().string());
}

Template template_by_name(std::string_view name, int K) {
  if (name == "wave") return wave_template(K);
  if (name == "spike") return spike_template(K);
  if (name == "sobolev") return sobolev_template(2.0, 1.0, K);
  if (name == "zero") return Template::zero(K);
  Template t = load_template_csv(std::filesystem::path(name));
  require(t.K() <= K, ErrorCode::invalid_config,
          "template file has K=" + std::to_string(t.K()) + " above the configured K=" + std::to_string(K));
  return t.resized(K);
}

ShiftDensity density_by_name(std::string_view kind, double param) {
  if (kind == "laplace") return laplace_density(param);
  if (kind == "gaussian") return gaussian_density(param);
  if (kind == "uniform") return uniform_density(param);
  if (kind == "point_mass") return point_mass_density();
  fail(ErrorCode::invalid_config, "unknown density '" + std::string(kind) + "'");
}

}  // namespace shiftdecon
