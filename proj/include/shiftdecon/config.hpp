#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shiftdecon/error.hpp"
#include "shiftdecon/selection.hpp"

namespace shiftdecon {

/// Experiment parameters. Defaults reproduce the numerical study: wave
/// template, Laplace shifts with sigma = 0.1, n = 100 curves, M = 100
/// replications and m0 forced to 32.
struct ExperimentConfig {
  std::string template_name = "wave";
  std::string density = "laplace";
  double density_param = 0.1;
  int n = 100;
  double epsilon = 5e-4;
  int K = 64;
  Criterion criterion = Criterion::u_bar;
  int replications = 100;
  std::uint64_t seed = 20100301;
  std::optional<int> m0_override = 32;
  LogBase log_base = LogBase::natural;
  PenaltyVariant penalty_variant = PenaltyVariant::proof_form;
  double threshold_multiplier = 1.0;
  double penalty_multiplier = 1.0;
  std::optional<int> fixed_cutoff;
  int grid_size = 256;
  int curves_shown = 10;
  unsigned threads = 0;
  // rate-study
  double rate_s = 2.0;
  double rate_A = 1.0;
  double rate_epsilon = 1.0;
  std::vector<int> rate_n_grid = {200, 400, 800, 1600, 3200, 6400};

  SelectionOptions selection_options() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Config errors carry the offending key and line (0 when not from a file).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& what)
      : Error(ErrorCode::invalid_config, what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Every accepted key, in serialization order.
const std::vector<std::string_view>& config_keys();

/// Sets one field from its text form; unknown keys and out-of-range values throw ConfigError.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value, int line = 0);

/// "key = value" lines; '#' starts a comment. Starts from the defaults.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks (grid vs K, m0 override vs K, ...).
void validate(const ExperimentConfig& cfg);

/// Writes every key in canonical order; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& cfg);

}  // namespace shiftdecon
