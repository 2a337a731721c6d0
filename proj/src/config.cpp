#include "shiftdecon/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace shiftdecon {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text, int line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(std::string(key), line, fmt::format("invalid value '{}' for {}", text, key));
  return value;
}

double parse_real(std::string_view key, std::string_view text, int line) {
  // from_chars for double is missing from older libstdc++; strtod on a copy is enough here.
  const std::string copy(text);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v))
    throw ConfigError(std::string(key), line, fmt::format("invalid value '{}' for {}", text, key));
  return v;
}

void check(bool ok, std::string_view key, int line, std::string_view what) {
  if (!ok) throw ConfigError(std::string(key), line, fmt::format("{}: {}", key, what));
}

template <class Fn>
auto rethrow_as_config(std::string_view key, int line, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(key), line, e.what());
  }
}

std::string real_text(double v) { return fmt::format("{}", v); }

}  // namespace

SelectionOptions ExperimentConfig::selection_options() const {
  SelectionOptions o;
  o.log_base = log_base;
  o.threshold_multiplier = threshold_multiplier;
  o.penalty_multiplier = penalty_multiplier;
  o.penalty = penalty_variant;
  o.m0_override = m0_override;
  return o;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "template",        "density",         "density_param",        "n",
      "epsilon",         "K",               "criterion",            "replications",
      "seed",            "m0_override",     "log_base",             "penalty_variant",
      "threshold_multiplier", "penalty_multiplier", "fixed_cutoff", "grid_size",
      "curves_shown",    "threads",         "rate_s",               "rate_A",
      "rate_epsilon",    "rate_n_grid",
  };
  return keys;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value, int line) {
  value = trim(value);
  check(!value.empty(), key, line, "missing value");
  if (key == "template") {
    cfg.template_name = std::string(value);
  } else if (key == "density") {
    check(value == "laplace" || value == "gaussian" || value == "uniform" || value == "point_mass", key, line,
          "expected laplace, gaussian, uniform or point_mass");
    cfg.density = std::string(value);
  } else if (key == "density_param") {
    cfg.density_param = parse_real(key, value, line);
    check(cfg.density_param > 0.0, key, line, "must be > 0");
  } else if (key == "n") {
    cfg.n = parse_number<int>(key, value, line);
    check(cfg.n >= 2, key, line, "must be >= 2");
  } else if (key == "epsilon") {
    cfg.epsilon = parse_real(key, value, line);
    check(cfg.epsilon >= 0.0, key, line, "must be >= 0");
  } else if (key == "K") {
    cfg.K = parse_number<int>(key, value, line);
    check(cfg.K >= 1 && cfg.K <= 4096, key, line, "must lie in [1, 4096]");
  } else if (key == "criterion") {
    cfg.criterion = rethrow_as_config(key, line, [&] { return parse_criterion(value); });
  } else if (key == "replications") {
    cfg.replications = parse_number<int>(key, value, line);
    check(cfg.replications >= 1, key, line, "must be >= 1");
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "m0_override") {
    if (value == "none") {
      cfg.m0_override.reset();
    } else {
      cfg.m0_override = parse_number<int>(key, value, line);
      check(*cfg.m0_override >= 0, key, line, "must be >= 0 or 'none'");
    }
  } else if (key == "log_base") {
    cfg.log_base = rethrow_as_config(key, line, [&] { return parse_log_base(value); });
  } else if (key == "penalty_variant") {
    cfg.penalty_variant = rethrow_as_config(key, line, [&] { return parse_penalty_variant(value); });
  } else if (key == "threshold_multiplier") {
    cfg.threshold_multiplier = parse_real(key, value, line);
    check(cfg.threshold_multiplier > 0.0, key, line, "must be > 0");
  } else if (key == "penalty_multiplier") {
    cfg.penalty_multiplier = parse_real(key, value, line);
    check(cfg.penalty_multiplier >= 0.0, key, line, "must be >= 0");
  } else if (key == "fixed_cutoff") {
    if (value == "none") {
      cfg.fixed_cutoff.reset();
    } else {
      cfg.fixed_cutoff = parse_number<int>(key, value, line);
      check(*cfg.fixed_cutoff >= 0, key, line, "must be >= 0 or 'none'");
    }
  } else if (key == "grid_size") {
    cfg.grid_size = parse_number<int>(key, value, line);
    check(cfg.grid_size >= 3, key, line, "must be >= 3");
  } else if (key == "curves_shown") {
    cfg.curves_shown = parse_number<int>(key, value, line);
    check(cfg.curves_shown >= 0, key, line, "must be >= 0");
  } else if (key == "threads") {
    cfg.threads = parse_number<unsigned>(key, value, line);
  } else if (key == "rate_s") {
    cfg.rate_s = parse_real(key, value, line);
    check(cfg.rate_s > 0.0, key, line, "must be > 0");
  } else if (key == "rate_A") {
    cfg.rate_A = parse_real(key, value, line);
    check(cfg.rate_A > 0.0, key, line, "must be > 0");
  } else if (key == "rate_epsilon") {
    cfg.rate_epsilon = parse_real(key, value, line);
    check(cfg.rate_epsilon >= 0.0, key, line, "must be >= 0");
  } else if (key == "rate_n_grid") {
    std::vector<int> grid;
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      grid.push_back(parse_number<int>(key, item, line));
      check(grid.back() >= 2, key, line, "sample sizes must be >= 2");
      if (grid.size() > 1) check(grid.back() > grid[grid.size() - 2], key, line, "must be strictly increasing");
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    check(grid.size() >= 3, key, line, "needs at least 3 sample sizes");
    cfg.rate_n_grid = std::move(grid);
  } else {
    throw ConfigError(std::string(key), line, fmt::format("unknown key '{}'", key));
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError({}, line, fmt::format("line {}: expected key = value", line));
    const auto key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError({}, line, fmt::format("line {}: empty key", line));
    try {
      apply_setting(cfg, key, s.substr(eq + 1), line);
    } catch (const ConfigError& e) {
      throw ConfigError(e.key(), line, fmt::format("line {}: {}", line, e.what()));
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file " + path);
  return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
  check(cfg.grid_size >= 2 * cfg.K + 1, "grid_size", 0, "must be >= 2K+1");
  if (cfg.m0_override) check(*cfg.m0_override <= cfg.K, "m0_override", 0, "must be <= K");
  if (cfg.fixed_cutoff) check(*cfg.fixed_cutoff <= cfg.K, "fixed_cutoff", 0, "must be <= K");
  if (cfg.template_name == "wave") check(cfg.K >= 8, "K", 0, "the wave template needs K >= 8");
}

std::string serialize(const ExperimentConfig& cfg) {
  std::string grid;
  for (std::size_t i = 0; i < cfg.rate_n_grid.size(); ++i)
    grid += (i ? "," : "") + std::to_string(cfg.rate_n_grid[i]);
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  put("template", cfg.template_name);
  put("density", cfg.density);
  put("density_param", real_text(cfg.density_param));
  put("n", std::to_string(cfg.n));
  put("epsilon", real_text(cfg.epsilon));
  put("K", std::to_string(cfg.K));
  put("criterion", std::string(to_string(cfg.criterion)));
  put("replications", std::to_string(cfg.replications));
  put("seed", std::to_string(cfg.seed));
  put("m0_override", cfg.m0_override ? std::to_string(*cfg.m0_override) : "none");
  put("log_base", std::string(to_string(cfg.log_base)));
  put("penalty_variant", std::string(to_string(cfg.penalty_variant)));
  put("threshold_multiplier", real_text(cfg.threshold_multiplier));
  put("penalty_multiplier", real_text(cfg.penalty_multiplier));
  put("fixed_cutoff", cfg.fixed_cutoff ? std::to_string(*cfg.fixed_cutoff) : "none");
  put("grid_size", std::to_string(cfg.grid_size));
  put("curves_shown", std::to_string(cfg.curves_shown));
  put("threads", std::to_string(cfg.threads));
  put("rate_s", real_text(cfg.rate_s));
  put("rate_A", real_text(cfg.rate_A));
  put("rate_epsilon", real_text(cfg.rate_epsilon));
  put("rate_n_grid", grid);
  return out;
}

}  // namespace shiftdecon
