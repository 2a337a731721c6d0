#include "shiftdecon/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "shiftdecon/catalog.hpp"
#include "shiftdecon/replicate.hpp"
#include "shiftdecon/simulator.hpp"

namespace shiftdecon {

namespace {

void mean_and_stderr(const std::vector<double>& v, double& mean, double& se) {
  double sum = 0.0;
  for (double x : v) sum += x;
  mean = sum / static_cast<double>(v.size());
  se = 0.0;
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::vector<int> histogram(const std::vector<int>& values, int max_n) {
  std::vector<int> h(static_cast<std::size_t>(max_n + 1), 0);
  for (int v : values) ++h[static_cast<std::size_t>(v)];
  return h;
}

std::string g17(double v) { return fmt::format("{}", v); }

}  // namespace

double quantile(std::vector<int> values, double q) {
  require(!values.empty(), ErrorCode::invalid_parameter, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

StudyReport run_section4_study(const ExperimentConfig& cfg) {
  validate(cfg);
  StudyReport rep;
  rep.config = cfg;
  const Template t = template_by_name(cfg.template_name, cfg.K);
  const ShiftDensity d = density_by_name(cfg.density, cfg.density_param);
  const SelectionOptions opts = cfg.selection_options();

  const auto m0 = compute_m0(d, cfg.n, cfg.K, opts);
  rep.m0_formula = m0.value;
  rep.m0_saturated = m0.saturated;
  rep.m0_used = effective_m0(d, cfg.n, cfg.K, opts);

  const auto M = static_cast<std::size_t>(cfg.replications);
  rep.n_star.assign(M, 0);
  rep.n_tilde.assign(M, 0);
  rep.loss_star.assign(M, 0.0);
  rep.loss_tilde.assign(M, 0.0);

  parallel_for(M, cfg.threads, [&](std::size_t r) {
    Rng rng = substream(cfg.seed, r);
    const auto obs = simulate(t, d, cfg.n, cfg.epsilon, rng);
    const auto star = select_cutoff(obs, d, Criterion::u_bar, opts);
    const auto tilde = select_cutoff(obs, d, Criterion::u_tilde, opts);
    const auto est_star = estimate(obs, d, star.chosen_n, EstimateKind::theta_star);
    const auto est_tilde = estimate(obs, d, tilde.chosen_n, EstimateKind::theta_tilde);
    rep.n_star[r] = star.chosen_n;
    rep.n_tilde[r] = tilde.chosen_n;
    rep.loss_star[r] = est_star.squared_distance(t);
    rep.loss_tilde[r] = est_tilde.squared_distance(t);
    if (r == 0) {
      rep.curves = render_curves(obs, cfg.grid_size, cfg.curves_shown);
      rep.estimate_star_samples = synthesize_coefficients(est_star.coeffs, cfg.grid_size);
      rep.estimate_tilde_samples = synthesize_coefficients(est_tilde.coeffs, cfg.grid_size);
    }
  });

  rep.template_samples = synthesize(t, cfg.grid_size);
  rep.histogram_star = histogram(rep.n_star, rep.m0_used);
  rep.histogram_tilde = histogram(rep.n_tilde, rep.m0_used);
  mean_and_stderr(rep.loss_star, rep.mean_loss_star, rep.stderr_loss_star);
  mean_and_stderr(rep.loss_tilde, rep.mean_loss_tilde, rep.stderr_loss_tilde);
  rep.risk = risk_report(t, d, cfg.n, cfg.epsilon, rep.m0_used, opts);
  return rep;
}

std::map<std::string, std::string> render_study_bundle(const StudyReport& rep) {
  std::map<std::string, std::string> files;
  const int g = rep.config.grid_size;

  // thread count is an execution detail; bundles must not depend on it
  ExperimentConfig shown = rep.config;
  shown.threads = 0;
  files["config.txt"] = serialize(shown);

  files["m0.csv"] = fmt::format("m0_formula,m0_saturated,m0_used\n{},{},{}\n", rep.m0_formula,
                                rep.m0_saturated ? 1 : 0, rep.m0_used);

  {
    std::ostringstream os;
    os << "x,template,theta_star,theta_tilde\n";
    for (int i = 0; i < g; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      os << g17(static_cast<double>(i) / g) << ',' << g17(rep.template_samples[idx]) << ','
         << g17(rep.estimate_star_samples[idx]) << ',' << g17(rep.estimate_tilde_samples[idx]) << '\n';
    }
    files["estimates.csv"] = os.str();
  }
  {
    std::ostringstream os;
    write_curves_csv(os, rep.curves);
    files["curves.csv"] = os.str();
  }
  {
    std::ostringstream os;
    os << "replicate,n_star,n_tilde,loss_star,loss_tilde\n";
    for (std::size_t r = 0; r < rep.n_star.size(); ++r)
      os << r << ',' << rep.n_star[r] << ',' << rep.n_tilde[r] << ',' << g17(rep.loss_star[r]) << ','
         << g17(rep.loss_tilde[r]) << '\n';
    files["selections.csv"] = os.str();
  }
  {
    std::ostringstream os;
    os << "N,count_u_bar,count_u_tilde\n";
    for (std::size_t N = 0; N < rep.histogram_star.size(); ++N)
      os << N << ',' << rep.histogram_star[N] << ',' << rep.histogram_tilde[N] << '\n';
    files["histogram.csv"] = os.str();
  }
  {
    std::ostringstream os;
    os << "estimator,mean_loss,stderr,median_cutoff,upper_quartile_cutoff,oracle_cutoff\n";
    os << "theta_star," << g17(rep.mean_loss_star) << ',' << g17(rep.stderr_loss_star) << ','
       << g17(quantile(rep.n_star, 0.5)) << ',' << g17(quantile(rep.n_star, 0.75)) << ',' << rep.risk.oracle_r_bar
       << '\n';
    os << "theta_tilde," << g17(rep.mean_loss_tilde) << ',' << g17(rep.stderr_loss_tilde) << ','
       << g17(quantile(rep.n_tilde, 0.5)) << ',' << g17(quantile(rep.n_tilde, 0.75)) << ',' << rep.risk.oracle_r
       << '\n';
    files["risk_summary.csv"] = os.str();
  }
  {
    std::ostringstream os;
    write_risk_csv(os, rep.risk);
    files["risk_curves.csv"] = os.str();
  }
  return files;
}

void write_study_bundle(const std::filesystem::path& dir, const StudyReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + dir.string());
  for (const auto& [name, content] : render_study_bundle(report)) {
    std::ofstream out(dir / name, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io, "cannot write " + (dir / name).string());
    out << content;
  }
}

}  // namespace shiftdecon
