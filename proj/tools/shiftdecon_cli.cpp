// Command-line front end. Every subcommand is a thin wrapper over library calls.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "shiftdecon/catalog.hpp"
#include "shiftdecon/config.hpp"
#include "shiftdecon/risk.hpp"
#include "shiftdecon/selection.hpp"
#include "shiftdecon/simulator.hpp"
#include "shiftdecon/study.hpp"

namespace sd = shiftdecon;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::map<std::string, std::string> overrides;
};

std::string flag_name(std::string_view key) {
  std::string s(key);
  for (auto& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

void add_common(CLI::App* cmd, CommonArgs& args, std::string_view out_help) {
  cmd->add_option("--config", args.config_path, "key = value config file (flags override it)");
  cmd->add_option("--out", args.out, std::string(out_help));
  for (auto key : sd::config_keys()) {
    const std::string k(key);
    cmd->add_option_function<std::string>(
        flag_name(key), [&args, k](const std::string& v) { args.overrides[k] = v; }, "config key " + k);
  }
}

sd::ExperimentConfig resolve(const CommonArgs& args, const sd::ExperimentConfig& defaults) {
  sd::ExperimentConfig cfg = args.config_path.empty() ? defaults : sd::load_config(args.config_path);
  for (const auto& [k, v] : args.overrides) sd::apply_setting(cfg, k, v);
  sd::validate(cfg);
  return cfg;
}

/// Writes to --out when given, stdout otherwise.
void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw sd::Error(sd::ErrorCode::io, "cannot write " + out);
  f << content;
}

std::string csv_real(double v) { return fmt::format("{}", v); }

int run_simulate(const sd::ExperimentConfig& cfg, const CommonArgs& args, const std::string& coeff_out) {
  const auto t = sd::template_by_name(cfg.template_name, cfg.K);
  const auto d = sd::density_by_name(cfg.density, cfg.density_param);
  const auto obs = sd::simulate(t, d, cfg.n, cfg.epsilon, cfg.seed);
  std::ostringstream curves;
  sd::write_curves_csv(curves, sd::render_curves(obs, cfg.grid_size, cfg.curves_shown));
  emit(args.out, curves.str());
  if (!coeff_out.empty()) {
    std::ostringstream os;
    os << "k,c_tilde_re,c_tilde_im,gamma_tilde_re,gamma_tilde_im\n";
    for (int k = -obs.K; k <= obs.K; ++k)
      os << k << ',' << csv_real(obs.c(k).real()) << ',' << csv_real(obs.c(k).imag()) << ','
         << csv_real(obs.g(k).real()) << ',' << csv_real(obs.g(k).imag()) << '\n';
    emit(coeff_out, os.str());
  }
  return 0;
}

int run_select(const sd::ExperimentConfig& cfg, const CommonArgs& args) {
  const auto t = sd::template_by_name(cfg.template_name, cfg.K);
  const auto d = sd::density_by_name(cfg.density, cfg.density_param);
  const auto obs = sd::simulate(t, d, cfg.n, cfg.epsilon, cfg.seed);
  const auto sel = sd::select_cutoff(obs, d, cfg.criterion, cfg.selection_options());
  std::ostringstream os;
  sd::write_selection_csv(os, sel);
  emit(args.out, os.str());
  std::cerr << fmt::format("criterion={} m0={} chosen_n={} negative_theta_hat={}\n", sd::to_string(sel.kind),
                           sel.m0, sel.chosen_n, sel.negative_theta_hat);
  return 0;
}

int run_estimate(const sd::ExperimentConfig& cfg, const CommonArgs& args) {
  const auto t = sd::template_by_name(cfg.template_name, cfg.K);
  const auto d = sd::density_by_name(cfg.density, cfg.density_param);
  const auto obs = sd::simulate(t, d, cfg.n, cfg.epsilon, cfg.seed);
  sd::SpectralEstimate est;
  if (cfg.fixed_cutoff) {
    est = sd::estimate(obs, d, *cfg.fixed_cutoff, sd::EstimateKind::fixed_n);
  } else {
    const auto kind = cfg.criterion == sd::Criterion::u_bar     ? sd::EstimateKind::theta_star
                      : cfg.criterion == sd::Criterion::u_tilde ? sd::EstimateKind::theta_tilde
                                                                : sd::EstimateKind::theta_u;
    est = sd::adaptive_estimate(obs, d, kind, cfg.selection_options());
  }
  const auto f = sd::synthesize(t, cfg.grid_size);
  const auto fhat = sd::synthesize_coefficients(est.coeffs, cfg.grid_size);
  std::ostringstream os;
  os << "x,template,estimate\n";
  for (int i = 0; i < cfg.grid_size; ++i)
    os << csv_real(static_cast<double>(i) / cfg.grid_size) << ',' << csv_real(f[static_cast<std::size_t>(i)]) << ','
       << csv_real(fhat[static_cast<std::size_t>(i)]) << '\n';
  emit(args.out, os.str());
  std::cerr << fmt::format("kind={} cutoff={} squared_error={}\n", sd::to_string(est.kind), est.cutoff,
                           est.squared_distance(t));
  return 0;
}

int run_risk(const sd::ExperimentConfig& cfg, const CommonArgs& args) {
  const auto t = sd::template_by_name(cfg.template_name, cfg.K);
  const auto d = sd::density_by_name(cfg.density, cfg.density_param);
  const auto opts = cfg.selection_options();
  const int m0 = sd::effective_m0(d, cfg.n, cfg.K, opts);
  const auto report = sd::risk_report(t, d, cfg.n, cfg.epsilon, m0, opts);
  std::ostringstream os;
  sd::write_risk_csv(os, report);
  emit(args.out, os.str());
  std::cerr << fmt::format("m0={} oracle_r={} oracle_r_bar={} oracle_r_tilde={}\n", m0, report.oracle_r,
                           report.oracle_r_bar, report.oracle_r_tilde);
  return 0;
}

int run_study(const sd::ExperimentConfig& cfg, const CommonArgs& args) {
  if (args.out.empty()) throw sd::Error(sd::ErrorCode::invalid_parameter, "study-section4 needs --out DIR");
  const auto report = sd::run_section4_study(cfg);
  sd::write_study_bundle(args.out, report);
  std::cerr << fmt::format("m0_formula={} m0_used={} median_n_star={} median_n_tilde={}\n", report.m0_formula,
                           report.m0_used, sd::quantile(report.n_star, 0.5), sd::quantile(report.n_tilde, 0.5));
  return 0;
}

int run_rate(const sd::ExperimentConfig& cfg, const CommonArgs& args) {
  const auto d = sd::density_by_name(cfg.density, cfg.density_param);
  sd::RateStudyConfig rc;
  rc.s = cfg.rate_s;
  rc.A = cfg.rate_A;
  rc.K = cfg.K;
  rc.n_grid = cfg.rate_n_grid;
  rc.epsilon = cfg.rate_epsilon;
  rc.mc = {cfg.replications, cfg.seed, cfg.threads};
  rc.estimator = cfg.criterion == sd::Criterion::u_bar ? sd::EstimateKind::theta_star : sd::EstimateKind::theta_tilde;
  const auto study = sd::rate_study(d, rc, cfg.selection_options());
  std::ostringstream os;
  sd::write_rate_csv(os, study);
  emit(args.out, os.str());
  return 0;
}

void report_error(const sd::Error& e) {
  std::string extra;
  if (const auto* ce = dynamic_cast<const sd::ConfigError*>(&e)) {
    if (!ce->key().empty()) extra += " key=" + ce->key();
    if (ce->line() > 0) extra += " line=" + std::to_string(ce->line());
  }
  std::string msg = e.what();
  for (auto& c : msg)
    if (c == '"') c = '\'';
  std::cerr << "error code=" << sd::to_string(e.code()) << extra << " message=\"" << msg << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template estimation from randomly shifted noisy curves"};
  app.require_subcommand(1);

  CommonArgs sim_args, est_args, risk_args, sel_args, study_args, rate_args;
  std::string coeff_out;

  auto* sim = app.add_subcommand("simulate", "simulate one dataset and write rendered curves as CSV");
  add_common(sim, sim_args, "curves CSV (stdout if omitted)");
  sim->add_option("--coefficients", coeff_out, "also write c~_k and gamma~_k as CSV");

  auto* est = app.add_subcommand("estimate", "simulate, select a cutoff and write the estimate on the grid");
  add_common(est, est_args, "estimate CSV (stdout if omitted)");

  auto* risk = app.add_subcommand("risk", "exact risk curves for N = 0..m0");
  add_common(risk, risk_args, "risk CSV (stdout if omitted)");

  auto* sel = app.add_subcommand("select", "criterion trace and chosen cutoff for one dataset");
  add_common(sel, sel_args, "selection CSV (stdout if omitted)");

  auto* study = app.add_subcommand("study-section4", "replicated cutoff-selection study, written as a CSV bundle");
  add_common(study, study_args, "output directory");

  auto* rate = app.add_subcommand("rate-study", "Monte Carlo MISE over a grid of n with a log-log slope fit");
  add_common(rate, rate_args, "rate CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error code=usage message=\"" << e.what() << "\"\n";
    return 2;
  }

  const sd::ExperimentConfig defaults;
  try {
    if (sim->parsed()) return run_simulate(resolve(sim_args, defaults), sim_args, coeff_out);
    if (est->parsed()) return run_estimate(resolve(est_args, defaults), est_args);
    if (risk->parsed()) return run_risk(resolve(risk_args, defaults), risk_args);
    if (sel->parsed()) return run_select(resolve(sel_args, defaults), sel_args);
    if (study->parsed()) return run_study(resolve(study_args, defaults), study_args);
    if (rate->parsed()) return run_rate(resolve(rate_args, defaults), rate_args);
  } catch (const sd::Error& e) {
    report_error(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error code=internal message=\"" << e.what() << "\"\n";
    return 3;
  }
  return 0;
}
