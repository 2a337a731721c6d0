#include "shiftdecon/risk.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "shiftdecon/error.hpp"
#include "shiftdecon/replicate.hpp"
#include "shiftdecon/simulator.hpp"

namespace shiftdecon {

namespace {

double inv_gamma_sq(const ShiftDensity& d, int k) {
  const double g2 = std::norm(d.gamma(k));
  require(g2 > 0.0, ErrorCode::division_by_zero, "gamma_" + std::to_string(k) + " vanishes");
  return 1.0 / g2;
}

void check_args(int n, double epsilon, int N) {
  require(n >= 1, ErrorCode::invalid_parameter, "n must be >= 1");
  require(epsilon >= 0.0, ErrorCode::invalid_parameter, "epsilon must be >= 0");
  require(N >= 0, ErrorCode::invalid_parameter, "cutoff must be >= 0");
}

double tail_energy(const Template& t, int N) {
  double bias = 0.0;
  for (int k = N + 1; k <= t.K(); ++k) bias += std::norm(t[k]) + std::norm(t[-k]);
  return bias;
}

}  // namespace

RiskTerms exact_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, int N) {
  check_args(n, epsilon, N);
  RiskTerms out;
  out.bias = tail_energy(t, N);
  for (int k = -N; k <= N; ++k) {
    const double a = inv_gamma_sq(d, k);
    out.v1 += a;
    out.v2 += std::norm(t.at(k)) * (a - 1.0);
  }
  out.v1 *= epsilon * epsilon / n;
  out.v2 /= n;
  out.r = out.bias + out.v1 + out.v2;
  return out;
}

double r_tilde(const Template& t, const ShiftDensity& d, int n, double epsilon, int N) {
  check_args(n, epsilon, N);
  double v1 = 0.0;
  for (int k = -N; k <= N; ++k) v1 += inv_gamma_sq(d, k);
  return tail_energy(t, N) + epsilon * epsilon / n * v1;
}

double r_bar(const Template& t, const ShiftDensity& d, int n, double epsilon, int N, const SelectionOptions& opts) {
  check_args(n, epsilon, N);
  double pen = 0.0;
  for (int k = -N; k <= N; ++k) pen += inv_gamma_sq(d, k) * std::norm(t.at(k));
  return r_tilde(t, d, n, epsilon, N) + opts.penalty_multiplier * log_sq_over_n(n, opts.log_base) * pen;
}

RiskReport risk_report(const Template& t, const ShiftDensity& d, int n, double epsilon, int m0,
                       const SelectionOptions& opts) {
  require(m0 >= 0, ErrorCode::invalid_parameter, "m0 must be >= 0");
  RiskReport rep;
  rep.per_n.reserve(static_cast<std::size_t>(m0 + 1));
  std::vector<double> r, rb, rt;
  for (int N = 0; N <= m0; ++N) {
    RiskRow row{exact_risk(t, d, n, epsilon, N), r_bar(t, d, n, epsilon, N, opts), r_tilde(t, d, n, epsilon, N)};
    r.push_back(row.terms.r);
    rb.push_back(row.r_bar);
    rt.push_back(row.r_tilde);
    rep.per_n.push_back(row);
  }
  rep.oracle_r = argmin_smallest(r);
  rep.oracle_r_bar = argmin_smallest(rb);
  rep.oracle_r_tilde = argmin_smallest(rt);
  return rep;
}

void write_risk_csv(std::ostream& os, const RiskReport& report) {
  os << "N,bias,v1,v2,r,r_bar,r_tilde\n";
  for (std::size_t N = 0; N < report.per_n.size(); ++N) {
    const auto& row = report.per_n[N];
    os << fmt::format("{},{},{},{},{},{},{}\n", N, row.terms.bias, row.terms.v1,
                      row.terms.v2, row.terms.r, row.r_bar, row.r_tilde);
  }
}

int oracle_cutoff(const Template& t, const ShiftDensity& d, int n, double epsilon, RiskKind kind, int m0,
                  const SelectionOptions& opts) {
  require(m0 >= 0, ErrorCode::invalid_parameter, "m0 must be >= 0");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m0 + 1));
  for (int N = 0; N <= m0; ++N) {
    switch (kind) {
      case RiskKind::r: values.push_back(exact_risk(t, d, n, epsilon, N).r); break;
      case RiskKind::r_bar: values.push_back(r_bar(t, d, n, epsilon, N, opts)); break;
      case RiskKind::r_tilde: values.push_back(r_tilde(t, d, n, epsilon, N)); break;
    }
  }
  return argmin_smallest(values);
}

double min_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, RiskKind kind, int m0,
                const SelectionOptions& opts) {
  const int N = oracle_cutoff(t, d, n, epsilon, kind, m0, opts);
  switch (kind) {
    case RiskKind::r: return exact_risk(t, d, n, epsilon, N).r;
    case RiskKind::r_bar: return r_bar(t, d, n, epsilon, N, opts);
    case RiskKind::r_tilde: return r_tilde(t, d, n, epsilon, N);
  }
  return 0.0;
}

McRisk mc_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, EstimatorSpec estimator,
               const McConfig& mc, const SelectionOptions& opts) {
  require(mc.replications >= 2, ErrorCode::invalid_parameter, "mc_risk needs at least 2 replications");
  const auto R = static_cast<std::size_t>(mc.replications);
  McRisk out;
  out.losses.assign(R, 0.0);
  out.cutoffs.assign(R, 0);
  parallel_for(R, mc.threads, [&](std::size_t r) {
    Rng rng = substream(mc.seed, r);
    const auto obs = simulate(t, d, n, epsilon, rng);
    const auto est = estimator.kind == EstimateKind::fixed_n
                         ? estimate(obs, d, estimator.fixed_cutoff, EstimateKind::fixed_n)
                         : adaptive_estimate(obs, d, estimator.kind, opts);
    out.losses[r] = est.squared_distance(t);
    out.cutoffs[r] = est.cutoff;
  });
  double sum = 0.0;
  for (double l : out.losses) sum += l;
  out.mean = sum / static_cast<double>(R);
  double ss = 0.0;
  for (double l : out.losses) ss += (l - out.mean) * (l - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R));
  return out;
}

OracleRatio oracle_ratio(const Template& t, const ShiftDensity& d, int n, double epsilon, EstimateKind kind,
                         const McConfig& mc, const SelectionOptions& opts) {
  require(kind != EstimateKind::fixed_n, ErrorCode::invalid_parameter, "oracle ratio needs a data-driven cutoff");
  OracleRatio out;
  out.m0 = effective_m0(d, n, t.K(), opts);
  out.inf_r = min_risk(t, d, n, epsilon, RiskKind::r, out.m0, opts);
  out.inf_r_bar = min_risk(t, d, n, epsilon, RiskKind::r_bar, out.m0, opts);
  out.inf_r_tilde = min_risk(t, d, n, epsilon, RiskKind::r_tilde, out.m0, opts);
  const double denom = kind == EstimateKind::theta_star ? out.inf_r_bar : out.inf_r;
  require(denom > 0.0, ErrorCode::degenerate_input, "oracle risk is zero; ratio undefined");
  out.risk = mc_risk(t, d, n, epsilon, {kind, 0}, mc, opts);
  out.ratio = out.risk.mean / denom;
  out.ratio_vs_r_bar = out.inf_r_bar > 0.0 ? out.risk.mean / out.inf_r_bar : 0.0;
  out.ratio_vs_r_tilde = out.inf_r_tilde > 0.0 ? out.risk.mean / out.inf_r_tilde : 0.0;
  return out;
}

Template sobolev_template(double s, double A, int K, double delta) {
  require(s > 0.0 && A > 0.0 && delta > 0.0, ErrorCode::invalid_parameter, "sobolev template needs s, A, delta > 0");
  require(K >= 1, ErrorCode::invalid_parameter, "K must be >= 1");
  std::vector<cplx> half(static_cast<std::size_t>(K + 1));
  double norm = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double mag = std::pow(static_cast<double>(k), -(s + 0.5 + delta / 2.0));
    half[static_cast<std::size_t>(k)] = mag;
    norm += 2.0 * (1.0 + std::pow(static_cast<double>(k), 2.0 * s)) * mag * mag;
  }
  const double c = std::sqrt(A / norm);
  for (auto& h : half) h *= c;
  return Template::from_nonnegative(half, fmt::format("sobolev_s{}", s));
}

double theoretical_rate_exponent(double s, double beta) { return -2.0 * s / (2.0 * s + 2.0 * beta + 1.0); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::invalid_parameter, "slope fit needs paired samples");
  require(x.size() >= 3, ErrorCode::insufficient_points, "slope fit needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::invalid_parameter, "log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

RateStudy rate_study(const ShiftDensity& d, const RateStudyConfig& cfg, const SelectionOptions& opts) {
  require(cfg.n_grid.size() >= 3, ErrorCode::insufficient_points, "rate study needs at least 3 sample sizes");
  for (std::size_t i = 1; i < cfg.n_grid.size(); ++i)
    require(cfg.n_grid[i] > cfg.n_grid[i - 1], ErrorCode::invalid_parameter, "n grid must be strictly increasing");
  RateStudy out;
  out.s = cfg.s;
  out.beta = d.decay().beta;
  out.n_grid = cfg.n_grid;
  out.theoretical_slope = theoretical_rate_exponent(cfg.s, out.beta);
  const Template t = sobolev_template(cfg.s, cfg.A, cfg.K);
  std::vector<double> xs;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    const int n = cfg.n_grid[i];
    McConfig mc = cfg.mc;
    mc.seed = splitmix64(cfg.mc.seed + i);
    const auto risk = mc_risk(t, d, n, cfg.epsilon, {cfg.estimator, 0}, mc, opts);
    require(risk.mean > 0.0, ErrorCode::degenerate_input, "non-positive MISE in rate study");
    out.mise.push_back(risk.mean);
    out.std_error.push_back(risk.std_error);
    out.m0.push_back(effective_m0(d, n, cfg.K, opts));
    xs.push_back(static_cast<double>(n));
  }
  out.fitted_slope = loglog_slope(xs, out.mise);
  return out;
}

void write_rate_csv(std::ostream& os, const RateStudy& study) {
  os << "n,mise,stderr,m0\n";
  for (std::size_t i = 0; i < study.n_grid.size(); ++i)
    os << fmt::format("{},{},{},{}\n", study.n_grid[i], study.mise[i], study.std_error[i], study.m0[i]);
  os << fmt::format("# fitted_slope={} theoretical_slope={} s={} beta={}\n", study.fitted_slope,
                    study.theoretical_slope, study.s, study.beta);
}

}  // namespace shiftdecon
