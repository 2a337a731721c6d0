#include "shiftdecon/selection.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "shiftdecon/error.hpp"

namespace shiftdecon {

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::u: return "u";
    case Criterion::u_bar: return "u_bar";
    case Criterion::u_tilde: return "u_tilde";
  }
  return "?";
}

std::string_view to_string(LogBase b) { return b == LogBase::natural ? "natural" : "decimal"; }

std::string_view to_string(PenaltyVariant p) {
  return p == PenaltyVariant::proof_form ? "proof_form" : "printed_form";
}

std::string_view to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::theta_star: return "theta_star";
    case EstimateKind::theta_tilde: return "theta_tilde";
    case EstimateKind::theta_u: return "theta_u";
    case EstimateKind::fixed_n: return "fixed_n";
  }
  return "?";
}

Criterion parse_criterion(std::string_view s) {
  if (s == "u") return Criterion::u;
  if (s == "u_bar") return Criterion::u_bar;
  if (s == "u_tilde") return Criterion::u_tilde;
  fail(ErrorCode::invalid_parameter, "unknown criterion '" + std::string(s) + "' (u, u_bar, u_tilde)");
}

LogBase parse_log_base(std::string_view s) {
  if (s == "natural") return LogBase::natural;
  if (s == "decimal") return LogBase::decimal;
  fail(ErrorCode::invalid_parameter, "unknown log base '" + std::string(s) + "' (natural, decimal)");
}

PenaltyVariant parse_penalty_variant(std::string_view s) {
  if (s == "proof_form") return PenaltyVariant::proof_form;
  if (s == "printed_form") return PenaltyVariant::printed_form;
  fail(ErrorCode::invalid_parameter, "unknown penalty variant '" + std::string(s) + "'");
}

Criterion criterion_for(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::theta_star: return Criterion::u_bar;
    case EstimateKind::theta_tilde: return Criterion::u_tilde;
    case EstimateKind::theta_u: return Criterion::u;
    case EstimateKind::fixed_n: break;
  }
  fail(ErrorCode::invalid_parameter, "fixed_n estimates have no selection criterion");
}

double log_sq_over_n(int n, LogBase base) {
  require(n >= 2, ErrorCode::invalid_parameter, "log^2(n)/n needs n >= 2");
  const double l = base == LogBase::natural ? std::log(static_cast<double>(n)) : std::log10(static_cast<double>(n));
  return l * l / n;
}

M0Result compute_m0(const ShiftDensity& d, int n, int K, const SelectionOptions& opts) {
  require(K >= 1, ErrorCode::invalid_parameter, "K must be >= 1");
  const double threshold = opts.threshold_multiplier * log_sq_over_n(n, opts.log_base);
  for (int k = 1; k <= K; ++k) {
    if (std::norm(d.gamma(k)) <= threshold) return {std::min(k - 1, K), false};
  }
  return {K, true};
}

int effective_m0(const ShiftDensity& d, int n, int K, const SelectionOptions& opts) {
  if (opts.m0_override) {
    require(*opts.m0_override >= 0 && *opts.m0_override <= K, ErrorCode::invalid_parameter,
            "m0 override must lie in [0, K]");
    return *opts.m0_override;
  }
  return compute_m0(d, n, K, opts).value;
}

namespace {

double inv_gamma_sq(const ShiftDensity& d, int k) {
  const double g2 = std::norm(d.gamma(k));
  require(g2 > 0.0, ErrorCode::division_by_zero, "gamma_" + std::to_string(k) + " vanishes");
  return 1.0 / g2;
}

void check_band(const SequenceObservations& obs, int N) {
  require(N >= 0 && N <= obs.K, ErrorCode::invalid_parameter,
          "cutoff " + std::to_string(N) + " outside [0, " + std::to_string(obs.K) + "]");
}

// Contribution of a single frequency k to the chosen criterion.
double criterion_term(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind, int k,
                      double pen_factor, PenaltyVariant variant) {
  const double a = inv_gamma_sq(d, k);
  const double noise = obs.epsilon * obs.epsilon / obs.n;
  const double t = std::norm(obs.c(k)) - noise;
  const double inv_n = 1.0 / obs.n;
  switch (kind) {
    case Criterion::u: return -(1.0 - inv_n) * a * t + noise * a + inv_n * a * a * t;
    case Criterion::u_tilde: return -a * t + noise * a;
    case Criterion::u_bar: {
      const double pen = variant == PenaltyVariant::proof_form ? a * a * t : a * (std::abs(obs.c(k)) - noise);
      return -a * t + noise * a + pen_factor * pen;
    }
  }
  return 0.0;
}

double penalty_factor(int n, const SelectionOptions& opts) {
  return opts.penalty_multiplier * log_sq_over_n(n, opts.log_base);
}

}  // namespace

double theta_hat_squared(const SequenceObservations& obs, const ShiftDensity& d, int k) {
  require(k >= -obs.K && k <= obs.K, ErrorCode::invalid_parameter, "frequency outside observed band");
  return inv_gamma_sq(d, k) * (std::norm(obs.c(k)) - obs.epsilon * obs.epsilon / obs.n);
}

double criterion_u(const SequenceObservations& obs, const ShiftDensity& d, int N) {
  check_band(obs, N);
  const double noise = obs.epsilon * obs.epsilon / obs.n;
  double s_theta = 0.0, s_inv = 0.0, s_theta4 = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double a = inv_gamma_sq(d, k);
    const double t = std::norm(obs.c(k)) - noise;
    s_theta += a * t;
    s_inv += a;
    s_theta4 += a * a * t;
  }
  return -(1.0 - 1.0 / obs.n) * s_theta + noise * s_inv + s_theta4 / obs.n;
}

double criterion_u_tilde(const SequenceObservations& obs, const ShiftDensity& d, int N) {
  check_band(obs, N);
  const double noise = obs.epsilon * obs.epsilon / obs.n;
  double s_theta = 0.0, s_inv = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double a = inv_gamma_sq(d, k);
    s_theta += a * (std::norm(obs.c(k)) - noise);
    s_inv += a;
  }
  return -s_theta + noise * s_inv;
}

double criterion_u_bar(const SequenceObservations& obs, const ShiftDensity& d, int N, const SelectionOptions& opts) {
  check_band(obs, N);
  const double noise = obs.epsilon * obs.epsilon / obs.n;
  double pen = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double a = inv_gamma_sq(d, k);
    pen += opts.penalty == PenaltyVariant::proof_form ? a * a * (std::norm(obs.c(k)) - noise)
                                                      : a * (std::abs(obs.c(k)) - noise);
  }
  return criterion_u_tilde(obs, d, N) + penalty_factor(obs.n, opts) * pen;
}

double criterion_value(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind, int N,
                       const SelectionOptions& opts) {
  switch (kind) {
    case Criterion::u: return criterion_u(obs, d, N);
    case Criterion::u_bar: return criterion_u_bar(obs, d, N, opts);
    case Criterion::u_tilde: return criterion_u_tilde(obs, d, N);
  }
  return 0.0;
}

std::vector<double> criterion_trace(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind,
                                    int max_n, const SelectionOptions& opts) {
  check_band(obs, max_n);
  const double pen = kind == Criterion::u_bar ? penalty_factor(obs.n, opts) : 0.0;
  std::vector<double> trace(static_cast<std::size_t>(max_n + 1));
  double acc = criterion_term(obs, d, kind, 0, pen, opts.penalty);
  trace[0] = acc;
  for (int N = 1; N <= max_n; ++N) {
    acc += criterion_term(obs, d, kind, N, pen, opts.penalty) + criterion_term(obs, d, kind, -N, pen, opts.penalty);
    trace[static_cast<std::size_t>(N)] = acc;
  }
  return trace;
}

int argmin_smallest(const std::vector<double>& values) {
  require(!values.empty(), ErrorCode::invalid_parameter, "argmin of an empty trace");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return static_cast<int>(best);
}

CutoffSelection select_cutoff(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind,
                              const SelectionOptions& opts) {
  CutoffSelection sel;
  sel.kind = kind;
  if (opts.m0_override) {
    sel.m0 = effective_m0(d, obs.n, obs.K, opts);
  } else {
    const auto m0 = compute_m0(d, obs.n, obs.K, opts);
    sel.m0 = m0.value;
    sel.m0_saturated = m0.saturated;
  }
  sel.criterion_values = criterion_trace(obs, d, kind, sel.m0, opts);
  sel.chosen_n = argmin_smallest(sel.criterion_values);
  for (int k = -sel.m0; k <= sel.m0; ++k)
    if (theta_hat_squared(obs, d, k) < 0.0) ++sel.negative_theta_hat;
  return sel;
}

void write_selection_csv(std::ostream& os, const CutoffSelection& sel) {
  os << "N," << to_string(sel.kind) << '\n';
  for (std::size_t N = 0; N < sel.criterion_values.size(); ++N)
    os << fmt::format("{},{}\n", N, sel.criterion_values[N]);
}

double SpectralEstimate::squared_distance(const Template& t) const {
  const int kmax = std::max(K, t.K());
  double s = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    const cplx e = (k >= -K && k <= K) ? (*this)[k] : cplx{};
    s += std::norm(e - t.at(k));
  }
  return s;
}

SpectralEstimate estimate(const SequenceObservations& obs, const ShiftDensity& d, int cutoff, EstimateKind kind) {
  check_band(obs, cutoff);
  SpectralEstimate est;
  est.K = obs.K;
  est.cutoff = cutoff;
  est.kind = kind;
  est.coeffs.assign(obs.width(), cplx{});
  for (int k = -cutoff; k <= cutoff; ++k) {
    const cplx g = d.gamma(k);
    require(std::norm(g) > 0.0, ErrorCode::division_by_zero, "gamma_" + std::to_string(k) + " vanishes");
    est.coeffs[static_cast<std::size_t>(k + obs.K)] = obs.c(k) / g;
  }
  return est;
}

SpectralEstimate adaptive_estimate(const SequenceObservations& obs, const ShiftDensity& d, EstimateKind kind,
                                   const SelectionOptions& opts) {
  const auto sel = select_cutoff(obs, d, criterion_for(kind), opts);
  return estimate(obs, d, sel.chosen_n, kind);
}

}  // namespace shiftdecon
