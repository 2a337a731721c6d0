#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shiftdecon/selection.hpp"
#include "shiftdecon/spectral.hpp"

namespace shiftdecon {

/// Bias / variance split of the projection estimator with band |k| <= N.
struct RiskTerms {
  double bias = 0.0;
  double v1 = 0.0;  // additive noise
  double v2 = 0.0;  // shift randomness
  double r = 0.0;
};

RiskTerms exact_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, int N);
double r_bar(const Template& t, const ShiftDensity& d, int n, double epsilon, int N, const SelectionOptions& opts = {});
double r_tilde(const Template& t, const ShiftDensity& d, int n, double epsilon, int N);

enum class RiskKind { r, r_bar, r_tilde };

struct RiskRow {
  RiskTerms terms;
  double r_bar = 0.0;
  double r_tilde = 0.0;
};

struct RiskReport {
  std::vector<RiskRow> per_n;  // N = 0..m0
  int oracle_r = 0;
  int oracle_r_bar = 0;
  int oracle_r_tilde = 0;
};

RiskReport risk_report(const Template& t, const ShiftDensity& d, int n, double epsilon, int m0,
                       const SelectionOptions& opts = {});
void write_risk_csv(std::ostream& os, const RiskReport& report);

/// Exhaustive argmin over N = 0..m0, smallest N on ties.
int oracle_cutoff(const Template& t, const ShiftDensity& d, int n, double epsilon, RiskKind kind, int m0,
                  const SelectionOptions& opts = {});
double min_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, RiskKind kind, int m0,
                const SelectionOptions& opts = {});

struct EstimatorSpec {
  EstimateKind kind = EstimateKind::theta_tilde;
  int fixed_cutoff = 0;  // only for EstimateKind::fixed_n

  static EstimatorSpec fixed(int N) { return {EstimateKind::fixed_n, N}; }
};

struct McConfig {
  int replications = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct McRisk {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> losses;  // ||theta_hat - theta||^2 per replicate, in replicate order
  std::vector<int> cutoffs;    // cutoff used per replicate
};

/// Replicate r simulates with substream(seed, r), so results do not depend on the
/// number of threads. Means are reduced in replicate order.
McRisk mc_risk(const Template& t, const ShiftDensity& d, int n, double epsilon, EstimatorSpec estimator,
               const McConfig& mc, const SelectionOptions& opts = {});

struct OracleRatio {
  McRisk risk;
  double inf_r = 0.0;
  double inf_r_bar = 0.0;
  double inf_r_tilde = 0.0;
  int m0 = 0;
  /// mc mean / inf R_bar for theta_star, mc mean / inf R otherwise.
  double ratio = 0.0;
  double ratio_vs_r_bar = 0.0;
  double ratio_vs_r_tilde = 0.0;
};

OracleRatio oracle_ratio(const Template& t, const ShiftDensity& d, int n, double epsilon, EstimateKind kind,
                         const McConfig& mc, const SelectionOptions& opts = {});

/// |theta_k| = c |k|^{-(s + 1/2 + delta/2)} for 1 <= |k| <= K, theta_0 = 0, with c
/// chosen so that sum (1 + |k|^{2s}) |theta_k|^2 = A.
Template sobolev_template(double s, double A, int K, double delta = 0.01);

struct RateStudy {
  std::vector<int> n_grid;
  std::vector<double> mise;
  std::vector<double> std_error;
  std::vector<int> m0;
  double fitted_slope = 0.0;
  double theoretical_slope = 0.0;
  double s = 0.0;
  double beta = 0.0;
};

double theoretical_rate_exponent(double s, double beta);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RateStudyConfig {
  double s = 2.0;
  double A = 1.0;
  int K = 64;
  std::vector<int> n_grid;
  double epsilon = 1.0;
  McConfig mc;
  EstimateKind estimator = EstimateKind::theta_tilde;
};

RateStudy rate_study(const ShiftDensity& d, const RateStudyConfig& cfg, const SelectionOptions& opts = {});
void write_rate_csv(std::ostream& os, const RateStudy& study);

}  // namespace shiftdecon
