#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "shiftdecon/simulator.hpp"
#include "shiftdecon/spectral.hpp"

namespace shiftdecon {

enum class Criterion { u, u_bar, u_tilde };
enum class LogBase { natural, decimal };
/// proof_form:   (log^2 n / n) sum |gamma_k|^-4 (|c~_k|^2 - eps^2/n)
/// printed_form: (log^2 n / n) sum |gamma_k|^-2 (|c~_k|   - eps^2/n)
enum class PenaltyVariant { proof_form, printed_form };

std::string_view to_string(Criterion c);
std::string_view to_string(LogBase b);
std::string_view to_string(PenaltyVariant p);
Criterion parse_criterion(std::string_view s);
LogBase parse_log_base(std::string_view s);
PenaltyVariant parse_penalty_variant(std::string_view s);

/// Knobs for the two places where log^2(n)/n appears: the m0 threshold and the
/// U_bar penalty (also used by R_bar).
struct SelectionOptions {
  LogBase log_base = LogBase::natural;
  double threshold_multiplier = 1.0;
  double penalty_multiplier = 1.0;
  PenaltyVariant penalty = PenaltyVariant::proof_form;
  std::optional<int> m0_override;
};

/// (log_b n)^2 / n
double log_sq_over_n(int n, LogBase base);

struct M0Result {
  int value = 0;
  bool saturated = false;  // threshold never crossed for k <= K
};

/// m0 = inf{k >= 1 : |gamma_k|^2 <= mult * log^2(n)/n} - 1, capped at K.
M0Result compute_m0(const ShiftDensity& d, int n, int K, const SelectionOptions& opts = {});

/// The m0 actually used for selection: the override when set, else compute_m0.
int effective_m0(const ShiftDensity& d, int n, int K, const SelectionOptions& opts = {});

/// |gamma_k|^-2 (|c~_k|^2 - eps^2/n). Not clipped; may be negative.
double theta_hat_squared(const SequenceObservations& obs, const ShiftDensity& d, int k);

double criterion_u(const SequenceObservations& obs, const ShiftDensity& d, int N);
double criterion_u_bar(const SequenceObservations& obs, const ShiftDensity& d, int N,
                       const SelectionOptions& opts = {});
double criterion_u_tilde(const SequenceObservations& obs, const ShiftDensity& d, int N);
double criterion_value(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind, int N,
                       const SelectionOptions& opts = {});

/// Criterion values for N = 0..max_n, built by accumulating the k = +-N terms.
std::vector<double> criterion_trace(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind,
                                    int max_n, const SelectionOptions& opts = {});

/// Index of the minimum; ties go to the smallest index.
int argmin_smallest(const std::vector<double>& values);

struct CutoffSelection {
  int chosen_n = 0;
  int m0 = 0;
  bool m0_saturated = false;
  Criterion kind = Criterion::u_bar;
  std::vector<double> criterion_values;  // N = 0..m0
  /// Number of k with |k| <= m0 where the unbiased |theta_k|^2 estimate is negative.
  int negative_theta_hat = 0;
};

CutoffSelection select_cutoff(const SequenceObservations& obs, const ShiftDensity& d, Criterion kind,
                              const SelectionOptions& opts = {});

/// CSV "N,criterion" rows.
void write_selection_csv(std::ostream& os, const CutoffSelection& sel);

enum class EstimateKind { theta_star, theta_tilde, theta_u, fixed_n };
std::string_view to_string(EstimateKind k);

struct SpectralEstimate {
  std::vector<cplx> coeffs;  // over -K..K
  int K = 0;
  int cutoff = 0;
  EstimateKind kind = EstimateKind::fixed_n;

  cplx operator[](int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }
  double squared_distance(const Template& t) const;
};

/// theta_hat_k = c~_k / gamma_k for |k| <= cutoff, zero beyond.
SpectralEstimate estimate(const SequenceObservations& obs, const ShiftDensity& d, int cutoff,
                          EstimateKind kind = EstimateKind::fixed_n);

/// Selects with the criterion matching `kind` and returns the projection estimate.
SpectralEstimate adaptive_estimate(const SequenceObservations& obs, const ShiftDensity& d, EstimateKind kind,
                                   const SelectionOptions& opts = {});

Criterion criterion_for(EstimateKind kind);

}  // namespace shiftdecon
