#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "shiftdecon/config.hpp"
#include "shiftdecon/risk.hpp"

namespace shiftdecon {

/// Everything produced by one run of the numerical study.
struct StudyReport {
  ExperimentConfig config;
  int m0_formula = 0;
  bool m0_saturated = false;
  int m0_used = 0;

  std::vector<double> template_samples;            // f on the grid
  std::vector<std::vector<double>> curves;         // first replicate, first curves_shown curves
  std::vector<double> estimate_star_samples;       // first replicate, theta_star synthesized
  std::vector<double> estimate_tilde_samples;      // first replicate, theta_tilde synthesized

  std::vector<int> n_star;     // per replicate, U_bar argmin
  std::vector<int> n_tilde;    // per replicate, U_tilde argmin
  std::vector<double> loss_star;
  std::vector<double> loss_tilde;

  std::vector<int> histogram_star;   // counts over N = 0..m0_used
  std::vector<int> histogram_tilde;

  double mean_loss_star = 0.0, stderr_loss_star = 0.0;
  double mean_loss_tilde = 0.0, stderr_loss_tilde = 0.0;
  RiskReport risk;  // theoretical curves over N = 0..m0_used
};

StudyReport run_section4_study(const ExperimentConfig& cfg);

/// File name -> CSV content. Content is a pure function of the report.
std::map<std::string, std::string> render_study_bundle(const StudyReport& report);
void write_study_bundle(const std::filesystem::path& dir, const StudyReport& report);

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::vector<int> values, double q);

}  // namespace shiftdecon
