#pragma once

// Test-only reference computations. Nothing here calls into the estimator or
// criterion code; expectations are assembled from theta, gamma and the moment
// formulas of the sequence model.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "shiftdecon/spectral.hpp"

namespace oracle {

using shiftdecon::cplx;
using shiftdecon::ShiftDensity;
using shiftdecon::Template;

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Fourier coefficient of the Laplace density by quadrature (real; the law is symmetric).
inline double laplace_gamma_quadrature(double sigma, int k) {
  const double scale = sigma / std::numbers::sqrt2;
  auto integrand = [&](double x) {
    return std::cos(2.0 * std::numbers::pi * k * x) * std::exp(-x / scale) / (2.0 * scale);
  };
  return 2.0 * simpson(integrand, 0.0, 60.0 * scale, 400000);
}

/// E|gamma~_k|^2 for n i.i.d. shifts.
inline double gamma_tilde_second_moment(const ShiftDensity& d, int k, int n) {
  const double g2 = std::norm(d.gamma(k));
  return g2 + (1.0 - g2) / n;
}

/// E|c~_k|^2 = |theta_k|^2 E|gamma~_k|^2 + eps^2/n.
inline double c_tilde_second_moment(const Template& t, const ShiftDensity& d, int k, int n, double eps) {
  return std::norm(t.at(k)) * gamma_tilde_second_moment(d, k, n) + eps * eps / n;
}

/// Expectations of the three criteria, term by term.
inline double expected_u(const Template& t, const ShiftDensity& d, int n, double eps, int N) {
  double s = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double a = 1.0 / std::norm(d.gamma(k));
    const double et = c_tilde_second_moment(t, d, k, n, eps) - eps * eps / n;
    s += -(1.0 - 1.0 / n) * a * et + eps * eps / n * a + a * a * et / n;
  }
  return s;
}

inline double expected_u_tilde(const Template& t, const ShiftDensity& d, int n, double eps, int N) {
  double s = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double a = 1.0 / std::norm(d.gamma(k));
    const double et = c_tilde_second_moment(t, d, k, n, eps) - eps * eps / n;
    s += -a * et + eps * eps / n * a;
  }
  return s;
}

inline double expected_u_bar(const Template& t, const ShiftDensity& d, int n, double eps, int N) {
  const double l = std::log(static_cast<double>(n));
  double s = expected_u_tilde(t, d, n, eps, N);
  for (int k = -N; k <= N; ++k) {
    const double a = 1.0 / std::norm(d.gamma(k));
    s += l * l / n * a * a * (c_tilde_second_moment(t, d, k, n, eps) - eps * eps / n);
  }
  return s;
}

/// Risk of the fixed-band projection estimator written as a direct expectation:
/// E|c~_k/gamma_k - theta_k|^2 summed over the band plus the tail.
inline double projection_risk(const Template& t, const ShiftDensity& d, int n, double eps, int N) {
  double s = 0.0;
  for (int k = -t.K(); k <= t.K(); ++k) {
    const double th2 = std::norm(t.at(k));
    if (std::abs(k) > N) {
      s += th2;
      continue;
    }
    // Var(gamma~_k) = (1 - |gamma_k|^2)/n, and E gamma~_k = gamma_k.
    const double g2 = std::norm(d.gamma(k));
    s += (th2 * (1.0 - g2) / n + eps * eps / n) / g2;
  }
  return s;
}

/// Smallest k >= 1 with |gamma_k|^2 <= log(n)^2/n, minus one; K when never reached.
inline int brute_force_m0(const ShiftDensity& d, int n, int K) {
  const double thr = std::pow(std::log(static_cast<double>(n)), 2) / n;
  for (int k = 1; k <= K; ++k)
    if (std::norm(d.gamma(k)) <= thr) return k - 1;
  return K;
}

/// Plain O(G K) evaluation of sum theta_k exp(2 i pi k x) at x = i/G using std::exp.
inline std::vector<double> direct_synthesis(const Template& t, int G) {
  std::vector<double> out(static_cast<std::size_t>(G));
  for (int i = 0; i < G; ++i) {
    cplx acc{};
    for (int k = -t.K(); k <= t.K(); ++k)
      acc += t[k] * std::exp(cplx{0.0, 2.0 * std::numbers::pi * k * i / G});
    out[static_cast<std::size_t>(i)] = acc.real();
  }
  return out;
}

struct Moments {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

inline Moments sample_moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.stderr_mean = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return m;
}

}  // namespace oracle
