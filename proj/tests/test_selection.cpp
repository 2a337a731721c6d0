#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "shiftdecon/catalog.hpp"
#include "shiftdecon/error.hpp"
#include "shiftdecon/replicate.hpp"
#include "shiftdecon/selection.hpp"

using namespace shiftdecon;

namespace {

// gamma_k = 1/(1+k) for |k| < 3, zero beyond.
ShiftDensity truncated_density() {
  return ShiftDensity([](int k) { return std::abs(k) < 3 ? cplx{1.0 / (1.0 + std::abs(k)), 0.0} : cplx{}; },
                      [](Rng&) { return 0.0; }, {1.0, 1.0, 1.0}, "truncated");
}

SequenceObservations fake_obs(std::vector<cplx> c_half, int n, double eps) {
  const int K = static_cast<int>(c_half.size()) - 1;
  SequenceObservations obs;
  obs.n = n;
  obs.K = K;
  obs.epsilon = eps;
  obs.c_tilde.assign(static_cast<std::size_t>(2 * K + 1), cplx{});
  obs.gamma_tilde.assign(static_cast<std::size_t>(2 * K + 1), cplx{1.0, 0.0});
  for (int k = 0; k <= K; ++k) {
    obs.c_tilde[static_cast<std::size_t>(K + k)] = c_half[static_cast<std::size_t>(k)];
    obs.c_tilde[static_cast<std::size_t>(K - k)] = std::conj(c_half[static_cast<std::size_t>(k)]);
  }
  return obs;
}

}  // namespace

TEST(ComputeM0, PointMassSaturates) {
  const auto r = compute_m0(point_mass_density(), 100, 40);
  EXPECT_EQ(r.value, 40);
  EXPECT_TRUE(r.saturated);
}

TEST(ComputeM0, LaplaceMatchesBruteForceScan) {
  const auto d = laplace_density(0.1);
  EXPECT_EQ(compute_m0(d, 100, 64).value, oracle::brute_force_m0(d, 100, 64));
  EXPECT_EQ(compute_m0(d, 100, 64).value, 2);
  EXPECT_FALSE(compute_m0(d, 100, 64).saturated);
  EXPECT_EQ(compute_m0(d, 1000000, 64).value, 19);
  int prev = -1;
  for (int n : {100, 1000, 10000, 100000, 1000000}) {
    const int m0 = compute_m0(d, n, 64).value;
    EXPECT_EQ(m0, oracle::brute_force_m0(d, n, 64)) << n;
    EXPECT_GE(m0, prev) << n;
    prev = m0;
  }
}

TEST(ComputeM0, OptionsAndErrors) {
  const auto d = laplace_density(0.1);
  SelectionOptions decimal;
  decimal.log_base = LogBase::decimal;
  // Smaller threshold with log10, so m0 can only grow.
  EXPECT_GE(compute_m0(d, 100, 64, decimal).value, compute_m0(d, 100, 64).value);
  SelectionOptions low;
  low.threshold_multiplier = 1e-3;
  EXPECT_GT(compute_m0(d, 100, 64, low).value, 2);
  EXPECT_THROW(compute_m0(d, 1, 64), Error);
  SelectionOptions forced;
  forced.m0_override = 32;
  EXPECT_EQ(effective_m0(d, 100, 64, forced), 32);
  forced.m0_override = 65;
  EXPECT_THROW(effective_m0(d, 100, 64, forced), Error);
}

TEST(ThetaHatSquared, ExactWithoutNoiseOrShifts) {
  const auto t = wave_template(12);
  const auto obs = simulate(t, point_mass_density(), 10, 0.0, 1u);
  for (int k = -12; k <= 12; ++k) EXPECT_NEAR(theta_hat_squared(obs, point_mass_density(), k), std::norm(t[k]), 1e-15);
}

TEST(ThetaHatSquared, VanishingGammaIsDivisionByZero) {
  const auto obs = fake_obs({1.0, 0.5, 0.25, 0.1, 0.05}, 10, 0.1);
  EXPECT_NO_THROW(theta_hat_squared(obs, truncated_density(), 2));
  try {
    theta_hat_squared(obs, truncated_density(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero);
  }
  EXPECT_THROW(criterion_u(obs, truncated_density(), 3), Error);
  EXPECT_THROW(criterion_u_bar(obs, truncated_density(), 4), Error);
  EXPECT_THROW(criterion_u_tilde(obs, truncated_density(), 3), Error);
  EXPECT_THROW(estimate(obs, truncated_density(), 3), Error);
  EXPECT_NO_THROW(estimate(obs, truncated_density(), 2));
}

TEST(ThetaHatSquared, MonteCarloMoments) {
  const auto d = laplace_density(0.1);
  const int n = 50, R = 4000;
  const double eps = 0.3;
  const auto zero = Template::zero(6);
  const auto wave = wave_template(8);
  std::vector<std::vector<double>> z(7), w(7), pm(7);
  for (int r = 0; r < R; ++r) {
    Rng a = substream(5, static_cast<std::uint64_t>(r));
    Rng b = substream(6, static_cast<std::uint64_t>(r));
    Rng c = substream(7, static_cast<std::uint64_t>(r));
    const auto oz = simulate(zero, d, n, eps, a);
    const auto ow = simulate(wave, d, n, eps, b);
    const auto op = simulate(wave, point_mass_density(), n, eps, c);
    for (int k = 0; k <= 6; ++k) {
      z[k].push_back(theta_hat_squared(oz, d, k));
      w[k].push_back(theta_hat_squared(ow, d, k));
      pm[k].push_back(theta_hat_squared(op, point_mass_density(), k));
    }
  }
  for (int k = 0; k <= 6; ++k) {
    const auto mz = oracle::sample_moments(z[k]);
    EXPECT_LT(std::abs(mz.mean), 5.0 * mz.stderr_mean) << k;
    // E Theta^2 = |theta|^2 E|gamma~|^2 / |gamma|^2, larger than |theta|^2 when shifts are random.
    const auto mw = oracle::sample_moments(w[k]);
    const double expect = std::norm(wave[k]) * oracle::gamma_tilde_second_moment(d, k, n) / std::norm(d.gamma(k));
    EXPECT_LT(std::abs(mw.mean - expect), 5.0 * mw.stderr_mean) << k;
    // Without shifts the estimator is exactly unbiased.
    const auto mp = oracle::sample_moments(pm[k]);
    EXPECT_LT(std::abs(mp.mean - std::norm(wave[k])), 5.0 * mp.stderr_mean + 1e-14) << k;
  }
}

TEST(Criteria, SingleTermAtNZero) {
  const int n = 40;
  const double eps = 0.7;
  const auto obs = fake_obs({cplx{0.9, 0.0}, 0.3, 0.1}, n, eps);
  const auto d = laplace_density(0.1);
  const double t = 0.81 - eps * eps / n;
  EXPECT_NEAR(criterion_u(obs, d, 0), -(1.0 - 1.0 / n) * t + eps * eps / n + t / n, 1e-15);
  EXPECT_NEAR(criterion_u_tilde(obs, d, 0), -t + eps * eps / n, 1e-15);
  const double l2 = std::pow(std::log(40.0), 2) / 40.0;
  EXPECT_NEAR(criterion_u_bar(obs, d, 0), -t + eps * eps / n + l2 * t, 1e-15);
}

TEST(Criteria, UBarMinusUAlgebraicDifference) {
  const auto d = laplace_density(0.1);
  const int n = 100;
  const auto obs = simulate(wave_template(20), d, n, 0.05, 17u);
  const double l2 = std::pow(std::log(100.0), 2);
  for (int N = 0; N <= 10; ++N) {
    double s2 = 0.0, s4 = 0.0;
    for (int k = -N; k <= N; ++k) {
      const double a = 1.0 / std::norm(d.gamma(k));
      const double t = std::norm(obs.c(k)) - 0.05 * 0.05 / n;
      s2 += a * t;
      s4 += a * a * t;
    }
    const double expect = (l2 - 1.0) / n * s4 - s2 / n;
    const double got = criterion_u_bar(obs, d, N) - criterion_u(obs, d, N);
    EXPECT_NEAR(got, expect, 1e-9 * std::max(1.0, std::abs(expect))) << N;
  }
}

TEST(Criteria, PrintedPenaltyVariant) {
  const auto d = laplace_density(0.1);
  const int n = 100;
  const double eps = 0.05;
  const auto obs = simulate(wave_template(20), d, n, eps, 17u);
  SelectionOptions printed;
  printed.penalty = PenaltyVariant::printed_form;
  const double l2 = std::pow(std::log(100.0), 2) / n;
  for (int N : {0, 3, 9}) {
    double pen = 0.0;
    for (int k = -N; k <= N; ++k) pen += (std::abs(obs.c(k)) - eps * eps / n) / std::norm(d.gamma(k));
    EXPECT_NEAR(criterion_u_bar(obs, d, N, printed), criterion_u_tilde(obs, d, N) + l2 * pen, 1e-10) << N;
  }
}

TEST(Criteria, TraceTelescopesForAllCriteria) {
  const auto d = laplace_density(0.1);
  const auto obs = simulate(wave_template(24), d, 80, 0.02, 23u);
  for (auto kind : {Criterion::u, Criterion::u_bar, Criterion::u_tilde}) {
    const auto trace = criterion_trace(obs, d, kind, 20);
    for (int N = 0; N <= 20; ++N) {
      const double direct = criterion_value(obs, d, kind, N);
      EXPECT_NEAR(trace[static_cast<std::size_t>(N)], direct, 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
  // Decomposability: the U~ increment from N-1 to N only involves frequencies +-N.
  const double noise = 0.02 * 0.02 / 80;
  for (int N = 1; N <= 20; ++N) {
    double inc = 0.0;
    for (int k : {-N, N}) inc += (noise - (std::norm(obs.c(k)) - noise)) / std::norm(d.gamma(k));
    const double diff = criterion_u_tilde(obs, d, N) - criterion_u_tilde(obs, d, N - 1);
    EXPECT_NEAR(diff, inc, 1e-9 * std::max(1.0, std::abs(inc))) << N;
  }
}

TEST(Criteria, NoiselessUnshiftedUTildeKeepsEverything) {
  const auto t = wave_template(16);
  const auto d = point_mass_density();
  const auto obs = simulate(t, d, 5, 0.0, 2u);
  double partial = 0.0;
  for (int N = 0; N <= 16; ++N) {
    partial = 0.0;
    for (int k = -N; k <= N; ++k) partial += std::norm(t[k]);
    EXPECT_NEAR(criterion_u_tilde(obs, d, N), -partial, 1e-13);
  }
  const auto sel = select_cutoff(obs, d, Criterion::u_tilde);
  EXPECT_EQ(sel.m0, 16);
  EXPECT_EQ(sel.chosen_n, 16);
}

TEST(Criteria, ExpectationsMatchSymbolicOracle) {
  const auto d = laplace_density(0.1);
  const auto t = wave_template(12);
  const int n = 100, R = 4000;
  const double eps = 0.05;
  const std::vector<int> cutoffs = {0, 2, 5};
  std::vector<std::vector<double>> u(3), ub(3), ut(3);
  for (int r = 0; r < R; ++r) {
    Rng rng = substream(31, static_cast<std::uint64_t>(r));
    const auto obs = simulate(t, d, n, eps, rng);
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
      u[i].push_back(criterion_u(obs, d, cutoffs[i]));
      ub[i].push_back(criterion_u_bar(obs, d, cutoffs[i]));
      ut[i].push_back(criterion_u_tilde(obs, d, cutoffs[i]));
    }
  }
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const int N = cutoffs[i];
    const auto mu = oracle::sample_moments(u[i]);
    const auto mb = oracle::sample_moments(ub[i]);
    const auto mt = oracle::sample_moments(ut[i]);
    EXPECT_LT(std::abs(mu.mean - oracle::expected_u(t, d, n, eps, N)), 5.0 * mu.stderr_mean) << N;
    EXPECT_LT(std::abs(mb.mean - oracle::expected_u_bar(t, d, n, eps, N)), 5.0 * mb.stderr_mean) << N;
    EXPECT_LT(std::abs(mt.mean - oracle::expected_u_tilde(t, d, n, eps, N)), 5.0 * mt.stderr_mean) << N;
  }
}

TEST(SelectCutoff, TieBreakAndMonotoneTraces) {
  EXPECT_EQ(argmin_smallest({1.0, 1.0, 1.0, 1.0}), 0);
  EXPECT_EQ(argmin_smallest({4.0, 3.0, 2.0, 1.0}), 3);
  EXPECT_EQ(argmin_smallest({2.0, 0.5, 0.5, 3.0}), 1);
  EXPECT_THROW(argmin_smallest({}), Error);
}

TEST(SelectCutoff, PropertyArgminInvariantUnderConstantShift) {
  Rng rng = substream(3, 0);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 40), ties(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = std::round(z(rng) * ties(rng) * 4.0) / 4.0;  // coarse values force ties
    const double shift = std::ldexp(std::round(z(rng) * 64.0), -2);
    std::vector<double> shifted = v;
    for (auto& x : shifted) x += shift;
    EXPECT_EQ(argmin_smallest(v), argmin_smallest(shifted));
    int brute = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < v[static_cast<std::size_t>(brute)]) brute = static_cast<int>(i);
    EXPECT_EQ(argmin_smallest(v), brute);
  }
}

TEST(SelectCutoff, SmallInstancesAgreeWithExhaustiveScan) {
  for (int K = 1; K <= 4; ++K) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto t = wave_template(8).resized(K);
      const auto d = laplace_density(0.1);
      const auto obs = simulate(t, d, 30, 0.2, seed);
      SelectionOptions opts;
      opts.m0_override = K;
      for (auto kind : {Criterion::u, Criterion::u_bar, Criterion::u_tilde}) {
        const auto sel = select_cutoff(obs, d, kind, opts);
        int best = 0;
        for (int N = 1; N <= K; ++N)
          if (criterion_value(obs, d, kind, N) < criterion_value(obs, d, kind, best)) best = N;
        EXPECT_EQ(sel.chosen_n, best);
        EXPECT_LE(sel.chosen_n, sel.m0);
        EXPECT_EQ(sel.criterion_values.size(), static_cast<std::size_t>(K + 1));
      }
    }
  }
}

TEST(SelectCutoff, ClippingDiagnosticAndCsv) {
  const auto d = laplace_density(0.1);
  const auto obs = simulate(Template::zero(10), d, 20, 1.0, 4u);
  SelectionOptions opts;
  opts.m0_override = 10;
  const auto sel = select_cutoff(obs, d, Criterion::u_tilde, opts);
  int negatives = 0;
  for (int k = -10; k <= 10; ++k) negatives += theta_hat_squared(obs, d, k) < 0.0;
  EXPECT_EQ(sel.negative_theta_hat, negatives);
  EXPECT_GT(negatives, 0);
  std::ostringstream os;
  write_selection_csv(os, sel);
  EXPECT_EQ(os.str().rfind("N,u_tilde\n0,", 0), 0u);
}

TEST(Estimate, ExactRecoveryAndBands) {
  const auto t = wave_template(16);
  const auto obs = simulate(t, point_mass_density(), 3, 0.0, 9u);
  const auto full = estimate(obs, point_mass_density(), 16);
  for (int k = -16; k <= 16; ++k) EXPECT_LT(std::abs(full[k] - t[k]), 1e-15);
  EXPECT_LT(full.squared_distance(t), 1e-28);

  const auto d = laplace_density(0.1);
  const auto noisy = simulate(t, d, 50, 0.1, 10u);
  const auto dc = estimate(noisy, d, 0);
  EXPECT_EQ(dc[0], noisy.c(0));
  for (int N : {0, 1, 5, 16}) {
    const auto est = estimate(noisy, d, N);
    int nonzero = 0;
    for (int k = -16; k <= 16; ++k) {
      if (std::abs(k) > N) {
        EXPECT_EQ(est[k], cplx{});
      } else {
        EXPECT_EQ(est[k], noisy.c(k) / d.gamma(k));
      }
      nonzero += est[k] != cplx{};
    }
    EXPECT_EQ(nonzero, 2 * N + 1);
  }
  EXPECT_THROW(estimate(noisy, d, 17), Error);
  EXPECT_THROW(estimate(noisy, d, -1), Error);
}

TEST(Estimate, AdaptiveUsesMatchingCriterion) {
  const auto d = laplace_density(0.1);
  const auto obs = simulate(wave_template(64), d, 100, 5e-4, 12u);
  SelectionOptions opts;
  opts.m0_override = 32;
  const auto star = adaptive_estimate(obs, d, EstimateKind::theta_star, opts);
  const auto tilde = adaptive_estimate(obs, d, EstimateKind::theta_tilde, opts);
  EXPECT_EQ(star.cutoff, select_cutoff(obs, d, Criterion::u_bar, opts).chosen_n);
  EXPECT_EQ(tilde.cutoff, select_cutoff(obs, d, Criterion::u_tilde, opts).chosen_n);
  EXPECT_THROW(adaptive_estimate(obs, d, EstimateKind::fixed_n, opts), Error);
}

TEST(Parsing, EnumsRoundTrip) {
  for (auto c : {Criterion::u, Criterion::u_bar, Criterion::u_tilde}) EXPECT_EQ(parse_criterion(to_string(c)), c);
  for (auto b : {LogBase::natural, LogBase::decimal}) EXPECT_EQ(parse_log_base(to_string(b)), b);
  for (auto p : {PenaltyVariant::proof_form, PenaltyVariant::printed_form})
    EXPECT_EQ(parse_penalty_variant(to_string(p)), p);
  EXPECT_THROW(parse_criterion("v"), Error);
}
