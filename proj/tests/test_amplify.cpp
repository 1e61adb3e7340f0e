#include "autospec/amplify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "testutil.hpp"

using namespace autospec;

namespace {

BooleanFunction and2() { return BooleanFunction::from_table(2, {0, 0, 0, 1}); }

// One-qubit program preparing |1> with probability p.
CircuitProgram synthetic_program(double p) {
  CircuitProgram prog;
  prog.layout.append("q", 1);
  prog.init = {0};
  prog.ops.push_back(ops::Ry{"q", 0, 2.0 * std::asin(std::sqrt(p))});
  prog.metadata = compute_metadata(prog.layout, prog.ops);
  return prog;
}

GoodSubspace synthetic_good() { return GoodSubspace::equals("q", 1); }

// Chebyshev polynomial of the first kind, degree L, for |x| <= 1 or x >= 1.
double cheb(int big_l, double x) {
  if (std::abs(x) <= 1.0) return std::cos(big_l * std::acos(x));
  return std::cosh(big_l * std::acosh(x));
}

// Success probability the Chebyshev schedule must deliver at initial
// probability lambda; independent of the implementation's internals.
double fixed_point_closed_form(int big_l, double delta, double lambda) {
  const double residual = std::sqrt(delta);
  const double arg = std::cosh(std::acosh(1.0 / residual) / big_l) * std::sqrt(1.0 - lambda);
  const double t = cheb(big_l, arg);
  return 1.0 - delta * t * t;
}

double amplified_success(const CircuitProgram& base, const GoodSubspace& good, double delta,
                         double p_min) {
  const CircuitProgram amplified = fixed_point_amplify(base, good, delta, p_min);
  return run_program(amplified).probability_of_good(good);
}

}  // namespace

TEST(GroverOperator, ClosedFormOnSyntheticPrograms) {
  for (double p : {0.05, 0.1, 0.25, 0.5, 0.8}) {
    const CircuitProgram prog = synthetic_program(p);
    const GroverOperator grover(prog, synthetic_good());
    StateVector state = run_program(prog);
    const double theta = std::asin(std::sqrt(p));
    for (int j = 1; j <= 8; ++j) {
      grover.apply(state);
      const double want = std::pow(std::sin((2 * j + 1) * theta), 2);
      EXPECT_NEAR(state.probability_of("q", 1), want, 1e-9) << "p=" << p << " j=" << j;
    }
  }
}

TEST(GroverOperator, FixedPointsAtZeroAndOne) {
  CircuitProgram certain = synthetic_program(1.0);
  GroverOperator g1(certain, synthetic_good());
  StateVector s1 = run_program(certain);
  g1.apply(s1);
  EXPECT_NEAR(s1.probability_of("q", 1), 1.0, 1e-12);

  CircuitProgram never = synthetic_program(0.0);
  GroverOperator g0(never, synthetic_good());
  StateVector s0 = run_program(never);
  for (int j = 0; j < 4; ++j) g0.apply(s0);
  EXPECT_NEAR(s0.probability_of("q", 1), 0.0, 1e-12);
}

TEST(GroverOperator, SamplerQuarterProbabilityAmplifiesToCertainty) {
  // p = 1/4 means theta = pi/6, so one application lands on sin^2(pi/2) = 1.
  const CircuitProgram prog = build_autocorrelation_sampler(and2());
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  GroverOperator grover(prog, good);
  StateVector state = run_program(prog);
  ASSERT_NEAR(state.probability_of_good(good), 0.25, 1e-12);
  grover.apply(state);
  EXPECT_NEAR(state.probability_of_good(good), 1.0, 1e-9);
}

TEST(GroverOperator, ClosedFormOnCircuitFamily) {
  for (int n : {2, 3, 4, 5, 6}) {
    const BooleanFunction f = BooleanFunction::random(n, 600 + n);
    const CircuitProgram prog = build_autocorrelation_sampler(f);
    const GoodSubspace good = GoodSubspace::equals("output", 0);
    const GroverOperator grover(prog, good);
    StateVector state = run_program(prog);
    const double theta = std::asin(std::sqrt(state.probability_of_good(good)));
    for (int j = 1; j <= 8; ++j) {
      grover.apply(state);
      EXPECT_NEAR(state.probability_of_good(good), std::pow(std::sin((2 * j + 1) * theta), 2),
                  1e-9);
    }
  }
  for (int n : {3, 5}) {
    const BooleanFunction f = BooleanFunction::random(n, 880 + n);
    const CircuitProgram prog = build_swap_test_estimator(f, 3);
    const GoodSubspace good = GoodSubspace::equals("ancilla", 0);
    const GroverOperator grover(prog, good);
    StateVector state = run_program(prog);
    const double theta = std::asin(std::sqrt(state.probability_of_good(good)));
    for (int j = 1; j <= 8; ++j) {
      grover.apply(state);
      EXPECT_NEAR(state.probability_of_good(good), std::pow(std::sin((2 * j + 1) * theta), 2),
                  1e-9);
    }
  }
}

TEST(FixedPoint, ScheduleShapeAndValidation) {
  const FixedPointSchedule sched = chebyshev_schedule(1.0 / 4.0, 0.01);
  EXPECT_EQ(sched.big_l % 2, 1);
  EXPECT_EQ(static_cast<int>(sched.alphas.size()), sched.iterations);
  EXPECT_EQ(sched.big_l, 2 * sched.iterations + 1);
  EXPECT_THROW(chebyshev_schedule(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(chebyshev_schedule(-0.5, 0.1), std::invalid_argument);
  EXPECT_THROW(chebyshev_schedule(0.5, 1.0), std::invalid_argument);
}

TEST(FixedPoint, MatchesChebyshevClosedForm) {
  for (double delta : {0.04, 0.01}) {
    for (double p_min : {0.05, 0.2, 0.5}) {
      const FixedPointSchedule sched = chebyshev_schedule(p_min, delta);
      for (double p : {0.02, 0.1, 0.3, 0.6, 0.9, 1.0}) {
        const double got = amplified_success(synthetic_program(p), synthetic_good(), delta, p_min);
        const double want = fixed_point_closed_form(sched.big_l, delta, p);
        EXPECT_NEAR(got, want, 1e-9) << "delta=" << delta << " p_min=" << p_min << " p=" << p;
      }
    }
  }
}

TEST(FixedPoint, NeverOvershootsAboveTheFloor) {
  const double delta = 0.01;
  for (double p_min : {1.0 / 16, 1.0 / 4}) {
    for (int step = 1; step <= 16; ++step) {
      const double p = std::min(1.0, p_min * step);
      const double got = amplified_success(synthetic_program(p), synthetic_good(), delta, p_min);
      EXPECT_GE(got, 1.0 - delta - 1e-9) << "p=" << p << " p_min=" << p_min;
      if (p >= p_min * 15) break;
    }
    EXPECT_GE(amplified_success(synthetic_program(1.0), synthetic_good(), delta, p_min),
              1.0 - delta - 1e-9);
  }
}

TEST(FixedPoint, SamplerReachesTargetAndKeepsConditionalDistribution) {
  const CircuitProgram base = build_autocorrelation_sampler(and2());
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  const double delta = 0.01;
  const CircuitProgram amplified = fixed_point_amplify(base, good, delta, 0.25);
  const StateVector state = run_program(amplified);
  const double p_good = state.probability_of_good(good);
  EXPECT_GE(p_good, 1.0 - delta - 1e-9);

  const Spectrum r = autocorrelation_spectrum(and2());
  const double sigma = sum_of_squares(and2());
  for (std::uint64_t b = 0; b < 4; ++b) {
    const double joint =
        state.probability_of_good(GoodSubspace::equals("output", 0).and_equals("shift", b));
    EXPECT_NEAR(joint / p_good, r.values[b] * r.values[b] / sigma, 1e-9);
  }

  // L program applications in total, each worth the base oracle count.
  const FixedPointSchedule sched = chebyshev_schedule(0.25, delta);
  EXPECT_EQ(amplified.metadata.u_f_calls, sched.big_l * base.metadata.u_f_calls);
  const QueryCounter measured = run_program(amplified).counter();
  EXPECT_EQ(measured.u_f_calls, amplified.metadata.u_f_calls);
  EXPECT_EQ(measured.depth, amplified.metadata.depth);
}

TEST(FixedPoint, RandomFunctionSweepAtFloorTwoToMinusN) {
  for (int n : {3, 4, 5}) {
    const BooleanFunction f = BooleanFunction::random(n, 40 + n);
    const CircuitProgram base = build_autocorrelation_sampler(f);
    const GoodSubspace good = GoodSubspace::equals("output", 0);
    const double p_min = 1.0 / static_cast<double>(f.size());
    const double got = amplified_success(base, good, 0.02, p_min);
    EXPECT_GE(got, 1.0 - 0.02 - 1e-9) << "n=" << n;
  }
}

TEST(AmplitudeEstimate, ZeroProbabilityIsEstimatedExactly) {
  const CircuitProgram prog = synthetic_program(0.0);
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const EstimateReport report = amplitude_estimate(prog, synthetic_good(), 1.0 / 8, 0.1, seed);
    EXPECT_EQ(report.estimate, 0.0);
  }
}

TEST(AmplitudeEstimate, CompressedMatchesDenseDistribution) {
  for (double p : {0.0, 0.146446609406726, 0.25, 0.7, 1.0}) {
    const CircuitProgram prog = synthetic_program(p);
    const int t = 5;
    const auto compressed = detail::ae_phase_distribution(p, t);
    const auto dense = detail::ae_phase_distribution_dense(prog, synthetic_good(), t);
    ASSERT_EQ(compressed.size(), dense.size());
    for (std::size_t z = 0; z < dense.size(); ++z)
      EXPECT_NEAR(compressed[z], dense[z], 1e-10) << "p=" << p << " z=" << z;
  }

  const CircuitProgram sampler = build_autocorrelation_sampler(and2());
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  const StateVector prepared = run_program(sampler);
  const double p = prepared.probability_of_good(good);
  const auto compressed = detail::ae_phase_distribution(p, 4);
  const auto dense = detail::ae_phase_distribution_dense(sampler, good, 4);
  for (std::size_t z = 0; z < dense.size(); ++z) EXPECT_NEAR(compressed[z], dense[z], 1e-10);
}

TEST(AmplitudeEstimate, SyntheticEighthTurnProbability) {
  const double p = std::pow(std::sin(std::numbers::pi / 8), 2);
  const CircuitProgram prog = synthetic_program(p);
  long long hits = 0;
  const long long trials = 50;
  for (long long s = 0; s < trials; ++s) {
    const EstimateReport report =
        amplitude_estimate(prog, synthetic_good(), 1.0 / 32, 0.05, 1000 + s);
    if (std::abs(report.estimate - p) <= 1.0 / 32) ++hits;
  }
  EXPECT_GE(hits, 48);
}

TEST(AmplitudeEstimate, SamplerCoverageAtNominalDelta) {
  const CircuitProgram prog = build_autocorrelation_sampler(and2());
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  const double eps = 1.0 / 16, delta = 0.05;
  long long hits = 0;
  const long long trials = 200;
  for (long long s = 0; s < trials; ++s) {
    const EstimateReport report = amplitude_estimate(prog, good, eps, delta, 5000 + 7 * s);
    if (std::abs(report.estimate - 0.25) <= eps) ++hits;
  }
  EXPECT_TRUE(testutil::coverage_consistent(hits, trials, 1.0 - delta));
}

TEST(AmplitudeEstimate, QueryAccountingClosedForm) {
  const CircuitProgram prog = build_autocorrelation_sampler(and2());
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  const double eps = 1.0 / 16, delta = 0.05;
  const EstimateReport report = amplitude_estimate(prog, good, eps, delta, 3);

  const int t = detail::ae_ancilla_bits(eps);
  const long long reps = detail::ae_repetitions(delta);
  const long long m = 1LL << t;
  EXPECT_EQ(report.grover_applications, reps * (m - 1));
  EXPECT_EQ(report.program_applications, reps * (1 + 2 * (m - 1)));
  EXPECT_EQ(report.u_f_calls, report.program_applications * 2);
  EXPECT_EQ(report.seed, 3u);
  EXPECT_EQ(report.epsilon, eps);
  EXPECT_EQ(report.delta, delta);

  // Deterministic given the seed.
  const EstimateReport again = amplitude_estimate(prog, good, eps, delta, 3);
  EXPECT_EQ(report.estimate, again.estimate);
}

TEST(AmplitudeEstimate, ValidatesParameterRanges) {
  const CircuitProgram prog = synthetic_program(0.5);
  EXPECT_THROW(amplitude_estimate(prog, synthetic_good(), 0.3, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(amplitude_estimate(prog, synthetic_good(), 0.0, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(amplitude_estimate(prog, synthetic_good(), 0.1, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(amplitude_estimate(prog, synthetic_good(), 0.1, 0.0, 1), std::invalid_argument);
}

TEST(AmplitudeEstimate, MedianRuleIsDeterministicForEvenCounts) {
  EXPECT_EQ(detail::median_of({0.5, 0.1, 0.9, 0.3}), 0.4);
  EXPECT_EQ(detail::median_of({0.1, 0.3, 0.5}), 0.3);
}
