#include "autospec/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "autospec/json_io.hpp"
#include "testutil.hpp"

using namespace autospec;

namespace {

BooleanFunction and2() { return BooleanFunction::from_table(2, {0, 0, 0, 1}); }

std::vector<double> empirical_distribution(const SampleResult& result) {
  std::vector<double> freq(std::size_t{1} << result.n, 0.0);
  for (const auto& [outcome, count] : result.histogram)
    freq[outcome] = static_cast<double>(count) / static_cast<double>(result.shots);
  return freq;
}

std::vector<double> ideal_sampling_distribution(const BooleanFunction& f) {
  const Spectrum r = autocorrelation_spectrum(f);
  const double sigma = sum_of_squares(f);
  std::vector<double> q(f.size());
  for (std::uint64_t b = 0; b < f.size(); ++b) q[b] = r.values[b] * r.values[b] / sigma;
  return q;
}

}  // namespace

TEST(SampleAutocorrelation, LinearFunctionsSampleUniformSupport) {
  const BooleanFunction f = BooleanFunction::linear(4, 6);
  const SampleResult result = sample_autocorrelation(f, 0.05, 20000, 11);
  // every coefficient is +-1, so all 16 points carry mass 1/16
  const auto freq = empirical_distribution(result);
  for (std::uint64_t b = 0; b < 16; ++b) EXPECT_NEAR(freq[b], 1.0 / 16.0, 0.02) << "b=" << b;
}

TEST(SampleAutocorrelation, BentFunctionConcentratesOnZero) {
  const SampleResult result = sample_autocorrelation(and2(), 0.01, 5000, 7);
  const auto freq = empirical_distribution(result);
  EXPECT_GE(freq[0], 0.99);  // residue is at most delta/4 plus sampling noise
}

TEST(SampleAutocorrelation, RandomFunctionMatchesIdealDistribution) {
  const BooleanFunction f = BooleanFunction::random(6, 1234);
  const SampleResult result = sample_autocorrelation(f, 0.01, 10000, 99);
  const double tv = testutil::total_variation(empirical_distribution(result),
                                              ideal_sampling_distribution(f));
  EXPECT_LE(tv, 0.05);
}

TEST(SampleAutocorrelation, DeterministicAndAccounted) {
  const SampleResult a = sample_autocorrelation(and2(), 0.05, 100, 5);
  const SampleResult b = sample_autocorrelation(and2(), 0.05, 100, 5);
  EXPECT_EQ(a.histogram, b.histogram);
  const FixedPointSchedule sched = chebyshev_schedule(0.25, 0.05 / 4.0);
  EXPECT_EQ(a.grover_iterations, sched.iterations);
  EXPECT_EQ(a.u_f_calls_per_shot, 2LL * sched.big_l);
  EXPECT_EQ(a.u_f_calls_total, a.u_f_calls_per_shot * 100);
  EXPECT_THROW(sample_autocorrelation(and2(), 1.5, 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_autocorrelation(and2(), 0.1, 0, 1), std::invalid_argument);
}

TEST(EstimateAutocorrelationSq, KnownEndpoints) {
  const double eps = 1.0 / 16;
  const BooleanFunction lin = BooleanFunction::linear(3, 5);
  for (std::uint64_t a = 0; a < 8; ++a) {
    const EstimateReport rep = estimate_autocorrelation_sq(lin, a, eps, 0.05, 21 + a);
    EXPECT_NEAR(rep.estimate, 1.0, eps);
  }
  const EstimateReport zero = estimate_autocorrelation_sq(and2(), 3, eps, 0.05, 4);
  EXPECT_NEAR(zero.estimate, 0.0, eps);
  EXPECT_THROW(estimate_autocorrelation_sq(and2(), 1, 0.6, 0.05, 1), std::invalid_argument);
}

TEST(EstimateAutocorrelationSq, CoverageOnRandomFunction) {
  const BooleanFunction f = BooleanFunction::random(5, 5150);
  const Spectrum r = autocorrelation_spectrum(f);
  const std::uint64_t a = 9;
  const double truth = r.values[a] * r.values[a];
  const double eps = 1.0 / 16;
  long long hits = 0;
  const long long trials = 100;
  for (long long s = 0; s < trials; ++s)
    if (std::abs(estimate_autocorrelation_sq(f, a, eps, 0.05, 9000 + s).estimate - truth) <= eps)
      ++hits;
  EXPECT_TRUE(testutil::coverage_consistent(hits, trials, 0.95));
}

TEST(ZeroGuard, ExactZeroAtVanishingCoefficients) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const EstimateReport rep =
        estimate_autocorrelation_sq_with_zero_guard(and2(), 1, 1.0 / 16, 0.05, seed);
    EXPECT_EQ(rep.estimate, 0.0);
  }
}

TEST(ZeroGuard, FindsClassicalZerosOfRandomFunctions) {
  const BooleanFunction f = BooleanFunction::random(5, 99);
  const Spectrum r = autocorrelation_spectrum(f);
  bool found = false;
  for (std::uint64_t a = 1; a < f.size() && !found; ++a) {
    if (r.values[a] != 0.0) continue;
    found = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const EstimateReport rep =
          estimate_autocorrelation_sq_with_zero_guard(f, a, 1.0 / 16, 0.05, 100 + seed);
      EXPECT_EQ(rep.estimate, 0.0) << "a=" << a;
    }
  }
  ASSERT_TRUE(found) << "test function has no zero coefficient; pick another seed";
}

TEST(ZeroGuard, GuardDoesNotFireOnLargeCoefficients) {
  const BooleanFunction lin = BooleanFunction::linear(4, 3);
  const double eps = 1.0 / 16;
  const EstimateReport rep = estimate_autocorrelation_sq_with_zero_guard(lin, 0, eps, 0.05, 8);
  EXPECT_NEAR(rep.estimate, 1.0, eps);
  // both stages contribute to the tally when the guard does not fire
  const EstimateReport fine = estimate_autocorrelation_sq(lin, 0, eps, 0.05, 8);
  EXPECT_GT(rep.u_f_calls, fine.u_f_calls);
}

TEST(SigmaQuantum, PaperEndpointFamilies) {
  const EstimateReport bent = estimate_sigma_quantum(BooleanFunction::bent_quadratic(4), 1.0, 0.05, 31);
  EXPECT_NEAR(bent.estimate, 1.0, 1.0);
  const EstimateReport lin = estimate_sigma_quantum(BooleanFunction::linear(4, 7), 1.0, 0.05, 32);
  EXPECT_NEAR(lin.estimate, 16.0, 1.0);
  // epsilon/2^n must stay within the estimation lemma's range
  EXPECT_THROW(estimate_sigma_quantum(and2(), 2.0, 0.05, 1), std::invalid_argument);
}

TEST(SigmaQuantum, CoverageOnRandomFunction) {
  const BooleanFunction f = BooleanFunction::random(6, 606);
  const double truth = sum_of_squares(f);
  long long hits = 0;
  const long long trials = 60;
  for (long long s = 0; s < trials; ++s)
    if (std::abs(estimate_sigma_quantum(f, 1.0, 0.05, 7000 + s).estimate - truth) <= 1.0) ++hits;
  EXPECT_TRUE(testutil::coverage_consistent(hits, trials, 0.95));
}

TEST(SigmaClassical, SampleCountFormulaIsExact) {
  // n=6, eps=2, delta=0.05: ceil((2^{2n}/eps^2) * 2 * ln(2/delta)) samples.
  const long long samples = hoeffding_sample_count(2.0 / 64.0, 0.05);
  const long long want = static_cast<long long>(
      std::ceil(std::pow(2.0, 12) / 4.0 * 2.0 * std::log(2.0 / 0.05)));
  EXPECT_EQ(samples, want);
  const EstimateReport rep =
      estimate_sigma_classical(BooleanFunction::random(6, 2), 2.0, 0.05, 3);
  EXPECT_EQ(rep.classical_calls, 4 * samples);  // each sample evaluates f four times
}

TEST(SigmaClassical, EndpointFamilies) {
  const EstimateReport bent =
      estimate_sigma_classical(BooleanFunction::bent_quadratic(4), 2.0, 0.05, 5);
  EXPECT_NEAR(bent.estimate, 1.0, 2.0);
  const EstimateReport lin = estimate_sigma_classical(BooleanFunction::linear(4, 5), 2.0, 0.05, 6);
  EXPECT_NEAR(lin.estimate, 16.0, 2.0);
  EXPECT_EQ(estimate_sigma_classical(and2(), 1.0, 0.05, 9).estimate,
            estimate_sigma_classical(and2(), 1.0, 0.05, 9).estimate);
}

TEST(AutocorrelationClassical, BaselineBehaviour) {
  const BooleanFunction lin = BooleanFunction::linear(4, 3);
  const Spectrum r = autocorrelation_spectrum(lin);
  for (std::uint64_t a : {0ull, 3ull, 9ull}) {
    const EstimateReport rep = estimate_autocorrelation_classical(lin, a, 0.1, 0.05, 17 + a);
    EXPECT_NEAR(rep.estimate, r.values[a], 0.1);
  }
  const EstimateReport zero = estimate_autocorrelation_classical(and2(), 1, 0.1, 0.05, 4);
  EXPECT_NEAR(zero.estimate, 0.0, 0.1);
  EXPECT_EQ(zero.classical_calls, 2 * hoeffding_sample_count(0.1, 0.05));

  const EstimateReport a1 = estimate_autocorrelation_classical(lin, 3, 0.1, 0.05, 12);
  const EstimateReport a2 = estimate_autocorrelation_classical(lin, 3, 0.1, 0.05, 12);
  EXPECT_EQ(a1.estimate, a2.estimate);
}

TEST(QueryScaling, QuantumInverseVersusClassicalInverseSquare) {
  const std::vector<double> eps_grid = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
  std::vector<double> log_eps, log_quantum, log_classical;
  for (double eps : eps_grid) {
    const EstimateReport q = estimate_autocorrelation_sq(and2(), 3, eps, 0.05, 1);
    const EstimateReport c = estimate_autocorrelation_classical(and2(), 3, eps, 0.05, 1);
    log_eps.push_back(std::log(eps));
    log_quantum.push_back(std::log(static_cast<double>(q.u_f_calls)));
    log_classical.push_back(std::log(static_cast<double>(c.classical_calls)));
  }
  EXPECT_NEAR(testutil::regression_slope(log_eps, log_quantum), -1.0, 0.15);
  EXPECT_NEAR(testutil::regression_slope(log_eps, log_classical), -2.0, 0.15);
}

TEST(JsonIo, ReportAndCircuitSerialization) {
  const EstimateReport rep = estimate_autocorrelation_sq(and2(), 3, 1.0 / 16, 0.05, 42);
  const ordered_json j = report_to_json(rep);
  EXPECT_TRUE(j.contains("estimate"));
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["u_f_calls"], rep.u_f_calls);

  const ordered_json cj = circuit_to_json(build_autocorrelation_sampler(and2()));
  EXPECT_EQ(cj["registers"].size(), 3u);
  EXPECT_EQ(cj["metadata"]["u_f_calls"], 2);
  EXPECT_EQ(cj["ops"][0]["op"], "h_layer");

  const ordered_json amp = circuit_to_json(
      fixed_point_amplify(build_autocorrelation_sampler(and2()),
                          GoodSubspace::equals("output", 0), 0.05, 0.25));
  bool has_phase_op = false;
  for (const auto& op : amp["ops"]) has_phase_op |= (op["op"] == "phase_on_good");
  EXPECT_TRUE(has_phase_op);
}

TEST(JsonIo, CsvRowFormat) {
  EXPECT_EQ(csv_log_header(),
            "run_id,algorithm,n,function_family,point,epsilon,delta,estimate,truth,"
            "u_f_calls,classical_calls,seed,wall_ms");
  CsvLogRow row{"sigma-1", "sigma_quantum", 4, "linear", "", 1.0, 0.05, 15.9375, 16.0,
                123456, 0, 1, 37};
  EXPECT_EQ(csv_log_line(row),
            "sigma-1,sigma_quantum,4,linear,,1.0,0.05,15.9375,16.0,123456,0,1,37");
}
