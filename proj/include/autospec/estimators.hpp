#pragma once

// End-to-end drivers: autocorrelation sampling with fixed-point
// amplification, swap-test point estimation of squared autocorrelation
// coefficients (with the exact-zero guard variant), and sum-of-squares
// estimation both quantum and by classical Monte Carlo, plus the classical
// per-point sampling baseline the speedup comparisons run against.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>

#include "autospec/amplify.hpp"
#include "autospec/boolfn.hpp"
#include "autospec/circuits.hpp"

namespace autospec {

struct SampleResult {
  int n = 0;
  long long shots = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::map<std::uint64_t, long long> histogram;
  long long grover_iterations = 0;    // generalized reflections appended
  long long u_f_calls_per_shot = 0;   // oracle calls one execution costs
  long long u_f_calls_total = 0;
};

// Draws `shots` samples of the shift register after amplifying the sampler's
// success probability to at least 1 - delta/4 (quarter of the failure budget
// goes to amplification residue, leaving sampling-noise headroom). Each draw
// then follows autocorr(b)^2 / sigma_f up to that residue. The floor passed
// to the amplifier defaults to 2^-n, the worst case given sigma_f >= 1.
inline SampleResult sample_autocorrelation(const BooleanFunction& f, double delta,
                                           long long shots, std::uint64_t seed,
                                           double p_min_override = 0.0) {
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("sample_autocorrelation: delta must be in (0, 1)");
  if (shots < 1) throw std::invalid_argument("sample_autocorrelation: shots must be >= 1");

  const double p_min =
      p_min_override > 0.0 ? p_min_override : 1.0 / static_cast<double>(f.size());
  const CircuitProgram base = build_autocorrelation_sampler(f);
  const GoodSubspace good = GoodSubspace::equals("output", 0);
  const CircuitProgram amplified = fixed_point_amplify(base, good, delta / 4.0, p_min);
  const StateVector state = run_program(amplified);

  SampleResult result;
  result.n = f.n();
  result.shots = shots;
  result.delta = delta;
  result.seed = seed;
  result.histogram = state.measure_register("shift", shots, derive_seed(seed, 0));
  result.grover_iterations = (chebyshev_schedule(p_min, delta / 4.0).big_l - 1) / 2;
  result.u_f_calls_per_shot = amplified.metadata.u_f_calls;
  result.u_f_calls_total = result.u_f_calls_per_shot * shots;
  return result;
}

// Swap-test estimator: estimates Pr[ancilla = 0] = 1/2 + autocorr(a)^2 / 2
// to accuracy epsilon/2 and returns twice-the-estimate minus one, which is
// an epsilon-accurate estimate of autocorr(a)^2 with probability 1 - delta.
inline EstimateReport estimate_autocorrelation_sq(const BooleanFunction& f, std::uint64_t a,
                                                  double epsilon, double delta,
                                                  std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon > 0.5)
    throw std::invalid_argument("estimate_autocorrelation_sq: epsilon must be in (0, 1/2]");
  const CircuitProgram prog = build_swap_test_estimator(f, a);
  EstimateReport report =
      amplitude_estimate(prog, GoodSubspace::equals("ancilla", 0), epsilon / 2.0, delta, seed);
  report.estimate = 2.0 * report.estimate - 1.0;
  report.epsilon = epsilon;
  return report;
}

// Zero-guarded variant: first estimates the unamplified sampler's
// probability of {output = 0, shift = a}, which equals autocorr(a)^2 / 2^n,
// at coarse accuracy 1/8. Amplitude estimation reads an exact zero phase
// when that probability is zero, so a zero coefficient is returned as
// exactly 0; otherwise the result is the smaller of the coarse upper bound
// and the swap-test estimate.
inline EstimateReport estimate_autocorrelation_sq_with_zero_guard(const BooleanFunction& f,
                                                                  std::uint64_t a, double epsilon,
                                                                  double delta,
                                                                  std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon > 0.5)
    throw std::invalid_argument("zero-guarded estimate: epsilon must be in (0, 1/2]");
  constexpr double kCoarseEps = 1.0 / 8.0;
  const CircuitProgram sampler = build_autocorrelation_sampler(f);
  const GoodSubspace event = GoodSubspace::equals("output", 0).and_equals("shift", a);
  const EstimateReport coarse =
      amplitude_estimate(sampler, event, kCoarseEps, delta, derive_seed(seed, 0xC0));

  EstimateReport report;
  report.epsilon = epsilon;
  report.delta = delta;
  report.seed = seed;
  if (coarse.estimate == 0.0) {
    report.estimate = 0.0;
    report.u_f_calls = coarse.u_f_calls;
    report.grover_applications = coarse.grover_applications;
    report.program_applications = coarse.program_applications;
    return report;
  }
  const EstimateReport fine =
      estimate_autocorrelation_sq(f, a, epsilon, delta, derive_seed(seed, 0xF1));
  const double coarse_bound = static_cast<double>(f.size()) * (coarse.estimate + kCoarseEps);
  report.estimate = std::min(coarse_bound, fine.estimate);
  report.u_f_calls = coarse.u_f_calls + fine.u_f_calls;
  report.grover_applications = coarse.grover_applications + fine.grover_applications;
  report.program_applications = coarse.program_applications + fine.program_applications;
  return report;
}

// sigma_f estimate from the sampler identity Pr[output = 0] = sigma_f / 2^n,
// estimated at accuracy epsilon / 2^n and scaled back up.
inline EstimateReport estimate_sigma_quantum(const BooleanFunction& f, double epsilon,
                                             double delta, std::uint64_t seed) {
  const double scaled_eps = epsilon / static_cast<double>(f.size());
  if (!(scaled_eps > 0.0) || scaled_eps > 0.25)
    throw std::invalid_argument(
        "estimate_sigma_quantum: epsilon/2^n must be in (0, 1/4]; raise epsilon or n");
  const CircuitProgram prog = build_autocorrelation_sampler(f);
  EstimateReport report =
      amplitude_estimate(prog, GoodSubspace::equals("output", 0), scaled_eps, delta, seed);
  report.estimate *= static_cast<double>(f.size());
  report.epsilon = epsilon;
  return report;
}

// Hoeffding count for estimating the mean of +-1 samples to accuracy
// epsilon with failure probability delta.
inline long long hoeffding_sample_count(double epsilon, double delta) {
  return static_cast<long long>(std::ceil(2.0 / (epsilon * epsilon) * std::log(2.0 / delta)));
}

// Classical Monte Carlo for sigma_f: expanding the square in
// sigma_f = sum_a autocorr(a)^2 gives sigma_f = 1 + (2^n - 1) E[Y] for
// uniform a, b, c with b != c, where Y is the product of two independent
// signs of the derivative at a:
//   Y = (-1)^{f(a^b) ^ f(b)} * (-1)^{f(a^c) ^ f(c)}.
// Each sample costs four f evaluations; the target accuracy on E[Y] is
// epsilon / 2^n.
inline EstimateReport estimate_sigma_classical(const BooleanFunction& f, double epsilon,
                                               double delta, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("estimate_sigma_classical: epsilon <= 0");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("estimate_sigma_classical: delta must be in (0, 1)");
  const double mean_eps = epsilon / static_cast<double>(f.size());
  const long long samples = hoeffding_sample_count(mean_eps, delta);

  std::mt19937_64 rng(derive_seed(seed, 0));
  const std::uint64_t mask = f.size() - 1;
  long long acc = 0;
  for (long long i = 0; i < samples; ++i) {
    const std::uint64_t a = rng() & mask;
    const std::uint64_t b = rng() & mask;
    std::uint64_t c = rng() & mask;
    while (c == b) c = rng() & mask;
    const int left = f(a ^ b) ^ f(b);
    const int right = f(a ^ c) ^ f(c);
    acc += (left == right) ? 1 : -1;
  }
  EstimateReport report;
  report.estimate = 1.0 + (static_cast<double>(f.size()) - 1.0) *
                              (static_cast<double>(acc) / static_cast<double>(samples));
  report.epsilon = epsilon;
  report.delta = delta;
  report.seed = seed;
  report.classical_calls = 4 * samples;
  return report;
}

// Classical sampling baseline for one coefficient: mean of
// X_x = (-1)^{f(x) ^ f(x^a)} over uniform x estimates autocorr(a).
inline EstimateReport estimate_autocorrelation_classical(const BooleanFunction& f, std::uint64_t a,
                                                         double epsilon, double delta,
                                                         std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("estimate_autocorrelation_classical: epsilon must be in (0, 1]");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("estimate_autocorrelation_classical: delta must be in (0, 1)");
  BooleanFunction::check_point(f.n(), a, "shift point");
  const long long samples = hoeffding_sample_count(epsilon, delta);

  std::mt19937_64 rng(derive_seed(seed, 0));
  const std::uint64_t mask = f.size() - 1;
  long long acc = 0;
  for (long long i = 0; i < samples; ++i) {
    const std::uint64_t x = rng() & mask;
    acc += (f(x) == f(x ^ a)) ? 1 : -1;
  }
  EstimateReport report;
  report.estimate = static_cast<double>(acc) / static_cast<double>(samples);
  report.epsilon = epsilon;
  report.delta = delta;
  report.seed = seed;
  report.classical_calls = 2 * samples;
  return report;
}

}  // namespace autospec
