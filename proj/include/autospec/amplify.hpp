#pragma once

// Amplitude amplification and additive-accuracy amplitude estimation over
// circuit programs with a designated good subspace.
//
// Fixed-point amplification uses the Chebyshev phase schedule: given a floor
// p_min on the true success probability and a failure budget delta, it
// appends L = 2l+1 generalized reflections whose final success probability
// is 1 - delta'^2 * T_L(T_{1/L}(1/delta') * sqrt(1-p))^2 with delta' =
// sqrt(delta), which is >= 1 - delta for every p >= p_min and never
// overshoots below that floor.
//
// Amplitude estimation runs canonical phase estimation on the Grover
// operator Q = -A S_0 A^dag S_good with t ancilla bits and takes the median
// of repeated runs. Q acts as a plane rotation by 2*asin(sqrt(p)) on the
// two-dimensional subspace spanned by the good and bad components of the
// prepared state, and the phase register couples only to Q, so the
// production path simulates the joint evolution exactly in that compressed
// basis after one dense run of the program extracts p. A full dense
// reference path exists for small instances and the tests pin the two
// against each other; full joint dense simulation at production sizes would
// be many orders of magnitude too slow.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "autospec/circuits.hpp"
#include "autospec/simulator.hpp"

namespace autospec {

struct EstimateReport {
  double estimate = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  long long u_f_calls = 0;
  long long grover_applications = 0;   // applications of the Grover operator
  long long program_applications = 0;  // A or A^dag applications, controlled counted once
  long long classical_calls = 0;       // direct f() evaluations (classical baselines)
  std::uint64_t seed = 0;
};

// Q = -A S_0 A^dag S_good. Self-contained so tests can iterate it directly.
class GroverOperator {
 public:
  GroverOperator(CircuitProgram program, GoodSubspace good)
      : program_(std::move(program)), good_(std::move(good)) {}

  const CircuitProgram& program() const { return program_; }
  const GoodSubspace& good() const { return good_; }

  void apply(StateVector& state, std::uint64_t ctrl = 0) const {
    state.phase_on_good(good_, -1.0, ctrl);
    apply_program(state, program_, /*adjoint=*/true, ctrl);
    state.phase_on_match(program_.system_mask(), program_.initial_index(), -1.0, ctrl);
    apply_program(state, program_, /*adjoint=*/false, ctrl);
    state.global_phase(-1.0, ctrl);
  }

 private:
  CircuitProgram program_;
  GoodSubspace good_;
};

struct FixedPointSchedule {
  int big_l = 0;       // total program applications, odd
  int iterations = 0;  // l = (big_l - 1) / 2 generalized reflections
  std::vector<double> alphas;  // alphas[j-1] for j = 1..l
};

inline FixedPointSchedule chebyshev_schedule(double p_min, double delta) {
  if (!(p_min > 0.0) || p_min > 1.0)
    throw std::invalid_argument("fixed-point schedule: p_min must be in (0, 1]");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("fixed-point schedule: delta must be in (0, 1)");
  const double residual = std::sqrt(delta);
  int big_l = 1;
  if (p_min < 1.0) {
    const double need = std::acosh(1.0 / residual) / std::acosh(1.0 / std::sqrt(1.0 - p_min));
    big_l = static_cast<int>(std::ceil(need));
    if (big_l % 2 == 0) big_l += 1;
    big_l = std::max(big_l, 1);
  }
  FixedPointSchedule sched{big_l, (big_l - 1) / 2, {}};
  const double gamma = 1.0 / std::cosh(std::acosh(1.0 / residual) / big_l);
  const double root = std::sqrt(1.0 - gamma * gamma);
  for (int j = 1; j <= sched.iterations; ++j) {
    const double t = std::tan(2.0 * std::numbers::pi * j / big_l) * root;
    sched.alphas.push_back(2.0 * (std::numbers::pi / 2.0 - std::atan(t)));
  }
  return sched;
}

namespace detail {

inline std::vector<ops::Op> adjoint_ops(const std::vector<ops::Op>& forward) {
  std::vector<ops::Op> rev;
  rev.reserve(forward.size());
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    ops::Op op = *it;
    if (auto* r = std::get_if<ops::Ry>(&op)) r->angle = -r->angle;
    if (auto* p = std::get_if<ops::InitPhase>(&op)) p->angle = -p->angle;
    if (auto* g = std::get_if<ops::GoodPhase>(&op)) g->angle = -g->angle;
    rev.push_back(std::move(op));
  }
  return rev;
}

}  // namespace detail

// Returns a program whose success probability on `good` is at least
// 1 - delta whenever the base program's is at least p_min. The phases act as
// scalars on the good projector, so the distribution conditioned on success
// is exactly the base program's.
inline CircuitProgram fixed_point_amplify(const CircuitProgram& program, const GoodSubspace& good,
                                          double delta, double p_min) {
  const FixedPointSchedule sched = chebyshev_schedule(p_min, delta);
  CircuitProgram amplified = program;
  const std::vector<ops::Op> backward = detail::adjoint_ops(program.ops);
  const int l = sched.iterations;
  for (int j = 1; j <= l; ++j) {
    amplified.ops.push_back(ops::GoodPhase{good, sched.alphas[l - j]});
    amplified.ops.insert(amplified.ops.end(), backward.begin(), backward.end());
    amplified.ops.push_back(ops::InitPhase{sched.alphas[j - 1]});
    amplified.ops.insert(amplified.ops.end(), program.ops.begin(), program.ops.end());
  }
  amplified.metadata = compute_metadata(amplified.layout, amplified.ops);
  return amplified;
}

namespace detail {

// In-place b[z] = 2^{-t/2} sum_y exp(-2 pi i z y / 2^t) a[y].
inline void inverse_fourier(std::vector<std::complex<double>>& v) {
  const std::size_t size = v.size();
  for (std::size_t i = 1, j = 0; i < size; ++i) {  // bit reversal
    std::size_t bit = size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> step = std::polar(1.0, angle);
    for (std::size_t base = 0; base < size; base += len) {
      std::complex<double> w = 1.0;
      for (std::size_t i = 0; i < len / 2; ++i) {
        const auto u = v[base + i];
        const auto t = v[base + i + len / 2] * w;
        v[base + i] = u + t;
        v[base + i + len / 2] = u - t;
        w *= step;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  for (auto& x : v) x *= scale;
}

// Phase-register outcome distribution of canonical phase estimation on Q,
// simulated exactly in the 2D invariant subspace. p is the program's success
// probability; controlled powers are realized by repeated application.
inline std::vector<double> ae_phase_distribution(double p, int t) {
  const std::size_t m = std::size_t{1} << t;
  const double theta = std::asin(std::sqrt(std::clamp(p, 0.0, 1.0)));
  const double q00 = std::cos(2 * theta), q01 = std::sin(2 * theta);

  const double init = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<std::complex<double>> good(m, init * std::sin(theta));
  std::vector<std::complex<double>> bad(m, init * std::cos(theta));

  for (int j = 0; j < t; ++j) {
    // (Q)^{2^j} by 2^j successive multiplications; Q = [[q00, q01], [-q01, q00]]
    double a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]
    for (std::uint64_t step = 0; step < (std::uint64_t{1} << j); ++step) {
      const double na = q00 * a + q01 * c, nb = q00 * b + q01 * d;
      const double nc = q00 * c - q01 * a, nd = q00 * d - q01 * b;
      a = na;
      b = nb;
      c = nc;
      d = nd;
    }
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::size_t y = 0; y < m; ++y) {
      if (!(y & bit)) continue;
      const auto g = good[y], bb = bad[y];
      good[y] = a * g + b * bb;
      bad[y] = c * g + d * bb;
    }
  }
  inverse_fourier(good);
  inverse_fourier(bad);
  std::vector<double> dist(m);
  for (std::size_t z = 0; z < m; ++z) dist[z] = std::norm(good[z]) + std::norm(bad[z]);
  return dist;
}

// Reference path: the same distribution from a full dense simulation with an
// explicit t-qubit phase register. Exponential in t + program qubits; used
// by tests and debug tooling on small instances.
inline std::vector<double> ae_phase_distribution_dense(const CircuitProgram& program,
                                                       const GoodSubspace& good, int t) {
  RegisterLayout layout = program.layout;
  layout.append("phase", t);
  std::vector<std::uint64_t> init = program.init;
  init.push_back(0);
  StateVector state(layout, init);

  apply_program(state, program);
  state.hadamard_layer({"phase"});

  const GroverOperator grover(program, good);
  const int phase_offset = layout.find("phase").offset;
  for (int j = 0; j < t; ++j) {
    const std::uint64_t ctrl = std::uint64_t{1} << (phase_offset + j);
    for (std::uint64_t step = 0; step < (std::uint64_t{1} << j); ++step) grover.apply(state, ctrl);
  }

  // Inverse Fourier transform on the phase register, applied directly.
  const std::uint64_t m_sys = std::uint64_t{1} << phase_offset;
  const std::uint64_t m_phase = std::uint64_t{1} << t;
  auto& amps = state.amps();
  std::vector<std::complex<double>> column(m_phase);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_phase));
  for (std::uint64_t s = 0; s < m_sys; ++s) {
    for (std::uint64_t z = 0; z < m_phase; ++z) {
      std::complex<double> acc = 0.0;
      for (std::uint64_t y = 0; y < m_phase; ++y) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(z * y % m_phase) /
                             static_cast<double>(m_phase);
        acc += amps[(y << phase_offset) | s] * std::polar(1.0, angle);
      }
      column[z] = acc * scale;
    }
    for (std::uint64_t z = 0; z < m_phase; ++z) amps[(z << phase_offset) | s] = column[z];
  }
  return state.marginal("phase");
}

inline double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t r = values.size();
  if (r % 2 == 1) return values[r / 2];
  return 0.5 * (values[r / 2 - 1] + values[r / 2]);
}

inline int ae_ancilla_bits(double epsilon) {
  return static_cast<int>(std::ceil(std::log2(std::numbers::pi / epsilon))) + 2;
}

inline long long ae_repetitions(double delta) {
  return static_cast<long long>(std::ceil(18.0 * std::log(1.0 / delta)));
}

}  // namespace detail

// Estimates the program's success probability p on `good` to additive
// accuracy epsilon with failure probability at most delta. The estimate is
// exactly 0 when p is 0: the Grover operator then fixes the prepared state
// and phase estimation reads out the zero phase deterministically.
inline EstimateReport amplitude_estimate(const CircuitProgram& program, const GoodSubspace& good,
                                         double epsilon, double delta, std::uint64_t seed) {
  if (!(epsilon > 0.0) || epsilon > 0.25)
    throw std::invalid_argument("amplitude_estimate: epsilon must be in (0, 1/4]");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("amplitude_estimate: delta must be in (0, 1)");

  const int t = detail::ae_ancilla_bits(epsilon);
  const long long reps = std::max<long long>(1, detail::ae_repetitions(delta));
  const std::uint64_t m = std::uint64_t{1} << t;

  const StateVector prepared = run_program(program);
  const double p = prepared.probability_of_good(good);
  const std::vector<double> dist = detail::ae_phase_distribution(p, t);

  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    cdf[i] = acc;
  }

  std::vector<double> estimates;
  estimates.reserve(reps);
  for (long long rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng) * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::uint64_t y = it == cdf.end() ? m - 1 : static_cast<std::uint64_t>(it - cdf.begin());
    const double angle = std::numbers::pi * static_cast<double>(y) / static_cast<double>(m);
    const double s = std::sin(angle);
    estimates.push_back(s * s);
  }

  EstimateReport report;
  report.estimate = detail::median_of(std::move(estimates));
  report.epsilon = epsilon;
  report.delta = delta;
  report.seed = seed;
  report.grover_applications = reps * static_cast<long long>(m - 1);
  report.program_applications = reps * (1 + 2 * static_cast<long long>(m - 1));
  report.u_f_calls = report.program_applications * program.metadata.u_f_calls;
  return report;
}

}  // namespace autospec
