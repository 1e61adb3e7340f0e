#pragma once

// Dense statevector simulator over named qubit registers. Amplitude index
// bit q corresponds to global qubit q; a register's value is read from its
// qubit span with position 0 as the least significant bit, matching the
// truth-table index convention.
//
// Every mutating operation accepts an optional control mask: the operation
// acts only on basis states whose index has all mask bits set. This is what
// phase estimation uses to run controlled circuit applications.

#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "autospec/boolfn.hpp"

namespace autospec {

inline constexpr int kMaxQubits = 26;

class qubit_budget_error : public std::runtime_error {
 public:
  explicit qubit_budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RegisterLayout {
  struct Register {
    std::string name;
    int width = 0;
    int offset = 0;
  };

  std::vector<Register> registers;
  int total_qubits = 0;

  RegisterLayout() = default;

  RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs) {
    for (const auto& [name, width] : regs) append(name, width);
  }

  void append(const std::string& name, int width) {
    if (width < 1) throw std::invalid_argument("register '" + name + "' needs width >= 1");
    for (const auto& r : registers)
      if (r.name == name) throw std::invalid_argument("duplicate register name '" + name + "'");
    if (total_qubits + width > kMaxQubits)
      throw qubit_budget_error("register layout exceeds " + std::to_string(kMaxQubits) +
                               " qubits");
    registers.push_back({name, width, total_qubits});
    total_qubits += width;
  }

  const Register& find(std::string_view name) const {
    for (const auto& r : registers)
      if (r.name == name) return r;
    throw std::invalid_argument("unknown register '" + std::string(name) + "'");
  }

  bool has(std::string_view name) const {
    for (const auto& r : registers)
      if (r.name == name) return true;
    return false;
  }

  std::uint64_t mask_of(const Register& r) const {
    return ((std::uint64_t{1} << r.width) - 1) << r.offset;
  }
};

// Conjunction of per-register equality constraints marking the "success"
// subspace of a circuit, e.g. output == 0. Used by amplification and
// estimation, and by exact probability queries.
struct GoodSubspace {
  struct Constraint {
    std::string reg;
    std::uint64_t value = 0;
  };
  std::vector<Constraint> constraints;

  static GoodSubspace equals(std::string reg, std::uint64_t value) {
    GoodSubspace g;
    g.constraints.push_back({std::move(reg), value});
    return g;
  }

  GoodSubspace& and_equals(std::string reg, std::uint64_t value) {
    constraints.push_back({std::move(reg), value});
    return *this;
  }

  // Index mask/value pair for the layout; matching is (index & mask) == value.
  std::pair<std::uint64_t, std::uint64_t> compile(const RegisterLayout& layout) const {
    std::uint64_t mask = 0, value = 0;
    for (const auto& c : constraints) {
      const auto& r = layout.find(c.reg);
      if (c.value >> r.width)
        throw std::invalid_argument("good-subspace value does not fit register '" + c.reg + "'");
      mask |= layout.mask_of(r);
      value |= c.value << r.offset;
    }
    return {mask, value};
  }
};

struct QueryCounter {
  long long u_f_calls = 0;
  long long h_gates = 0;
  long long x_gates = 0;
  long long cnot_gates = 0;
  long long cswap_gates = 0;
  long long phase_gates = 0;
  long long rotation_gates = 0;
  long long depth = 0;

  long long gate_count() const {
    return h_gates + x_gates + cnot_gates + cswap_gates + phase_gates + rotation_gates;
  }
  bool operator==(const QueryCounter&) const = default;
};

namespace detail {

inline int configured_threads() {
  if (const char* env = std::getenv("AUTOSPEC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// Splits [0, count) into blocks across the configured thread cap. The body
// must touch disjoint state for distinct indices.
template <typename Fn>
void parallel_for(std::uint64_t count, Fn&& body) {
  static const int threads = configured_threads();
  if (threads <= 1 || count < (std::uint64_t{1} << 18)) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::uint64_t lo = t * chunk;
    const std::uint64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::uint64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

class StateVector {
 public:
  using Amplitude = std::complex<double>;

  explicit StateVector(RegisterLayout layout, const std::vector<std::uint64_t>& init_values = {})
      : layout_(std::move(layout)), amps_(std::uint64_t{1} << layout_.total_qubits) {
    if (init_values.size() > layout_.registers.size())
      throw std::invalid_argument("more initial values than registers");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < init_values.size(); ++i) {
      const auto& r = layout_.registers[i];
      if (init_values[i] >> r.width)
        throw std::invalid_argument("initial value does not fit register '" + r.name + "'");
      index |= init_values[i] << r.offset;
    }
    amps_[index] = 1.0;
  }

  const RegisterLayout& layout() const { return layout_; }
  std::uint64_t size() const { return amps_.size(); }
  const std::vector<Amplitude>& amps() const { return amps_; }
  std::vector<Amplitude>& amps() { return amps_; }
  const QueryCounter& counter() const { return counter_; }
  QueryCounter& counter() { return counter_; }

  // --- gates ---------------------------------------------------------

  // One layer of H gates covering every qubit of the listed registers.
  void hadamard_layer(std::span<const std::string> regs, std::uint64_t ctrl = 0) {
    for (const auto& name : regs) {
      const auto& r = layout_.find(name);
      for (int p = 0; p < r.width; ++p) h_qubit(r.offset + p, ctrl);
      counter_.h_gates += r.width;
    }
    counter_.depth += 1;
  }

  void hadamard_layer(std::initializer_list<std::string> regs, std::uint64_t ctrl = 0) {
    hadamard_layer(std::span<const std::string>(regs.begin(), regs.size()), ctrl);
  }

  // Bitwise |c>|t> -> |c>|t ^ c> between equal-width registers; one layer.
  void cnot_registers(std::string_view control, std::string_view target, std::uint64_t ctrl = 0) {
    const auto& c = layout_.find(control);
    const auto& t = layout_.find(target);
    if (c.width != t.width)
      throw std::invalid_argument("cnot_registers: register widths differ");
    for (int p = 0; p < c.width; ++p) cnot_qubits(c.offset + p, t.offset + p, ctrl);
    counter_.cnot_gates += c.width;
    counter_.depth += 1;
  }

  // X on every register bit selected by `mask`, as a single layer.
  void x_mask(std::string_view reg, std::uint64_t mask, std::uint64_t ctrl = 0) {
    const auto& r = layout_.find(reg);
    if (mask >> r.width) throw std::invalid_argument("x_mask: mask does not fit register");
    if (mask == 0) return;
    const std::uint64_t flip = mask << r.offset;
    permute([&](std::uint64_t idx) { return idx ^ flip; }, ctrl);
    counter_.x_gates += std::popcount(mask);
    counter_.depth += 1;
  }

  // Oracle call |x>|b> -> |x>|b ^ f(x)> with a one-qubit target register.
  void oracle_bitflip(const BooleanFunction& f, std::string_view input, std::string_view target,
                      std::uint64_t ctrl = 0) {
    const auto& in = layout_.find(input);
    const auto& tg = layout_.find(target);
    if (in.width != f.n()) throw std::invalid_argument("oracle: input register width != n");
    if (tg.width != 1) throw std::invalid_argument("oracle: bit-flip target must be one qubit");
    const std::uint64_t tbit = std::uint64_t{1} << tg.offset;
    const std::uint64_t half = amps_.size() >> 1;
    const std::uint64_t low = tbit - 1;
    detail::parallel_for(half, [&](std::uint64_t i) {
      const std::uint64_t idx = ((i & ~low) << 1) | (i & low);  // target bit clear
      if ((idx & ctrl) != ctrl) return;
      if (f((idx >> in.offset) & ((std::uint64_t{1} << in.width) - 1)))
        std::swap(amps_[idx], amps_[idx | tbit]);
    });
    counter_.u_f_calls += 1;
    counter_.depth += 1;
  }

  // Oracle call in phase form: amp(x) *= (-1)^{f(x)}.
  void oracle_phase(const BooleanFunction& f, std::string_view input, std::uint64_t ctrl = 0) {
    const auto& in = layout_.find(input);
    if (in.width != f.n()) throw std::invalid_argument("oracle: input register width != n");
    const std::uint64_t mask = (std::uint64_t{1} << in.width) - 1;
    detail::parallel_for(amps_.size(), [&](std::uint64_t idx) {
      if ((idx & ctrl) != ctrl) return;
      if (f((idx >> in.offset) & mask)) amps_[idx] = -amps_[idx];
    });
    counter_.u_f_calls += 1;
    counter_.depth += 1;
  }

  // Swap registers a and b when the one-qubit control register is |1>.
  void controlled_swap(std::string_view control, std::string_view reg_a, std::string_view reg_b,
                       std::uint64_t ctrl = 0) {
    const auto& c = layout_.find(control);
    const auto& a = layout_.find(reg_a);
    const auto& b = layout_.find(reg_b);
    if (c.width != 1) throw std::invalid_argument("controlled_swap: control must be one qubit");
    if (a.width != b.width) throw std::invalid_argument("controlled_swap: widths differ");
    const std::uint64_t cbit = std::uint64_t{1} << c.offset;
    const std::uint64_t amask = (std::uint64_t{1} << a.width) - 1;
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx) {
      if ((idx & ctrl) != ctrl || !(idx & cbit)) continue;
      const std::uint64_t va = (idx >> a.offset) & amask;
      const std::uint64_t vb = (idx >> b.offset) & amask;
      if (va == vb) continue;
      const std::uint64_t partner =
          (idx & ~(amask << a.offset) & ~(amask << b.offset)) | (vb << a.offset) | (va << b.offset);
      if (idx < partner) std::swap(amps_[idx], amps_[partner]);
    }
    counter_.cswap_gates += a.width;
    counter_.depth += 1;
  }

  // H(ancilla) . controlled-swap . H(ancilla).
  void swap_test(const std::string& ancilla, std::string_view reg_a, std::string_view reg_b) {
    hadamard_layer({ancilla});
    controlled_swap(ancilla, reg_a, reg_b);
    hadamard_layer({ancilla});
  }

  void ry(std::string_view reg, int position, double angle, std::uint64_t ctrl = 0) {
    const auto& r = layout_.find(reg);
    if (position < 0 || position >= r.width) throw std::invalid_argument("ry: bad qubit position");
    const int q = r.offset + position;
    const std::uint64_t bit = std::uint64_t{1} << q;
    const std::uint64_t low = bit - 1;
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    detail::parallel_for(amps_.size() >> 1, [&](std::uint64_t i) {
      const std::uint64_t i0 = ((i & ~low) << 1) | (i & low);
      if ((i0 & ctrl) != ctrl) return;
      const Amplitude a0 = amps_[i0], a1 = amps_[i0 | bit];
      amps_[i0] = c * a0 - s * a1;
      amps_[i0 | bit] = s * a0 + c * a1;
    });
    counter_.rotation_gates += 1;
    counter_.depth += 1;
  }

  // amp(idx) *= phase on all basis states with (idx & mask) == value.
  void phase_on_match(std::uint64_t mask, std::uint64_t value, Amplitude phase,
                      std::uint64_t ctrl = 0) {
    detail::parallel_for(amps_.size(), [&](std::uint64_t idx) {
      if ((idx & ctrl) != ctrl) return;
      if ((idx & mask) == value) amps_[idx] *= phase;
    });
    counter_.phase_gates += 1;
    counter_.depth += 1;
  }

  void phase_on_good(const GoodSubspace& good, Amplitude phase, std::uint64_t ctrl = 0) {
    const auto [mask, value] = good.compile(layout_);
    phase_on_match(mask, value, phase, ctrl);
  }

  // Scalar phase; physical (and counted) only when applied under control.
  void global_phase(Amplitude phase, std::uint64_t ctrl = 0) {
    detail::parallel_for(amps_.size(), [&](std::uint64_t idx) {
      if ((idx & ctrl) == ctrl) amps_[idx] *= phase;
    });
    if (ctrl) {
      counter_.phase_gates += 1;
      counter_.depth += 1;
    }
  }

  // --- queries (no mutation, no randomness unless seeded) -------------

  double norm_sq() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
  }

  double probability_of(std::string_view reg, std::uint64_t value) const {
    const auto& r = layout_.find(reg);
    if (value >> r.width) throw std::invalid_argument("probability_of: value out of range");
    return probability_of_good(GoodSubspace::equals(std::string(reg), value));
  }

  double probability_of_good(const GoodSubspace& good) const {
    const auto [mask, value] = good.compile(layout_);
    double acc = 0.0;
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx)
      if ((idx & mask) == value) acc += std::norm(amps_[idx]);
    return acc;
  }

  std::vector<double> marginal(std::string_view reg) const {
    const auto& r = layout_.find(reg);
    std::vector<double> dist(std::uint64_t{1} << r.width, 0.0);
    const std::uint64_t mask = (std::uint64_t{1} << r.width) - 1;
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx)
      dist[(idx >> r.offset) & mask] += std::norm(amps_[idx]);
    return dist;
  }

  // Samples `shots` outcomes from the register's Born distribution snapshot;
  // the stored state is not collapsed.
  std::map<std::uint64_t, long long> measure_register(std::string_view reg, long long shots,
                                                      std::uint64_t seed) const {
    if (shots < 1) throw std::invalid_argument("measure_register: shots must be >= 1");
    const std::vector<double> dist = marginal(reg);
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      acc += dist[i];
      cdf[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::map<std::uint64_t, long long> histogram;
    for (long long s = 0; s < shots; ++s) {
      const double u = unif(rng) * acc;
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::uint64_t outcome =
          it == cdf.end() ? dist.size() - 1 : static_cast<std::uint64_t>(it - cdf.begin());
      histogram[outcome] += 1;
    }
    return histogram;
  }

  // Projects onto reg == value and renormalizes; returns the pre-projection
  // probability. Helper for logical post-selection.
  double project(std::string_view reg, std::uint64_t value) {
    const auto& r = layout_.find(reg);
    const std::uint64_t mask = layout_.mask_of(r);
    const std::uint64_t want = value << r.offset;
    double p = 0.0;
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx)
      if ((idx & mask) == want) p += std::norm(amps_[idx]);
    if (p <= 0.0) throw std::runtime_error("project: zero-probability outcome");
    const double inv = 1.0 / std::sqrt(p);
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx)
      amps_[idx] = ((idx & mask) == want) ? amps_[idx] * inv : 0.0;
    return p;
  }

  Amplitude amplitude_at(std::initializer_list<std::pair<std::string_view, std::uint64_t>> values)
      const {
    std::uint64_t idx = 0;
    for (const auto& [name, value] : values) {
      const auto& r = layout_.find(name);
      if (value >> r.width) throw std::invalid_argument("amplitude_at: value out of range");
      idx |= value << r.offset;
    }
    return amps_[idx];
  }

 private:
  void h_qubit(int q, std::uint64_t ctrl) {
    static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
    const std::uint64_t bit = std::uint64_t{1} << q;
    const std::uint64_t low = bit - 1;
    detail::parallel_for(amps_.size() >> 1, [&](std::uint64_t i) {
      const std::uint64_t i0 = ((i & ~low) << 1) | (i & low);
      if ((i0 & ctrl) != ctrl) return;
      const Amplitude a = amps_[i0], b = amps_[i0 | bit];
      amps_[i0] = (a + b) * kInvSqrt2;
      amps_[i0 | bit] = (a - b) * kInvSqrt2;
    });
  }

  void cnot_qubits(int control, int target, std::uint64_t ctrl) {
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::uint64_t low = tbit - 1;
    detail::parallel_for(amps_.size() >> 1, [&](std::uint64_t i) {
      const std::uint64_t i0 = ((i & ~low) << 1) | (i & low);  // target bit clear
      if ((i0 & ctrl) != ctrl || !(i0 & cbit)) return;
      std::swap(amps_[i0], amps_[i0 | tbit]);
    });
  }

  template <typename Perm>
  void permute(Perm&& perm, std::uint64_t ctrl) {
    for (std::uint64_t idx = 0; idx < amps_.size(); ++idx) {
      if ((idx & ctrl) != ctrl) continue;
      const std::uint64_t partner = perm(idx);
      if ((partner & ctrl) != ctrl)
        throw std::logic_error("permutation crosses the controlled subspace");
      if (idx < partner) std::swap(amps_[idx], amps_[partner]);
    }
  }

  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
  QueryCounter counter_;
};

// --- binary statevector dump (debug tooling) ----------------------------
//
// 16-byte header: magic "ASVD", u32 version, u32 qubit count, u32 reserved;
// then 2^m (re, im) little-endian double pairs.

inline void save_statevector(const StateVector& state, std::ostream& out) {
  const char magic[4] = {'A', 'S', 'V', 'D'};
  const std::uint32_t version = 1;
  const std::uint32_t m = static_cast<std::uint32_t>(state.layout().total_qubits);
  const std::uint32_t reserved = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  for (const auto& a : state.amps()) {
    const double re = a.real(), im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

inline std::vector<std::complex<double>> load_statevector(std::istream& in, std::uint32_t* m_out = nullptr) {
  char magic[4];
  std::uint32_t version = 0, m = 0, reserved = 0;
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ASVD", 4) != 0)
    throw std::runtime_error("statevector dump: bad magic");
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&m), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || version != 1 || m > kMaxQubits)
    throw std::runtime_error("statevector dump: bad header");
  std::vector<std::complex<double>> amps(std::uint64_t{1} << m);
  for (auto& a : amps) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    a = {re, im};
  }
  if (!in) throw std::runtime_error("statevector dump: truncated payload");
  if (m_out) *m_out = m;
  return amps;
}

}  // namespace autospec
