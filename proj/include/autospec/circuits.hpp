#pragma once

// Circuit programs over the statevector simulator: an ordered list of layer
// operations plus register initializers and declared resource counts. The
// builders assemble the derivative-sampling circuit family (Gray-code staged
// oracle calls), the autocorrelation sampler, and the swap-test estimator.
//
// Programs are immutable values; executing one never mutates it. Running the
// ops on a fresh state must reproduce the declared metadata exactly, which
// the tests enforce.

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "autospec/boolfn.hpp"
#include "autospec/simulator.hpp"

namespace autospec {

// Cyclic single-bit-change enumeration of k-bit values, rotated so the last
// code is all-zeros (hence the first has Hamming weight one).
struct GrayCode {
  int k = 0;
  std::vector<std::uint64_t> codes;
};

inline GrayCode gray_code(int k) {
  if (k < 1 || k > 62) throw std::invalid_argument("gray_code: k out of range");
  GrayCode g{k, {}};
  g.codes.reserve(std::size_t{1} << k);
  for (std::uint64_t j = 1; j < (std::uint64_t{1} << k); ++j) g.codes.push_back(j ^ (j >> 1));
  g.codes.push_back(0);
  return g;
}

namespace ops {

struct HLayer {
  std::vector<std::string> regs;
};
struct CnotRegs {
  std::string control, target;
};
struct XMask {
  std::string reg;
  std::uint64_t mask = 0;
};
struct Oracle {
  std::shared_ptr<const BooleanFunction> f;
  std::string input;
  std::string target;  // one-qubit register; empty means phase mode
};
struct CSwap {
  std::string control, a, b;
};
struct Ry {
  std::string reg;
  int position = 0;
  double angle = 0.0;
};
// Phase e^{i*angle} on the program's initial basis state.
struct InitPhase {
  double angle = 0.0;
};
// Phase e^{i*angle} on the good subspace.
struct GoodPhase {
  GoodSubspace good;
  double angle = 0.0;
};

using Op = std::variant<HLayer, CnotRegs, XMask, Oracle, CSwap, Ry, InitPhase, GoodPhase>;

}  // namespace ops

struct CircuitMetadata {
  long long u_f_calls = 0;
  long long h_gates = 0;
  long long cnot_gates = 0;
  long long x_gates = 0;
  long long cswap_gates = 0;
  long long phase_gates = 0;
  long long rotation_gates = 0;
  long long depth = 0;

  long long gate_count() const {
    return h_gates + cnot_gates + x_gates + cswap_gates + phase_gates + rotation_gates;
  }
};

struct CircuitProgram {
  RegisterLayout layout;
  std::vector<std::uint64_t> init;  // one initial basis value per register
  std::vector<ops::Op> ops;
  CircuitMetadata metadata;

  std::uint64_t initial_index() const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < init.size(); ++i) idx |= init[i] << layout.registers[i].offset;
    return idx;
  }

  std::uint64_t system_mask() const {
    return (std::uint64_t{1} << layout.total_qubits) - 1;
  }
};

inline CircuitMetadata compute_metadata(const RegisterLayout& layout,
                                        const std::vector<ops::Op>& op_list) {
  CircuitMetadata m;
  for (const auto& op : op_list) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, ops::HLayer>) {
            for (const auto& r : o.regs) m.h_gates += layout.find(r).width;
          } else if constexpr (std::is_same_v<T, ops::CnotRegs>) {
            m.cnot_gates += layout.find(o.control).width;
          } else if constexpr (std::is_same_v<T, ops::XMask>) {
            m.x_gates += std::popcount(o.mask);
          } else if constexpr (std::is_same_v<T, ops::Oracle>) {
            m.u_f_calls += 1;
          } else if constexpr (std::is_same_v<T, ops::CSwap>) {
            m.cswap_gates += layout.find(o.a).width;
          } else if constexpr (std::is_same_v<T, ops::Ry>) {
            m.rotation_gates += 1;
          } else {
            m.phase_gates += 1;
          }
        },
        op);
    m.depth += 1;
  }
  return m;
}

// Applies a program's operations to `state`, forward or as the adjoint
// (reversed order, per-op inverse). The state's layout may extend the
// program's with extra registers stacked above it, which is how controlled
// applications with ancilla control bits work.
inline void apply_program(StateVector& state, const CircuitProgram& program, bool adjoint = false,
                          std::uint64_t ctrl = 0) {
  for (std::size_t r = 0; r < program.layout.registers.size(); ++r) {
    const auto& want = program.layout.registers[r];
    const auto& have = state.layout().registers.at(r);
    if (have.name != want.name || have.width != want.width || have.offset != want.offset)
      throw std::invalid_argument("state layout does not embed the program layout");
  }

  auto run_one = [&](const ops::Op& op) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, ops::HLayer>) {
            state.hadamard_layer(std::span<const std::string>(o.regs.data(), o.regs.size()), ctrl);
          } else if constexpr (std::is_same_v<T, ops::CnotRegs>) {
            state.cnot_registers(o.control, o.target, ctrl);
          } else if constexpr (std::is_same_v<T, ops::XMask>) {
            state.x_mask(o.reg, o.mask, ctrl);
          } else if constexpr (std::is_same_v<T, ops::Oracle>) {
            if (o.target.empty())
              state.oracle_phase(*o.f, o.input, ctrl);
            else
              state.oracle_bitflip(*o.f, o.input, o.target, ctrl);
          } else if constexpr (std::is_same_v<T, ops::CSwap>) {
            state.controlled_swap(o.control, o.a, o.b, ctrl);
          } else if constexpr (std::is_same_v<T, ops::Ry>) {
            state.ry(o.reg, o.position, adjoint ? -o.angle : o.angle, ctrl);
          } else if constexpr (std::is_same_v<T, ops::InitPhase>) {
            const double a = adjoint ? -o.angle : o.angle;
            state.phase_on_match(program.system_mask(), program.initial_index(),
                                 std::polar(1.0, a), ctrl);
          } else if constexpr (std::is_same_v<T, ops::GoodPhase>) {
            const double a = adjoint ? -o.angle : o.angle;
            state.phase_on_good(o.good, std::polar(1.0, a), ctrl);
          }
        },
        op);
  };

  if (!adjoint) {
    for (const auto& op : program.ops) run_one(op);
  } else {
    for (auto it = program.ops.rbegin(); it != program.ops.rend(); ++it) run_one(*it);
  }
}

// Fresh state initialized from the program's register values, ops applied.
inline StateVector run_program(const CircuitProgram& program) {
  StateVector state(program.layout, program.init);
  apply_program(state, program);
  return state;
}

namespace detail {

inline std::string point_register_name(std::size_t t) { return "point" + std::to_string(t + 1); }

}  // namespace detail

// Derivative-spectrum sampling circuit of order k = |points|. Registers:
//   work   1 qubit, starts |1>; turned into |-> so oracle calls phase-kick
//   output n qubits, starts |0^n>; carries the spectrum amplitudes at the end
//   point1..pointk, n qubits each, start at the shift points
// Stage j of the core XORs one point register into `output` (the register
// where the Gray codes g_{j-1} and g_j differ) and applies one oracle call;
// after 2^k stages `output` is back to the input value with the derivative's
// sign accumulated, and the closing H layer produces its Walsh amplitudes.
// k = 0 degenerates to the textbook one-query spectrum sampler.
inline CircuitProgram build_hodj(const BooleanFunction& f, const PointList& a) {
  if (a.n != f.n()) throw std::invalid_argument("build_hodj: point list width != n");
  const std::size_t k = a.k();
  const int n = f.n();

  CircuitProgram prog;
  prog.layout.append("work", 1);
  prog.layout.append("output", n);
  prog.init = {1, 0};
  for (std::size_t t = 0; t < k; ++t) {
    prog.layout.append(detail::point_register_name(t), n);
    prog.init.push_back(a.points[t]);
  }

  auto oracle = std::make_shared<const BooleanFunction>(f);
  prog.ops.push_back(ops::HLayer{{"work", "output"}});
  if (k == 0) {
    prog.ops.push_back(ops::Oracle{oracle, "output", "work"});
  } else {
    const GrayCode g = gray_code(static_cast<int>(k));
    std::uint64_t prev = 0;  // g_0 == g_{2^k} == 0
    for (std::uint64_t code : g.codes) {
      const int t = std::countr_zero(prev ^ code);
      prog.ops.push_back(ops::CnotRegs{detail::point_register_name(t), "output"});
      prog.ops.push_back(ops::Oracle{oracle, "output", "work"});
      prev = code;
    }
  }
  prog.ops.push_back(ops::HLayer{{"work", "output"}});
  prog.metadata = compute_metadata(prog.layout, prog.ops);
  return prog;
}

// Autocorrelation sampler: puts a fresh `shift` register into uniform
// superposition and runs the first-order derivative sampler with `shift` as
// the point register. Observing output == 0 has probability sigma_f / 2^n,
// and conditioned on that the shift register carries amplitudes proportional
// to the autocorrelation coefficients.
inline CircuitProgram build_autocorrelation_sampler(const BooleanFunction& f) {
  const int n = f.n();
  CircuitProgram prog;
  prog.layout.append("work", 1);
  prog.layout.append("output", n);
  prog.layout.append("shift", n);
  prog.init = {1, 0, 0};

  auto oracle = std::make_shared<const BooleanFunction>(f);
  prog.ops.push_back(ops::HLayer{{"shift"}});
  prog.ops.push_back(ops::HLayer{{"work", "output"}});
  for (int stage = 0; stage < 2; ++stage) {
    prog.ops.push_back(ops::CnotRegs{"shift", "output"});
    prog.ops.push_back(ops::Oracle{oracle, "output", "work"});
  }
  prog.ops.push_back(ops::HLayer{{"work", "output"}});
  prog.metadata = compute_metadata(prog.layout, prog.ops);
  return prog;
}

// Swap-test estimator for the autocorrelation coefficient at point a:
// prepares |psi> = 2^{-n/2} sum_x (-1)^{f(x)} |x> in `left` and the shifted
// sibling in `right`, then swap-tests them against a one-qubit ancilla.
// Pr[ancilla = 0] = 1/2 + autocorr(a)^2 / 2.
//
// The shift point is classical, so by default the copy-in/copy-out of a is
// lowered to X gates on the bits where a is set. `literal_point_register`
// instead allocates an explicit point register wired with CNOTs; both forms
// produce the same state on the shared registers.
inline CircuitProgram build_swap_test_estimator(const BooleanFunction& f, std::uint64_t a,
                                                bool literal_point_register = false) {
  const int n = f.n();
  BooleanFunction::check_point(n, a, "shift point");

  CircuitProgram prog;
  prog.layout.append("ancilla", 1);
  prog.layout.append("left", n);
  prog.layout.append("right", n);
  prog.layout.append("work", 1);
  prog.init = {0, 0, 0, 1};
  if (literal_point_register) {
    prog.layout.append("point", n);
    prog.init.push_back(a);
  }

  auto oracle = std::make_shared<const BooleanFunction>(f);
  prog.ops.push_back(ops::HLayer{{"left", "right", "work"}});
  if (literal_point_register) {
    prog.ops.push_back(ops::CnotRegs{"point", "right"});
  } else if (a != 0) {
    prog.ops.push_back(ops::XMask{"right", a});
  }
  prog.ops.push_back(ops::Oracle{oracle, "left", "work"});
  prog.ops.push_back(ops::Oracle{oracle, "right", "work"});
  if (literal_point_register) {
    prog.ops.push_back(ops::CnotRegs{"point", "right"});
  } else if (a != 0) {
    prog.ops.push_back(ops::XMask{"right", a});
  }
  prog.ops.push_back(ops::HLayer{{"ancilla"}});
  prog.ops.push_back(ops::CSwap{"ancilla", "left", "right"});
  prog.ops.push_back(ops::HLayer{{"ancilla"}});
  prog.metadata = compute_metadata(prog.layout, prog.ops);
  return prog;
}

}  // namespace autospec
