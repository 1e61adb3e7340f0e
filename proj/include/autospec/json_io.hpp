#pragma once

// JSON serialization of circuits, reports and spectra, plus the CSV run-log
// line format. All JSON uses ordered maps so identical inputs serialize to
// identical bytes.

#include <string>

#include <json.hpp>

#include "autospec/amplify.hpp"
#include "autospec/circuits.hpp"
#include "autospec/estimators.hpp"

namespace autospec {

using ordered_json = nlohmann::ordered_json;

inline ordered_json circuit_to_json(const CircuitProgram& program) {
  ordered_json j;
  j["registers"] = ordered_json::array();
  for (std::size_t i = 0; i < program.layout.registers.size(); ++i) {
    const auto& r = program.layout.registers[i];
    j["registers"].push_back({{"name", r.name},
                              {"width", r.width},
                              {"offset", r.offset},
                              {"init", program.init.at(i)}});
  }
  j["ops"] = ordered_json::array();
  for (const auto& op : program.ops) {
    ordered_json o;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ops::HLayer>) {
            o["op"] = "h_layer";
            o["registers"] = v.regs;
          } else if constexpr (std::is_same_v<T, ops::CnotRegs>) {
            o["op"] = "cnot";
            o["registers"] = {v.control, v.target};
          } else if constexpr (std::is_same_v<T, ops::XMask>) {
            o["op"] = "x_mask";
            o["registers"] = {v.reg};
            o["params"] = {{"mask", v.mask}};
          } else if constexpr (std::is_same_v<T, ops::Oracle>) {
            o["op"] = v.target.empty() ? "oracle_phase" : "oracle";
            o["registers"] = v.target.empty() ? ordered_json::array({v.input})
                                              : ordered_json::array({v.input, v.target});
            o["params"] = {{"n", v.f->n()}};
          } else if constexpr (std::is_same_v<T, ops::CSwap>) {
            o["op"] = "controlled_swap";
            o["registers"] = {v.control, v.a, v.b};
          } else if constexpr (std::is_same_v<T, ops::Ry>) {
            o["op"] = "ry";
            o["registers"] = {v.reg};
            o["params"] = {{"position", v.position}, {"angle", v.angle}};
          } else if constexpr (std::is_same_v<T, ops::InitPhase>) {
            o["op"] = "phase_on_init";
            o["params"] = {{"angle", v.angle}};
          } else if constexpr (std::is_same_v<T, ops::GoodPhase>) {
            o["op"] = "phase_on_good";
            ordered_json cons = ordered_json::array();
            for (const auto& c : v.good.constraints)
              cons.push_back({{"register", c.reg}, {"value", c.value}});
            o["params"] = {{"constraints", cons}, {"angle", v.angle}};
          }
        },
        op);
    j["ops"].push_back(o);
  }
  j["metadata"] = {{"u_f_calls", program.metadata.u_f_calls},
                   {"h_gates", program.metadata.h_gates},
                   {"cnot_gates", program.metadata.cnot_gates},
                   {"x_gates", program.metadata.x_gates},
                   {"cswap_gates", program.metadata.cswap_gates},
                   {"phase_gates", program.metadata.phase_gates},
                   {"rotation_gates", program.metadata.rotation_gates},
                   {"gate_count", program.metadata.gate_count()},
                   {"depth", program.metadata.depth}};
  return j;
}

inline ordered_json report_to_json(const EstimateReport& report) {
  return {{"estimate", report.estimate},
          {"epsilon", report.epsilon},
          {"delta", report.delta},
          {"u_f_calls", report.u_f_calls},
          {"grover_applications", report.grover_applications},
          {"program_applications", report.program_applications},
          {"classical_calls", report.classical_calls},
          {"seed", report.seed}};
}

inline ordered_json histogram_to_json(const std::map<std::uint64_t, long long>& histogram) {
  ordered_json j = ordered_json::object();
  for (const auto& [outcome, count] : histogram) j[std::to_string(outcome)] = count;
  return j;
}

inline std::string csv_log_header() {
  return "run_id,algorithm,n,function_family,point,epsilon,delta,estimate,truth,"
         "u_f_calls,classical_calls,seed,wall_ms";
}

struct CsvLogRow {
  std::string run_id;
  std::string algorithm;
  int n = 0;
  std::string function_family;
  std::string point;  // empty when not applicable
  double epsilon = 0.0;
  double delta = 0.0;
  double estimate = 0.0;
  double truth = 0.0;
  long long u_f_calls = 0;
  long long classical_calls = 0;
  std::uint64_t seed = 0;
  long long wall_ms = 0;
};

inline std::string csv_log_line(const CsvLogRow& row) {
  auto num = [](double v) {
    ordered_json j = v;
    return j.dump();
  };
  return row.run_id + "," + row.algorithm + "," + std::to_string(row.n) + "," +
         row.function_family + "," + row.point + "," + num(row.epsilon) + "," + num(row.delta) +
         "," + num(row.estimate) + "," + num(row.truth) + "," + std::to_string(row.u_f_calls) +
         "," + std::to_string(row.classical_calls) + "," + std::to_string(row.seed) + "," +
         std::to_string(row.wall_ms);
}

}  // namespace autospec
