// autospec command line: classical spectra of Boolean functions and the
// simulated quantum samplers/estimators over them.
//
// Exit codes: 0 success, 2 parameter or input-format violation, 3 qubit
// budget exceeded.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "autospec/amplify.hpp"
#include "autospec/boolfn.hpp"
#include "autospec/circuits.hpp"
#include "autospec/estimators.hpp"
#include "autospec/json_io.hpp"
#include "autospec/simulator.hpp"

namespace {

using autospec::BooleanFunction;
using autospec::ordered_json;

constexpr int kMaxSimulatedBits = 12;  // keeps every circuit within the qubit budget

struct FunctionArgs {
  std::string family = "random";
  std::string table_path;
  int n = 0;
  std::string w = "1";
  int value = 0;
  std::uint64_t fseed = 0;
  bool fseed_set = false;
  bool bits = false;
};

void add_function_flags(CLI::App* cmd, FunctionArgs& args) {
  cmd->add_option("--family", args.family,
                  "function family: constant | linear | bent | random | and");
  cmd->add_option("--table", args.table_path, "truth-table file (overrides --family)");
  cmd->add_option("--n", args.n, "number of input bits");
  cmd->add_option("--w", args.w, "mask for the linear family (integer, or bitstring with --bits)");
  cmd->add_option("--value", args.value, "value for the constant family (0 or 1)");
  cmd->add_option("--fseed", args.fseed, "seed for the random family")
      ->each([&](const std::string&) { args.fseed_set = true; });
  cmd->add_flag("--bits", args.bits,
                "interpret points and masks as bitstrings, first character = x_1");
}

std::uint64_t parse_point(const std::string& text, bool bits) {
  if (bits) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1')
        v |= std::uint64_t{1} << i;
      else if (text[i] != '0')
        throw std::invalid_argument("bad bitstring '" + text + "'");
    }
    return v;
  }
  return std::stoull(text);
}

BooleanFunction and_all(int n) {
  std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
  table.back() = 1;
  return BooleanFunction::from_table(n, std::move(table));
}

BooleanFunction resolve_function(const FunctionArgs& args, std::uint64_t run_seed) {
  if (!args.table_path.empty()) {
    std::ifstream in(args.table_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open truth-table file " + args.table_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return autospec::parse_truth_table(buf.str());
  }
  if (args.n < 1) throw std::invalid_argument("--n is required and must be >= 1");
  if (args.family == "constant") return BooleanFunction::constant(args.n, args.value);
  if (args.family == "linear") return BooleanFunction::linear(args.n, parse_point(args.w, args.bits));
  if (args.family == "bent") return BooleanFunction::bent_quadratic(args.n);
  if (args.family == "and") return and_all(args.n);
  if (args.family == "random")
    return BooleanFunction::random(args.n, args.fseed_set ? args.fseed : run_seed);
  throw std::invalid_argument("unknown family '" + args.family + "'");
}

std::string family_label(const FunctionArgs& args) {
  return args.table_path.empty() ? args.family : "table";
}

void emit(const ordered_json& j, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + output_path);
  out << j.dump(2) << "\n";
}

void append_csv(const std::string& path, const autospec::CsvLogRow& row) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::invalid_argument("cannot open csv log " + path);
  if (fresh) out << autospec::csv_log_header() << "\n";
  out << autospec::csv_log_line(row) << "\n";
}

void require_simulated_width(int n) {
  if (n > kMaxSimulatedBits)
    throw autospec::qubit_budget_error("simulated runs support n <= " +
                                       std::to_string(kMaxSimulatedBits) + ", got n=" +
                                       std::to_string(n));
}

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// ---- spectrum ----------------------------------------------------------

int cmd_spectrum(const FunctionArgs& fargs, bool walsh, bool autocorr, bool anf,
                 const std::string& point_text, const std::string& out_format,
                 const std::string& output_path) {
  const BooleanFunction f = resolve_function(fargs, 0);
  ordered_json j;
  j["n"] = f.n();
  j["function_family"] = family_label(fargs);
  if (!point_text.empty()) {
    const std::uint64_t a = parse_point(point_text, fargs.bits);
    BooleanFunction::check_point(f.n(), a, "--point");
    j["point"] = a;
    j["walsh"] = autospec::walsh_spectrum(f).values.at(a);
    j["autocorrelation"] = autospec::autocorrelation_spectrum(f).values.at(a);
    j["sigma_f"] = autospec::sum_of_squares(f);
    j["degree"] = autospec::degree(f);
    emit(j, output_path);
    return 0;
  }
  if (walsh) j["walsh"] = autospec::walsh_spectrum(f).values;
  if (autocorr) j["autocorrelation"] = autospec::autocorrelation_spectrum(f).values;
  if (anf) {
    const auto coeffs = autospec::algebraic_normal_form(f);
    ordered_json monomials = ordered_json::array();
    for (std::uint64_t m = 0; m < coeffs.size(); ++m)
      if (coeffs[m]) monomials.push_back(m);
    j["anf"] = monomials;
  }
  j["sigma_f"] = autospec::sum_of_squares(f);
  j["degree"] = autospec::degree(f);

  if (out_format == "csv") {
    std::ostringstream csv;
    csv << "index,walsh,autocorrelation\n";
    const auto w = autospec::walsh_spectrum(f);
    const auto r = autospec::autocorrelation_spectrum(f);
    for (std::uint64_t i = 0; i < f.size(); ++i) {
      csv << i << "," << ordered_json(w.values[i]).dump() << ","
          << ordered_json(r.values[i]).dump() << "\n";
    }
    if (output_path.empty())
      std::cout << csv.str();
    else {
      std::ofstream out(output_path, std::ios::binary);
      if (!out) throw std::invalid_argument("cannot open output file " + output_path);
      out << csv.str();
    }
    return 0;
  }
  emit(j, output_path);
  return 0;
}

// ---- hodj --------------------------------------------------------------

int cmd_hodj(const FunctionArgs& fargs, const std::string& points_text, bool verify,
             long long shots, std::uint64_t seed, const std::string& dump_circuit,
             const std::string& dump_state, const std::string& output_path) {
  const BooleanFunction f = resolve_function(fargs, seed);
  require_simulated_width(f.n());

  std::vector<std::uint64_t> points;
  if (!points_text.empty()) {
    std::stringstream ss(points_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) points.push_back(parse_point(tok, fargs.bits));
  }
  const autospec::PointList a(f.n(), points);
  const autospec::CircuitProgram prog = autospec::build_hodj(f, a);
  const autospec::StateVector state = autospec::run_program(prog);

  ordered_json j;
  j["n"] = f.n();
  j["function_family"] = family_label(fargs);
  j["points"] = points;
  j["u_f_calls"] = state.counter().u_f_calls;
  j["cnot_gates"] = state.counter().cnot_gates;
  j["h_gates"] = state.counter().h_gates;
  j["depth"] = state.counter().depth;

  if (verify) {
    const autospec::Spectrum w = autospec::derivative_walsh_spectrum(f, a);
    double max_diff = 0.0;
    for (std::uint64_t y = 0; y < f.size(); ++y) {
      std::uint64_t idx = 1 | (y << 1);
      for (std::size_t t = 0; t < points.size(); ++t)
        idx |= points[t] << prog.layout.find("point" + std::to_string(t + 1)).offset;
      max_diff = std::max(max_diff, std::abs(state.amps()[idx] -
                                             std::complex<double>(w.values[y])));
    }
    j["verify"] = {{"max_abs_amplitude_error", max_diff}, {"tolerance", 1e-10},
                   {"ok", max_diff <= 1e-10}};
    if (max_diff > 1e-10) {
      std::cerr << "verification failed: max amplitude error " << max_diff << "\n";
      emit(j, output_path);
      return 1;
    }
  }
  if (shots > 0) j["histogram"] = autospec::histogram_to_json(
      state.measure_register("output", shots, autospec::derive_seed(seed, 1)));
  if (!dump_circuit.empty()) emit(autospec::circuit_to_json(prog), dump_circuit);
  if (!dump_state.empty()) {
    std::ofstream out(dump_state, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open state dump file " + dump_state);
    autospec::save_statevector(state, out);
  }
  emit(j, output_path);
  return 0;
}

// ---- sample ------------------------------------------------------------

int cmd_sample(const FunctionArgs& fargs, double delta, long long shots, std::uint64_t seed,
               double p_min, bool verify, const std::string& csv_path,
               const std::string& output_path) {
  const auto start = std::chrono::steady_clock::now();
  const BooleanFunction f = resolve_function(fargs, seed);
  require_simulated_width(f.n());
  const autospec::SampleResult result = autospec::sample_autocorrelation(f, delta, shots, seed, p_min);

  ordered_json j;
  j["algorithm"] = "autocorrelation_sampling";
  j["n"] = f.n();
  j["function_family"] = family_label(fargs);
  j["delta"] = delta;
  j["shots"] = shots;
  j["seed"] = seed;
  j["grover_iterations"] = result.grover_iterations;
  j["u_f_calls_per_shot"] = result.u_f_calls_per_shot;
  j["u_f_calls_total"] = result.u_f_calls_total;
  j["histogram"] = autospec::histogram_to_json(result.histogram);

  if (verify) {
    const autospec::Spectrum r = autospec::autocorrelation_spectrum(f);
    const double sigma = autospec::sum_of_squares(f);
    double tv = 0.0;
    for (std::uint64_t b = 0; b < f.size(); ++b) {
      const double ideal = r.values[b] * r.values[b] / sigma;
      const auto it = result.histogram.find(b);
      const double freq =
          it == result.histogram.end()
              ? 0.0
              : static_cast<double>(it->second) / static_cast<double>(shots);
      tv += std::abs(freq - ideal);
    }
    j["tv_distance_vs_classical"] = tv / 2.0;
  }
  emit(j, output_path);

  if (!csv_path.empty()) {
    autospec::CsvLogRow row;
    row.run_id = "sample-" + std::to_string(seed);
    row.algorithm = "autocorrelation_sampling";
    row.n = f.n();
    row.function_family = family_label(fargs);
    row.epsilon = 0.0;
    row.delta = delta;
    row.estimate = 0.0;
    row.truth = autospec::sum_of_squares(f);
    row.u_f_calls = result.u_f_calls_total;
    row.seed = seed;
    row.wall_ms = elapsed_ms(start);
    append_csv(csv_path, row);
  }
  return 0;
}

// ---- estimate / sigma ---------------------------------------------------

int cmd_estimate(const FunctionArgs& fargs, const std::string& point_text, double epsilon,
                 double delta, std::uint64_t seed, bool zero_guard, bool classical,
                 const std::string& dump_circuit, const std::string& csv_path,
                 const std::string& output_path) {
  const auto start = std::chrono::steady_clock::now();
  const BooleanFunction f = resolve_function(fargs, seed);
  const std::uint64_t a = parse_point(point_text, fargs.bits);
  BooleanFunction::check_point(f.n(), a, "--point");

  std::string algorithm;
  autospec::EstimateReport report;
  double truth = 0.0;
  const autospec::Spectrum r = autospec::autocorrelation_spectrum(f);
  if (classical) {
    algorithm = "autocorrelation_classical";
    report = autospec::estimate_autocorrelation_classical(f, a, epsilon, delta, seed);
    truth = r.values[a];
  } else {
    require_simulated_width(f.n());
    algorithm = zero_guard ? "autocorrelation_sq_zero_guard" : "autocorrelation_sq_quantum";
    report = zero_guard
                 ? autospec::estimate_autocorrelation_sq_with_zero_guard(f, a, epsilon, delta, seed)
                 : autospec::estimate_autocorrelation_sq(f, a, epsilon, delta, seed);
    truth = r.values[a] * r.values[a];
  }

  ordered_json j;
  j["algorithm"] = algorithm;
  j["n"] = f.n();
  j["function_family"] = family_label(fargs);
  j["point"] = a;
  j["truth"] = truth;
  j["report"] = autospec::report_to_json(report);
  if (!dump_circuit.empty() && !classical)
    emit(autospec::circuit_to_json(autospec::build_swap_test_estimator(f, a)), dump_circuit);
  emit(j, output_path);

  if (!csv_path.empty()) {
    autospec::CsvLogRow row;
    row.run_id = algorithm + "-" + std::to_string(seed);
    row.algorithm = algorithm;
    row.n = f.n();
    row.function_family = family_label(fargs);
    row.point = std::to_string(a);
    row.epsilon = epsilon;
    row.delta = delta;
    row.estimate = report.estimate;
    row.truth = truth;
    row.u_f_calls = report.u_f_calls;
    row.classical_calls = report.classical_calls;
    row.seed = seed;
    row.wall_ms = elapsed_ms(start);
    append_csv(csv_path, row);
  }
  return 0;
}

int cmd_sigma(const FunctionArgs& fargs, double epsilon, double delta, std::uint64_t seed,
              bool classical, const std::string& csv_path, const std::string& output_path) {
  const auto start = std::chrono::steady_clock::now();
  const BooleanFunction f = resolve_function(fargs, seed);

  std::string algorithm;
  autospec::EstimateReport report;
  if (classical) {
    algorithm = "sigma_classical";
    report = autospec::estimate_sigma_classical(f, epsilon, delta, seed);
  } else {
    require_simulated_width(f.n());
    algorithm = "sigma_quantum";
    report = autospec::estimate_sigma_quantum(f, epsilon, delta, seed);
  }
  const double truth = autospec::sum_of_squares(f);

  ordered_json j;
  j["algorithm"] = algorithm;
  j["n"] = f.n();
  j["function_family"] = family_label(fargs);
  j["truth"] = truth;
  j["report"] = autospec::report_to_json(report);
  emit(j, output_path);

  if (!csv_path.empty()) {
    autospec::CsvLogRow row;
    row.run_id = algorithm + "-" + std::to_string(seed);
    row.algorithm = algorithm;
    row.n = f.n();
    row.function_family = family_label(fargs);
    row.epsilon = epsilon;
    row.delta = delta;
    row.estimate = report.estimate;
    row.truth = truth;
    row.u_f_calls = report.u_f_calls;
    row.classical_calls = report.classical_calls;
    row.seed = seed;
    row.wall_ms = elapsed_ms(start);
    append_csv(csv_path, row);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean function spectra and simulated quantum estimators"};
  app.require_subcommand(1);

  // spectrum
  FunctionArgs spectrum_fn;
  bool opt_walsh = false, opt_autocorr = false, opt_anf = false;
  std::string spectrum_point, spectrum_out = "json", spectrum_output;
  CLI::App* spectrum = app.add_subcommand("spectrum", "classical spectra, degree and sigma_f");
  add_function_flags(spectrum, spectrum_fn);
  spectrum->add_flag("--walsh", opt_walsh, "include the Walsh spectrum");
  spectrum->add_flag("--autocorr", opt_autocorr, "include the autocorrelation spectrum");
  spectrum->add_flag("--anf", opt_anf, "include the ANF monomial list");
  spectrum->add_option("--point", spectrum_point, "report single coefficients at this point");
  spectrum->add_option("--out", spectrum_out, "output format: json | csv");
  spectrum->add_option("--output", spectrum_output, "write to file instead of stdout");

  // hodj
  FunctionArgs hodj_fn;
  std::string hodj_points, hodj_dump_circuit, hodj_dump_state, hodj_output;
  bool hodj_verify = false;
  long long hodj_shots = 0;
  std::uint64_t hodj_seed = 0;
  CLI::App* hodj = app.add_subcommand("hodj", "derivative-spectrum sampling circuit");
  add_function_flags(hodj, hodj_fn);
  hodj->add_option("--points", hodj_points, "comma-separated shift points (empty for order 0)");
  hodj->add_flag("--verify", hodj_verify, "compare amplitudes against the classical spectrum");
  hodj->add_option("--shots", hodj_shots, "measure the output register this many times");
  hodj->add_option("--seed", hodj_seed, "run seed");
  hodj->add_option("--dump-circuit", hodj_dump_circuit, "write circuit JSON to file");
  hodj->add_option("--dump-state", hodj_dump_state, "write final statevector dump to file");
  hodj->add_option("--output", hodj_output, "write report to file instead of stdout");

  // sample
  FunctionArgs sample_fn;
  double sample_delta = 0.05, sample_pmin = 0.0;
  long long sample_shots = 0;
  std::uint64_t sample_seed = 0;
  bool sample_verify = false;
  std::string sample_csv, sample_output;
  CLI::App* sample = app.add_subcommand("sample", "autocorrelation sampling with amplification");
  add_function_flags(sample, sample_fn);
  sample->add_option("--delta", sample_delta, "per-shot failure budget")->required();
  sample->add_option("--shots", sample_shots, "number of samples")->required();
  sample->add_option("--seed", sample_seed, "run seed")->required();
  sample->add_option("--p-min", sample_pmin, "override the success-probability floor 2^-n");
  sample->add_flag("--verify", sample_verify, "report TV distance against the classical engine");
  sample->add_option("--csv-log", sample_csv, "append a run row to this CSV file");
  sample->add_option("--output", sample_output, "write report to file instead of stdout");

  // estimate
  FunctionArgs est_fn;
  std::string est_point, est_csv, est_dump_circuit, est_output;
  double est_eps = 0.0, est_delta = 0.0;
  std::uint64_t est_seed = 0;
  bool est_zero_guard = false, est_classical = false;
  CLI::App* estimate = app.add_subcommand("estimate", "autocorrelation coefficient estimation");
  add_function_flags(estimate, est_fn);
  estimate->add_option("--point", est_point, "shift point a")->required();
  estimate->add_option("--epsilon", est_eps, "target accuracy")->required();
  estimate->add_option("--delta", est_delta, "failure budget")->required();
  estimate->add_option("--seed", est_seed, "run seed")->required();
  estimate->add_flag("--zero-guard", est_zero_guard, "return exactly 0 at vanishing coefficients");
  estimate->add_flag("--classical", est_classical, "classical sampling baseline");
  estimate->add_option("--dump-circuit", est_dump_circuit, "write estimator circuit JSON to file");
  estimate->add_option("--csv-log", est_csv, "append a run row to this CSV file");
  estimate->add_option("--output", est_output, "write report to file instead of stdout");

  // sigma
  FunctionArgs sigma_fn;
  double sigma_eps = 0.0, sigma_delta = 0.0;
  std::uint64_t sigma_seed = 0;
  bool sigma_quantum = false, sigma_classical = false;
  std::string sigma_csv, sigma_output;
  CLI::App* sigma = app.add_subcommand("sigma", "sum-of-squares indicator estimation");
  add_function_flags(sigma, sigma_fn);
  sigma->add_option("--epsilon", sigma_eps, "target accuracy")->required();
  sigma->add_option("--delta", sigma_delta, "failure budget")->required();
  sigma->add_option("--seed", sigma_seed, "run seed")->required();
  sigma->add_flag("--quantum", sigma_quantum, "use the estimation-on-sampler path (default)");
  sigma->add_flag("--classical", sigma_classical, "use the classical Monte Carlo baseline");
  sigma->add_option("--csv-log", sigma_csv, "append a run row to this CSV file");
  sigma->add_option("--output", sigma_output, "write report to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed())
      return cmd_spectrum(spectrum_fn, opt_walsh, opt_autocorr, opt_anf, spectrum_point,
                          spectrum_out, spectrum_output);
    if (hodj->parsed())
      return cmd_hodj(hodj_fn, hodj_points, hodj_verify, hodj_shots, hodj_seed, hodj_dump_circuit,
                      hodj_dump_state, hodj_output);
    if (sample->parsed())
      return cmd_sample(sample_fn, sample_delta, sample_shots, sample_seed, sample_pmin,
                        sample_verify, sample_csv, sample_output);
    if (estimate->parsed())
      return cmd_estimate(est_fn, est_point, est_eps, est_delta, est_seed, est_zero_guard,
                          est_classical, est_dump_circuit, est_csv, est_output);
    if (sigma->parsed()) {
      if (sigma_quantum && sigma_classical)
        throw std::invalid_argument("--quantum and --classical are mutually exclusive");
      return cmd_sigma(sigma_fn, sigma_eps, sigma_delta, sigma_seed, sigma_classical, sigma_csv,
                       sigma_output);
    }
  } catch (const autospec::qubit_budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const autospec::TruthTableError& e) {
    std::cerr << "error: malformed truth table: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
