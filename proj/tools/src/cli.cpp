// Copyright 2026 The nvforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvforge/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "nvforge/errors.hpp"
#include "nvforge/experiment.hpp"
#include "nvforge/kak.hpp"
#include "nvforge/pulse.hpp"
#include "nvforge/random.hpp"
#include "nvforge/serialization.hpp"

#ifndef NVFORGE_DATA_DIR
#define NVFORGE_DATA_DIR "data"
#endif

namespace nvforge::cli {

namespace {

using nlohmann::json;

enum class Format { json, csv };

/// Everything a command needs besides its own arguments.
struct RunConfig {
  PhysicalParams phys;
  NoiseModel noise = NoiseModel::calibrated();
  BasisConvention basis = BasisConvention::text;
  Format format = Format::json;
  Mode mode = Mode::ideal;
  bool noise_on = true;
  std::uint64_t seed = 0;
};

/// Raw flag values; empty optionals leave the config file's value alone.
struct Flags {
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> noise;
  std::optional<std::string> basis;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Format format_from_string(const std::string& text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  throw PreconditionError("format must be json or csv");
}

bool noise_from_string(const std::string& text) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw PreconditionError("--noise takes on or off");
}

RunConfig resolve_config(const Flags& flags) {
  RunConfig config;
  std::string path = flags.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("NVFORGE_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw PreconditionError("config must be a JSON object");
    try {
      if (j.contains("physical")) config.phys = physical_params_from_json(j.at("physical"));
      if (j.contains("noise")) config.noise = noise_from_json(j.at("noise"), config.noise);
      if (j.contains("basis")) config.basis = basis_from_string(j.at("basis").get<std::string>());
      if (j.contains("format")) config.format = format_from_string(j.at("format").get<std::string>());
      if (j.contains("mode")) config.mode = mode_from_string(j.at("mode").get<std::string>());
      if (j.contains("noise_enabled")) config.noise_on = j.at("noise_enabled").get<bool>();
      if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
      throw PreconditionError(std::string("malformed config: ") + e.what());
    }
  }
  if (flags.mode) config.mode = mode_from_string(*flags.mode);
  if (flags.noise) config.noise_on = noise_from_string(*flags.noise);
  if (flags.basis) config.basis = basis_from_string(*flags.basis);
  if (flags.format) config.format = format_from_string(*flags.format);
  if (flags.seed) config.seed = *flags.seed;
  return config;
}

NoiseModel active_noise(const RunConfig& config) {
  return config.noise_on ? config.noise : NoiseModel::noiseless();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string data_path(const std::string& file) {
  if (const char* env = std::getenv("NVFORGE_DATA_DIR"); env != nullptr) {
    return std::string(env) + "/" + file;
  }
  return std::string(NVFORGE_DATA_DIR) + "/" + file;
}

// Polar projection onto the nearest unitary, for inputs that are unitary to
// the CLI's looser tolerance but not the library's.
Mat4 nearest_unitary(const Mat4& m) {
  Eigen::JacobiSVD<Mat4> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

constexpr double kCliUnitarityTolerance = 1e-8;

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string matrix_path;
  bool random = false;
};

void cmd_decompose(const DecomposeArgs& args, const RunConfig& config, std::ostream& out) {
  if (args.random == !args.matrix_path.empty()) {
    throw PreconditionError("decompose needs exactly one of a matrix file or --random");
  }
  Mat4 u;
  if (args.random) {
    std::mt19937_64 rng(config.seed);
    u = haar_unitary4(rng);
  } else {
    u = matrix_from_json(read_json_file(args.matrix_path));
  }
  const double residual = unitarity_residual(u);
  if (!(residual <= kCliUnitarityTolerance)) {
    std::ostringstream msg;
    msg << "input is not unitary: residual " << std::setprecision(6) << residual
        << " exceeds " << kCliUnitarityTolerance;
    throw PreconditionError(msg.str());
  }
  if (residual > tol::kInput) u = nearest_unitary(u);
  const KakDecomposition kak = kak_decompose(u);
  const double fidelity = fidelity_upto_phase(synthesize(kak.params), u);
  if (config.format == Format::csv) {
    out << "name,value\n";
    const auto values = kak.params.to_array();
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << fifteen_param_names()[k] << ',' << std::setprecision(17) << values[k] << '\n';
    }
    out << "fidelity," << std::setprecision(17) << fidelity << '\n';
    return;
  }
  json j = {{"params", params_to_json(kak.params)},
            {"global_phase", kak.global_phase},
            {"fidelity", fidelity},
            {"unitarity_residual", residual}};
  if (args.random) {
    j["seed"] = config.seed;
    j["matrix"] = matrix_to_json(u);
  }
  print_json(out, j);
}

void cmd_synthesize(const std::string& params_path, const RunConfig& config,
                    std::ostream& out) {
  const FifteenParams p = params_from_json(read_json_file(params_path));
  const Mat4 u = synthesize(p);
  const Circuit hw = hardware_circuit(p);
  if (config.format == Format::csv) {
    out << "row,col,re,im\n" << std::setprecision(17);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        out << r << ',' << c << ',' << u(r, c).real() << ',' << u(r, c).imag() << '\n';
      }
    }
    return;
  }
  print_json(out, {{"matrix", matrix_to_json(u)},
                   {"hardware_circuit", circuit_to_json(hw)},
                   {"duration_ns", round_duration(circuit_duration_ns(hw, config.phys))}});
}

struct PulsesArgs {
  std::string params_path;
  std::string circuit_path;
  std::vector<std::string> algorithm;
  std::string out_path;
};

Circuit algorithm_circuit(const std::vector<std::string>& spec) {
  if (spec.size() != 2) throw PreconditionError("--algorithm takes ALGORITHM ORACLE");
  if (spec[0] == "dj") {
    if (spec[1] == "constant") return dj_circuit(DjOracle::constant);
    if (spec[1] == "balanced") return dj_circuit(DjOracle::balanced);
    throw PreconditionError("unknown DJ oracle '" + spec[1] + "' (constant|balanced)");
  }
  if (spec[0] == "grover") {
    const std::string& o = spec[1];
    if (o.size() == 2 && (o[0] == '0' || o[0] == '1') && (o[1] == '0' || o[1] == '1')) {
      return grover_circuit(o[0] - '0', o[1] - '0');
    }
    throw PreconditionError("unknown Grover oracle '" + o + "' (00|01|10|11)");
  }
  throw PreconditionError("unknown algorithm '" + spec[0] + "' (dj|grover)");
}

void cmd_pulses(const PulsesArgs& args, const RunConfig& config, std::ostream& out) {
  const int sources = !args.params_path.empty() + !args.circuit_path.empty() +
                      !args.algorithm.empty();
  if (sources != 1) {
    throw PreconditionError("pulses needs exactly one of --params, --circuit, --algorithm");
  }
  PulseSchedule schedule;
  if (!args.params_path.empty()) {
    schedule = compile_to_pulses(params_from_json(read_json_file(args.params_path)), config.phys);
  } else if (!args.circuit_path.empty()) {
    schedule = compile_circuit(circuit_from_json(read_json_file(args.circuit_path)), config.phys);
  } else {
    const FifteenParams p = decompose(circuit_unitary(algorithm_circuit(args.algorithm)));
    schedule = compile_to_pulses(p, config.phys);
  }
  const std::string body = config.format == Format::csv
                               ? schedule_to_csv(schedule)
                               : schedule_to_json(schedule).dump(2) + "\n";
  const double total = round_duration(schedule.total_duration_ns());
  if (!args.out_path.empty()) {
    write_text_file(args.out_path, body);
    print_json(out, {{"segments", schedule.segments.size()},
                     {"total_duration_ns", total},
                     {"written", args.out_path}});
    return;
  }
  if (config.format == Format::csv) {
    out << body;
    return;
  }
  print_json(out, {{"segments", schedule.segments.size()},
                   {"total_duration_ns", total},
                   {"mw_frame", schedule.mw_frame},
                   {"rf_frame", schedule.rf_frame},
                   {"schedule", schedule_to_json(schedule)}});
}

struct RunArgs {
  std::string algorithm;
  std::string oracle;
  std::string emit_bars;
  std::string variant = "combined";
};

void cmd_run(const RunArgs& args, const RunConfig& config, std::ostream& out) {
  const MeasurementVariant variant = variant_from_string(args.variant);
  ExperimentPlan plan = [&] {
    if (args.algorithm == "dj") {
      if (args.oracle == "constant") return plan_dj(DjOracle::constant, config.phys);
      if (args.oracle == "balanced") return plan_dj(DjOracle::balanced, config.phys);
      throw PreconditionError("unknown DJ oracle '" + args.oracle + "' (constant|balanced)");
    }
    if (args.algorithm == "grover") {
      const std::string& o = args.oracle;
      if (o.size() == 2 && (o[0] == '0' || o[0] == '1') && (o[1] == '0' || o[1] == '1')) {
        return plan_grover(o[0] - '0', o[1] - '0', config.phys);
      }
      throw PreconditionError("unknown Grover oracle '" + o + "' (00|01|10|11)");
    }
    throw PreconditionError("unknown algorithm '" + args.algorithm + "' (dj|grover)");
  }();
  RunOptions options;
  options.mode = config.mode;
  options.noise = active_noise(config);
  options.phys = config.phys;
  options.basis = config.basis;
  const PopulationReport report = evaluate_variant(plan, variant, options);
  if (!args.emit_bars.empty()) {
    RunOptions ideal = options;
    ideal.mode = Mode::ideal;
    write_text_file(args.emit_bars, bars_csv(evaluate_variant(plan, variant, ideal), report));
  }
  if (config.format == Format::csv) {
    out << "level,population\n" << std::setprecision(12);
    for (int k = 0; k < 4; ++k) out << 'P' << k + 1 << ',' << report.populations[k] << '\n';
    out << "success," << report.success << '\n';
    return;
  }
  json j = report_to_json(report);
  j["noise"] = noise_to_json(options.noise);
  print_json(out, j);
}

void cmd_calibrate(const RunConfig& config, std::ostream& out) {
  CalibrationSettings settings;
  settings.mode = config.mode == Mode::pulse ? Mode::pulse : Mode::noisy;
  NoiseModel base = config.noise;
  json j;
  if (!config.noise_on) {
    // Dephasing is disabled, so there is nothing to fit: report the residuals
    // that polarization alone leaves behind.
    RunOptions options;
    options.mode = settings.mode;
    options.noise = base;
    options.noise.gamma_e = 0.0;
    options.phys = config.phys;
    const auto simulated = calibration_successes(calibration_plans(config.phys), options);
    CalibrationResult result;
    result.gamma_e = 0.0;
    result.tolerance = settings.tolerance;
    result.grid_points = 1;
    result.all_pass = true;
    static const std::array<const char*, 6> names = {
        "dj_constant", "dj_balanced", "grover_00", "grover_01", "grover_10", "grover_11"};
    for (std::size_t k = 0; k < 6; ++k) {
      CalibrationEntry e{names[k], reference_success()[k], simulated[k],
                         simulated[k] - reference_success()[k], false};
      e.pass = std::abs(e.residual) <= settings.tolerance;
      result.all_pass = result.all_pass && e.pass;
      result.sum_squared_error += e.residual * e.residual;
      result.entries.push_back(e);
    }
    j = calibration_to_json(result);
    j["fitted"] = false;
    j["note"] =
        "dephasing disabled: no gamma_e fitted; residuals reflect polarization only";
  } else {
    j = calibration_to_json(calibrate_dephasing(base, config.phys, settings));
    j["fitted"] = true;
  }
  j["mode"] = to_string(settings.mode);
  j["p_e"] = base.p_e;
  j["p_n"] = base.p_n;
  if (config.format == Format::csv) {
    out << "experiment,reference,simulated,residual,pass\n" << std::setprecision(12);
    for (const auto& e : j.at("entries")) {
      out << e.at("experiment").get<std::string>() << ',' << e.at("reference").get<double>()
          << ',' << e.at("simulated").get<double>() << ',' << e.at("residual").get<double>()
          << ',' << (e.at("pass").get<bool>() ? "pass" : "fail") << '\n';
    }
    return;
  }
  print_json(out, j);
}

void cmd_convention_search(const std::string& tables, double tolerance,
                           const RunConfig& config, std::ostream& out) {
  const std::string path = tables.empty() ? data_path("reference_programs.json") : tables;
  const auto rows = load_reference_tables(path);
  const auto scores = convention_search(rows, default_v_conventions(), tolerance);
  if (config.format == Format::csv) {
    out << "convention,rows_within_tolerance,rows_within_table_precision,"
           "mean_target_population,consistent\n"
        << std::setprecision(12);
    for (const auto& s : scores) {
      out << s.name << ',' << s.rows_within_tolerance << ',' << s.rows_within_table_precision
          << ',' << s.mean_target_population << ',' << (s.consistent ? "yes" : "no") << '\n';
    }
    return;
  }
  json j = convention_search_to_json(rows, scores, tolerance);
  json consistent = json::array();
  for (const auto& s : scores) {
    if (s.consistent) consistent.push_back(s.name);
  }
  j["consistent_conventions"] = consistent;
  print_json(out, j);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nvforge: two-qubit NV-center compiler and simulator"};
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path,
                    "JSON run configuration (falls back to $NVFORGE_CONFIG)");
    sub->add_option("--mode", flags.mode, "ideal, noisy or pulse")
        ->check(CLI::IsMember({"ideal", "noisy", "pulse"}));
    sub->add_option("--noise", flags.noise, "on or off")->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--seed", flags.seed, "seed for random inputs");
    sub->add_option("--basis", flags.basis, "level labelling: text or caption")
        ->check(CLI::IsMember({"text", "caption"}));
    sub->add_option("--format", flags.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  DecomposeArgs decompose_args;
  auto* decompose_cmd = app.add_subcommand("decompose", "Fifteen parameters of a 4x4 unitary");
  decompose_cmd->add_option("matrix", decompose_args.matrix_path,
                            "JSON 4x4 matrix of [re, im] pairs");
  decompose_cmd->add_flag("--random", decompose_args.random,
                          "decompose a Haar-random unitary drawn from --seed");
  add_common(decompose_cmd);

  std::string synth_params;
  auto* synth_cmd = app.add_subcommand("synthesize", "Unitary and hardware circuit of parameters");
  synth_cmd->add_option("params", synth_params, "FifteenParams JSON")->required();
  add_common(synth_cmd);

  PulsesArgs pulses_args;
  auto* pulses_cmd = app.add_subcommand("pulses", "Compile to a pulse schedule");
  pulses_cmd->add_option("--params", pulses_args.params_path, "FifteenParams JSON");
  pulses_cmd->add_option("--circuit", pulses_args.circuit_path, "hardware circuit JSON");
  pulses_cmd->add_option("--algorithm", pulses_args.algorithm, "ALGORITHM ORACLE")
      ->expected(2);
  pulses_cmd->add_option("-o,--out", pulses_args.out_path, "write the schedule here");
  add_common(pulses_cmd);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run an algorithm and report populations");
  run_cmd->add_option("algorithm", run_args.algorithm, "dj or grover")->required();
  run_cmd->add_option("oracle", run_args.oracle, "constant|balanced or 00|01|10|11")
      ->required();
  run_cmd->add_option("--emit-bars", run_args.emit_bars, "write level,ideal,simulated CSV");
  run_cmd->add_option("--variant", run_args.variant, "I, pi_e, pi_n or combined")
      ->check(CLI::IsMember({"I", "pi_e", "pi_n", "combined"}));
  add_common(run_cmd);

  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit the electron dephasing rate");
  add_common(calibrate_cmd);

  std::string tables_path;
  double search_tolerance = 1e-6;
  auto* search_cmd =
      app.add_subcommand("convention-search", "Score V-block conventions on the table rows");
  search_cmd->add_option("--tables", tables_path, "reference program fixture");
  search_cmd->add_option("--tolerance", search_tolerance, "population error tolerance");
  add_common(search_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    const RunConfig config = resolve_config(flags);
    config.phys.validate();
    if (*decompose_cmd) cmd_decompose(decompose_args, config, out);
    if (*synth_cmd) cmd_synthesize(synth_params, config, out);
    if (*pulses_cmd) cmd_pulses(pulses_args, config, out);
    if (*run_cmd) cmd_run(run_args, config, out);
    if (*calibrate_cmd) cmd_calibrate(config, out);
    if (*search_cmd) cmd_convention_search(tables_path, search_tolerance, config, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace nvforge::cli
