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

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nvforge/kak.hpp"
#include "nvforge/pulse.hpp"
#include "nvforge/spin_model.hpp"

namespace nvforge {

enum class Mode { ideal, noisy, pulse };
enum class MeasurementVariant { identity, pi_e, pi_n, combined };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);
std::string to_string(MeasurementVariant variant);
MeasurementVariant variant_from_string(const std::string& text);

using Populations = std::array<double, 4>;

/// Populations in label order |1>..|4> and the derived success probability.
struct PopulationReport {
  std::string algorithm;
  std::string oracle;
  Mode mode = Mode::ideal;
  BasisConvention basis = BasisConvention::text;
  Populations populations{};
  int target_label = 1;
  double success = 0.0;
  MeasurementVariant variant = MeasurementVariant::combined;
  double duration_ns = 0.0;
  FifteenParams params;
};

struct RunOptions {
  Mode mode = Mode::ideal;
  NoiseModel noise;
  PhysicalParams phys;
  BasisConvention basis = BasisConvention::text;
};

/// {u, rot(pi,0,electron) u, rot(pi,0,nuclear) u}.
std::array<Mat4, 3> measurement_variants(const Mat4& u);

/// Tensor index that basis state `index` is moved to by a variant's flip.
int flipped_index(MeasurementVariant variant, int index);

/// Diagonal of rho reported in label order of `basis`.
Populations extract_populations(const DensityMat4& rho,
                                BasisConvention basis = BasisConvention::text);

/// One measurement variant of a circuit, compiled once and evaluable for any
/// noise model. Compilation follows the hardware path: the full unitary is
/// decomposed into fifteen parameters and lowered to gates and pulses.
struct CompiledVariant {
  MeasurementVariant variant = MeasurementVariant::identity;
  Mat4 unitary;
  KakDecomposition decomposition;
  Circuit hardware;
  PulseSchedule schedule;
  int target_index = 0;  // tensor index
};

struct ExperimentPlan {
  std::string algorithm;
  std::string oracle;
  std::array<CompiledVariant, 3> variants;
};

ExperimentPlan plan_experiment(std::string algorithm, std::string oracle,
                               const Circuit& circuit, int target_index,
                               const PhysicalParams& phys);

ExperimentPlan plan_dj(DjOracle oracle, const PhysicalParams& phys);
ExperimentPlan plan_grover(int i, int j, const PhysicalParams& phys);

/// Final state of one variant under `options`.
DensityMat4 run_variant(const CompiledVariant& variant,
                        const RunOptions& options);

/// Single-variant report.
PopulationReport evaluate_variant(const ExperimentPlan& plan,
                                  MeasurementVariant variant,
                                  const RunOptions& options);

/// Averages the three variants after undoing each flip, so success is the
/// mean target population over {I, pi_e, pi_n}.
PopulationReport evaluate_plan(const ExperimentPlan& plan,
                               const RunOptions& options);

PopulationReport run_dj(DjOracle oracle, const RunOptions& options);
PopulationReport run_grover(int i, int j, const RunOptions& options);

// ---------------------------------------------------------------------------
// Photoluminescence inversion

struct PlInversion {
  Populations populations{};
  double condition_number = 0.0;
};

/// Solves L_v = sum_i brightness_i P_{flip_v(i)} for v in {I, pi_e, pi_n}
/// together with sum P = 1. Inputs are in tensor order. Exact solve only;
/// a singular design matrix raises PreconditionError naming the pattern.
PlInversion pl_inversion(const std::array<double, 3>& signals,
                         const std::array<double, 4>& brightness);

/// Forward model matching pl_inversion.
std::array<double, 3> pl_signals(const Populations& populations,
                                 const std::array<double, 4>& brightness);

// ---------------------------------------------------------------------------
// Reference parameter tables and V-block conventions

enum class Algorithm { dj, grover };

struct TableRow {
  Algorithm algorithm = Algorithm::dj;
  int oracle = 1;  // U_1.. as listed
  MeasurementVariant meas = MeasurementVariant::identity;
  FifteenParams params;
};

/// Tensor index of the state the row's program should produce from |1>.
int expected_index(const TableRow& row);

/// FNV-1a 64 over the rows' canonical text (three decimals per number).
std::uint64_t table_checksum(const std::vector<TableRow>& rows);

/// Parses the JSON fixture and verifies its recorded checksum.
/// Throws PreconditionError on malformed data or a checksum mismatch.
std::vector<TableRow> load_reference_tables(const std::string& path);

struct VConvention {
  std::string name;
  std::string description;
  std::function<Mat4(double, double, double)> block;
};

/// Candidate readings of the V block: plain V, V with a UZZ before or
/// after, UZZ-conjugated V, and V sandwiched between two UZZ.
std::vector<VConvention> default_v_conventions();

/// (C (x) D) * block(alpha, beta, delta) * (A (x) B).
Mat4 row_unitary(const TableRow& row, const VConvention& convention);

struct RowScore {
  Populations populations{};  // tensor order
  int expected_index = 0;
  double error = 0.0;  // max |P - one_hot(expected)|
};

struct ConventionScore {
  std::string name;
  std::string description;
  std::vector<RowScore> rows;
  int rows_within_tolerance = 0;
  int rows_within_table_precision = 0;
  double mean_target_population = 0.0;
  bool consistent = false;  // every row within tolerance
};

inline constexpr double kTablePrecisionTolerance = 1e-2;

std::vector<ConventionScore> convention_search(
    const std::vector<TableRow>& rows,
    const std::vector<VConvention>& conventions, double tolerance = 1e-6);

// ---------------------------------------------------------------------------
// Dephasing calibration

struct CalibrationEntry {
  std::string name;
  double reference = 0.0;
  double simulated = 0.0;
  double residual = 0.0;  // simulated - reference
  bool pass = false;
};

struct CalibrationResult {
  double gamma_e = 0.0;
  double sum_squared_error = 0.0;
  double tolerance = 0.05;
  std::vector<CalibrationEntry> entries;
  bool all_pass = false;
  int grid_points = 0;
};

/// Reported average success probabilities, in the order
/// DJ constant, DJ balanced, Grover 00, 01, 10, 11.
const std::array<double, 6>& reference_success();

struct CalibrationSettings {
  Mode mode = Mode::noisy;
  double gamma_max = 0.2;  // 1/us
  int coarse_points = 41;
  int refine_levels = 3;
  int refine_points = 21;
  double tolerance = 0.05;
};

/// Six success probabilities at the given noise model.
std::array<double, 6> calibration_successes(
    const std::vector<ExperimentPlan>& plans, const RunOptions& options);

std::vector<ExperimentPlan> calibration_plans(const PhysicalParams& phys);

/// Coarse-to-fine scan of gamma_e minimizing squared error against
/// reference_success(). Polarizations are taken from `base`.
CalibrationResult calibrate_dephasing(const NoiseModel& base,
                                      const PhysicalParams& phys,
                                      const CalibrationSettings& settings = {});

}  // namespace nvforge
