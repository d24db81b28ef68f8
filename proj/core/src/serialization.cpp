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

#include "nvforge/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nvforge/errors.hpp"

namespace nvforge {

using nlohmann::json;

namespace {

template <typename F>
auto guarded(const char* what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed ") + what + ": " + e.what());
  }
}

double finite_number(const json& j, const char* key) {
  const double x = j.at(key).get<double>();
  if (!std::isfinite(x)) throw PreconditionError(std::string(key) + " must be finite");
  return x;
}

}  // namespace

double round_duration(double ns) { return std::round(ns * 100.0) / 100.0; }

BasisConvention basis_from_string(const std::string& text) {
  if (text == "text") return BasisConvention::text;
  if (text == "caption") return BasisConvention::caption;
  throw PreconditionError("unknown basis convention '" + text + "'");
}

std::string to_string(BasisConvention basis) {
  return basis == BasisConvention::text ? "text" : "caption";
}

json params_to_json(const FifteenParams& p) {
  json j = json::object();
  const auto values = p.to_array();
  const auto& names = fifteen_param_names();
  for (std::size_t k = 0; k < values.size(); ++k) j[names[k]] = values[k];
  return j;
}

FifteenParams params_from_json(const json& j) {
  return guarded("parameters", [&] {
    std::array<double, 15> values{};
    const auto& names = fifteen_param_names();
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = finite_number(j, names[k]);
    return FifteenParams::from_array(values);
  });
}

json matrix_to_json(const Mat4& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat4 matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    auto shape_error = [&](const std::string& detail) {
      return PreconditionError("matrix shape error: expected 4x4 of [re, im], " + detail);
    };
    if (!j.is_array()) throw shape_error("top level is not an array");
    if (j.size() != 4) throw shape_error("got " + std::to_string(j.size()) + " rows");
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      const json& row = j[r];
      if (!row.is_array() || row.size() != 4) {
        throw shape_error("row " + std::to_string(r) + " does not have 4 entries");
      }
      for (int c = 0; c < 4; ++c) {
        const json& z = row[c];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          throw shape_error("entry (" + std::to_string(r) + "," + std::to_string(c) +
                            ") is not an [re, im] pair");
        }
        m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
          throw PreconditionError("matrix entries must be finite");
        }
      }
    }
    return m;
  });
}

json circuit_to_json(const Circuit& circuit) {
  json out = json::array();
  for (const GateOp& op : circuit.ops) {
    json item = {{"kind", to_string(op.kind)}};
    json params = json::object();
    if (op.is_rotation()) {
      params["theta"] = op.theta;
      params["phi"] = op.phi;
    } else if (op.is_virtual_z()) {
      params["phi_z"] = op.phi;
    } else if (op.kind == GateKind::named) {
      params["name"] = op.name;
      params["matrix"] = matrix_to_json(op.matrix);
    }
    item["params"] = params;
    out.push_back(item);
  }
  return out;
}

Circuit circuit_from_json(const json& j) {
  return guarded("circuit", [&] {
    if (!j.is_array()) throw PreconditionError("circuit must be a JSON array");
    Circuit circuit;
    for (const json& item : j) {
      const GateKind kind = gate_kind_from_string(item.at("kind").get<std::string>());
      const json params = item.value("params", json::object());
      switch (kind) {
        case GateKind::e_rot:
        case GateKind::n_rot:
          circuit.add(GateOp::rotation(
              kind == GateKind::e_rot ? Qubit::electron : Qubit::nuclear,
              finite_number(params, "theta"), finite_number(params, "phi")));
          break;
        case GateKind::e_vz:
        case GateKind::n_vz:
          circuit.add(GateOp::virtual_z(
              kind == GateKind::e_vz ? Qubit::electron : Qubit::nuclear,
              finite_number(params, "phi_z")));
          break;
        case GateKind::uzz: circuit.add(GateOp::entangler()); break;
        case GateKind::named:
          circuit.add(GateOp::named(params.at("name").get<std::string>(),
                                    matrix_from_json(params.at("matrix"))));
          break;
      }
    }
    return circuit;
  });
}

json schedule_to_json(const PulseSchedule& schedule) {
  json out = json::array();
  for (const PulseSegment& s : schedule.segments) {
    json item = {{"kind", to_string(s.kind)},
                 {"duration_ns", round_duration(s.duration_ns)},
                 {"rabi_MHz", s.rabi_mhz},
                 {"phase_rad", s.phase_rad}};
    if (s.kind == SegmentKind::mw_pi_instant) item["axis"] = s.axis == PiAxis::x ? "x" : "y";
    out.push_back(item);
  }
  return out;
}

PulseSchedule schedule_from_json(const json& j) {
  return guarded("schedule", [&] {
    if (!j.is_array()) throw PreconditionError("schedule must be a JSON array");
    PulseSchedule schedule;
    for (const json& item : j) {
      PulseSegment s;
      s.kind = segment_kind_from_string(item.at("kind").get<std::string>());
      s.duration_ns = finite_number(item, "duration_ns");
      s.rabi_mhz = finite_number(item, "rabi_MHz");
      s.phase_rad = finite_number(item, "phase_rad");
      if (s.duration_ns < 0.0) throw PreconditionError("segment durations must be >= 0");
      if (s.kind == SegmentKind::mw_pi_instant) {
        const std::string axis = item.value("axis", std::string("x"));
        if (axis != "x" && axis != "y") throw PreconditionError("pi axis must be x or y");
        s.axis = axis == "x" ? PiAxis::x : PiAxis::y;
      }
      schedule.segments.push_back(s);
    }
    return schedule;
  });
}

std::string schedule_to_csv(const PulseSchedule& schedule) {
  std::string out = "index,kind,duration_ns,rabi_MHz,phase_rad,axis\n";
  char line[160];
  int index = 0;
  for (const PulseSegment& s : schedule.segments) {
    const char* axis = s.kind == SegmentKind::mw_pi_instant
                           ? (s.axis == PiAxis::x ? "x" : "y")
                           : "";
    std::snprintf(line, sizeof line, "%d,%s,%.2f,%.12g,%.12g,%s\n", index++,
                  to_string(s.kind).c_str(), round_duration(s.duration_ns),
                  s.rabi_mhz, s.phase_rad, axis);
    out += line;
  }
  return out;
}

json report_to_json(const PopulationReport& r) {
  return {{"algorithm", r.algorithm},
          {"oracle", r.oracle},
          {"mode", to_string(r.mode)},
          {"basis", to_string(r.basis)},
          {"measurement_variant", to_string(r.variant)},
          {"P", r.populations},
          {"target_state", r.target_label},
          {"success", r.success},
          {"duration_ns", round_duration(r.duration_ns)},
          {"params", params_to_json(r.params)}};
}

std::string bars_csv(const PopulationReport& ideal,
                     const PopulationReport& simulated) {
  std::string out = "level,ideal,simulated\n";
  char line[96];
  for (int k = 0; k < 4; ++k) {
    std::snprintf(line, sizeof line, "P%d,%.12g,%.12g\n", k + 1, ideal.populations[k],
                  simulated.populations[k]);
    out += line;
  }
  return out;
}

json calibration_to_json(const CalibrationResult& result) {
  json entries = json::array();
  for (const CalibrationEntry& e : result.entries) {
    entries.push_back({{"experiment", e.name},
                       {"reference", e.reference},
                       {"simulated", e.simulated},
                       {"residual", e.residual},
                       {"pass", e.pass}});
  }
  return {{"gamma_e_per_us", result.gamma_e},
          {"sum_squared_error", result.sum_squared_error},
          {"tolerance", result.tolerance},
          {"grid_points", result.grid_points},
          {"all_pass", result.all_pass},
          {"entries", entries}};
}

json convention_search_to_json(const std::vector<TableRow>& rows,
                               const std::vector<ConventionScore>& scores,
                               double tolerance) {
  json out = json::array();
  for (const ConventionScore& s : scores) {
    json per_row = json::array();
    for (std::size_t k = 0; k < s.rows.size(); ++k) {
      const TableRow& row = rows.at(k);
      per_row.push_back({{"algorithm", row.algorithm == Algorithm::dj ? "DJ" : "Grover"},
                         {"oracle", row.oracle},
                         {"meas", to_string(row.meas)},
                         {"expected_index", s.rows[k].expected_index},
                         {"populations", s.rows[k].populations},
                         {"error", s.rows[k].error}});
    }
    out.push_back({{"convention", s.name},
                   {"description", s.description},
                   {"rows_within_tolerance", s.rows_within_tolerance},
                   {"rows_within_table_precision", s.rows_within_table_precision},
                   {"mean_target_population", s.mean_target_population},
                   {"consistent", s.consistent},
                   {"rows", per_row}});
  }
  return {{"tolerance", tolerance},
          {"table_precision_tolerance", kTablePrecisionTolerance},
          {"row_count", rows.size()},
          {"conventions", out}};
}

json physical_params_to_json(const PhysicalParams& phys) {
  json j = {{"hyperfine_MHz", phys.hyperfine_mhz},
            {"mw_rabi_MHz", phys.mw_rabi_mhz},
            {"n_dd", phys.n_dd},
            {"pi_model", phys.pi_model == PiPulseModel::instantaneous ? "instantaneous"
                                                                      : "finite"},
            {"hyperfine_during_mw", phys.hyperfine_during_mw}};
  if (phys.tau_override_ns) j["tau_override_ns"] = *phys.tau_override_ns;
  return j;
}

PhysicalParams physical_params_from_json(const json& j, PhysicalParams phys) {
  return guarded("physical parameters", [&] {
    if (!j.is_object()) throw PreconditionError("physical parameters must be an object");
    if (j.contains("hyperfine_MHz")) phys.hyperfine_mhz = finite_number(j, "hyperfine_MHz");
    if (j.contains("mw_rabi_MHz")) phys.mw_rabi_mhz = finite_number(j, "mw_rabi_MHz");
    if (j.contains("n_dd")) phys.n_dd = j.at("n_dd").get<int>();
    if (j.contains("pi_model")) {
      const std::string m = j.at("pi_model").get<std::string>();
      if (m == "instantaneous") {
        phys.pi_model = PiPulseModel::instantaneous;
      } else if (m == "finite") {
        phys.pi_model = PiPulseModel::finite;
      } else {
        throw PreconditionError("pi_model must be instantaneous or finite");
      }
    }
    if (j.contains("hyperfine_during_mw")) {
      phys.hyperfine_during_mw = j.at("hyperfine_during_mw").get<bool>();
    }
    if (j.contains("tau_override_ns")) phys.tau_override_ns = finite_number(j, "tau_override_ns");
    phys.validate();
    return phys;
  });
}

json noise_to_json(const NoiseModel& noise) {
  return {{"p_e", noise.p_e}, {"p_n", noise.p_n}, {"gamma_e_per_us", noise.gamma_e}};
}

NoiseModel noise_from_json(const json& j, NoiseModel noise) {
  return guarded("noise model", [&] {
    if (!j.is_object()) throw PreconditionError("noise model must be an object");
    if (j.contains("p_e")) noise.p_e = finite_number(j, "p_e");
    if (j.contains("p_n")) noise.p_n = finite_number(j, "p_n");
    if (j.contains("gamma_e_per_us")) noise.gamma_e = finite_number(j, "gamma_e_per_us");
    noise.validate();
    return noise;
  });
}

}  // namespace nvforge
