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

#include <optional>
#include <string>
#include <vector>

#include "nvforge/kak.hpp"
#include "nvforge/linalg.hpp"
#include "nvforge/spin_model.hpp"

namespace nvforge {

enum class PiPulseModel { instantaneous, finite };

/// Rotating-frame constants of the electron/14N register.
///
/// Frequencies are ordinary frequencies in MHz and times are in ns. The
/// hyperfine Hamiltonian is 2 pi A Sz Iz in rad/us, so one free evolution
/// period of the conditional phase is 1/|A| and the decoupling interval is
/// tau = n_dd / |A|.
struct PhysicalParams {
  double hyperfine_mhz = -2.16;
  double mw_rabi_mhz = 40.0;
  int n_dd = 6;
  PiPulseModel pi_model = PiPulseModel::instantaneous;
  /// Error-budget switch: false drops the hyperfine term during MW drive.
  bool hyperfine_during_mw = true;
  /// Replaces the derived tau. Only for studying a mistuned decoupling.
  std::optional<double> tau_override_ns;

  double tau_ns() const;
  /// Free-evolution time giving exactly uzz(): 1/(2|A|) for A < 0,
  /// 3/(2|A|) for A > 0.
  double t_uzz_ns() const;
  double pi_pulse_ns() const;
  /// Throws PreconditionError on non-physical values.
  void validate() const;
};

/// Initial polarization and electron dephasing.
/// Electron dephasing rate (1/us) from calibrate_dephasing in noisy mode with
/// p_e = 0.95, p_n = 0.98. A fitted knob, not a measured T2.
inline constexpr double kCalibratedGammaE = 0.01454;

struct NoiseModel {
  double p_e = 0.95;
  double p_n = 0.98;
  double gamma_e = 0.0;  // 1/us; 0 disables dephasing

  static NoiseModel noiseless() { return {1.0, 1.0, 0.0}; }
  static NoiseModel calibrated() { return {0.95, 0.98, kCalibratedGammaE}; }
  void validate() const;
};

enum class SegmentKind { mw_drive, rf_drive, free, mw_pi_instant };
enum class PiAxis { x, y };

std::string to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(const std::string& text);

struct PulseSegment {
  SegmentKind kind = SegmentKind::free;
  double duration_ns = 0.0;
  double rabi_mhz = 0.0;
  double phase_rad = 0.0;
  PiAxis axis = PiAxis::x;  // mw_pi_instant only
};

/// Timed segments plus the running virtual frames. A drive on a channel is
/// emitted with phase = requested phase + that channel's frame.
struct PulseSchedule {
  std::vector<PulseSegment> segments;
  double mw_frame = 0.0;
  double rf_frame = 0.0;

  double total_duration_ns() const;
  void append(const std::vector<PulseSegment>& more) {
    segments.insert(segments.end(), more.begin(), more.end());
  }
};

/// One MW segment of length theta / (2 pi f1); empty for theta = 0.
std::vector<PulseSegment> schedule_electron_gate(double theta, double phi,
                                                 const PhysicalParams& phys,
                                                 double mw_frame = 0.0);

/// Decoherence-protected nuclear rotation:
///   RF(tau) piX RF(tau) piY RF(tau) piX RF(tau) piY
/// with angular RF Rabi rate theta / (4 tau). The XY-4 pulses are
/// instantaneous or 12.5 ns MW segments depending on phys.pi_model.
std::vector<PulseSegment> schedule_nuclear_gate(double theta, double phi,
                                                const PhysicalParams& phys,
                                                double rf_frame = 0.0,
                                                double mw_frame = 0.0);

/// A single free-evolution segment realizing uzz().
std::vector<PulseSegment> schedule_uzz(const PhysicalParams& phys);

/// Virtual rz(phi_z) on target: no segment, later drive phases on that
/// channel shift by -phi_z.
PulseSchedule apply_virtual_z(double phi_z, Qubit target,
                              PulseSchedule schedule);

/// Lowers rotations, virtual-Z and UZZ. Named gates have no pulse form and
/// raise PreconditionError.
PulseSchedule compile_circuit(const Circuit& circuit,
                              const PhysicalParams& phys);

/// compile_circuit(hardware_circuit(p)).
PulseSchedule compile_to_pulses(const FifteenParams& p,
                                const PhysicalParams& phys);

/// Exact propagator of one piecewise-constant segment.
///
/// RF drive is a two-tone, electron-state-independent nuclear drive locked to
/// the hyperfine-split transitions with its phase referenced to the segment
/// start; in the hyperfine interaction frame it is static, giving
///   U = exp(-i H_hf t) exp(-i 2 pi f t (cos(phase) Ix + sin(phase) Iy)).
Mat4 segment_propagator(const PulseSegment& segment,
                        const PhysicalParams& phys);

/// Product of segment propagators followed by the residual virtual frame
/// rz(-mw_frame, electron) rz(-rf_frame, nuclear), i.e. the logical unitary.
Mat4 schedule_propagator(const PulseSchedule& schedule,
                         const PhysicalParams& phys);

/// Phase damping on the electron: electron coherences scale by
/// exp(-gamma_e t). Kraus pair sqrt((1+e)/2) I, sqrt((1-e)/2) Z (x) I.
DensityMat4 dephase_electron(const DensityMat4& rho, double gamma_e,
                             double duration_ns);

/// Evolves rho0 segment by segment, dephasing after each segment, and
/// applies the residual virtual frame at the end.
/// Throws PreconditionError for an invalid rho0 or negative durations.
DensityMat4 simulate_schedule(const PulseSchedule& schedule,
                              const DensityMat4& rho0, const NoiseModel& noise,
                              const PhysicalParams& phys);

/// Product state of the imperfectly polarized electron and nucleus.
DensityMat4 initial_state(const NoiseModel& noise);

/// Wall-clock length of a hardware gate. Named gates raise
/// PreconditionError.
double gate_duration_ns(const GateOp& op, const PhysicalParams& phys);

double circuit_duration_ns(const Circuit& circuit, const PhysicalParams& phys);

/// Gate-level noisy execution: each gate's ideal unitary followed by
/// electron dephasing over the gate's duration.
DensityMat4 simulate_circuit(const Circuit& circuit, const DensityMat4& rho0,
                             const NoiseModel& noise,
                             const PhysicalParams& phys);

}  // namespace nvforge
