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

#include "nvforge/pulse.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "nvforge/errors.hpp"

namespace nvforge {

namespace {

constexpr double kUsPerNs = 1e-3;

Mat4 hyperfine_hamiltonian(const PhysicalParams& phys) {
  const SpinOps& s = spin_ops();
  return 2.0 * kPi * phys.hyperfine_mhz * kron(s.z, s.z);
}

Mat2 transverse(const SpinOps& s, double phase) {
  return std::cos(phase) * s.x + std::sin(phase) * s.y;
}

double pi_axis_phase(PiAxis axis) { return axis == PiAxis::x ? 0.0 : kPi / 2.0; }

}  // namespace

double PhysicalParams::tau_ns() const {
  if (tau_override_ns) return *tau_override_ns;
  return n_dd / std::abs(hyperfine_mhz) * 1e3;
}

double PhysicalParams::t_uzz_ns() const {
  const double half_period = 1e3 / (2.0 * std::abs(hyperfine_mhz));
  return hyperfine_mhz < 0.0 ? half_period : 3.0 * half_period;
}

double PhysicalParams::pi_pulse_ns() const { return 1e3 / (2.0 * mw_rabi_mhz); }

void PhysicalParams::validate() const {
  if (!(std::abs(hyperfine_mhz) > 0.0) || !std::isfinite(hyperfine_mhz)) {
    throw PreconditionError("hyperfine coupling must be finite and nonzero");
  }
  if (!(mw_rabi_mhz > 0.0) || !std::isfinite(mw_rabi_mhz)) {
    throw PreconditionError("MW Rabi frequency must be positive");
  }
  if (n_dd < 1) throw PreconditionError("n_dd must be a positive integer");
  if (tau_override_ns && !(*tau_override_ns > 0.0)) {
    throw PreconditionError("tau override must be positive");
  }
}

void NoiseModel::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p_e) || !in_unit(p_n)) {
    throw PreconditionError("polarizations must lie in [0, 1]");
  }
  if (!(gamma_e >= 0.0) || !std::isfinite(gamma_e)) {
    throw PreconditionError("gamma_e must be finite and non-negative");
  }
}

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::mw_drive: return "MW_DRIVE";
    case SegmentKind::rf_drive: return "RF_DRIVE";
    case SegmentKind::free: return "FREE";
    case SegmentKind::mw_pi_instant: return "MW_PI_INSTANT";
  }
  throw InternalError("unknown SegmentKind");
}

SegmentKind segment_kind_from_string(const std::string& text) {
  for (SegmentKind kind : {SegmentKind::mw_drive, SegmentKind::rf_drive,
                           SegmentKind::free, SegmentKind::mw_pi_instant}) {
    if (to_string(kind) == text) return kind;
  }
  throw PreconditionError("unknown segment kind '" + text + "'");
}

double PulseSchedule::total_duration_ns() const {
  return std::accumulate(
      segments.begin(), segments.end(), 0.0,
      [](double sum, const PulseSegment& s) { return sum + s.duration_ns; });
}

std::vector<PulseSegment> schedule_electron_gate(double theta, double phi,
                                                 const PhysicalParams& phys,
                                                 double mw_frame) {
  if (theta < 0.0) throw PreconditionError("rotation angle must be >= 0");
  if (theta == 0.0) return {};
  PulseSegment seg;
  seg.kind = SegmentKind::mw_drive;
  seg.rabi_mhz = phys.mw_rabi_mhz;
  seg.phase_rad = wrap_angle(phi + mw_frame);
  seg.duration_ns = theta / (2.0 * kPi * phys.mw_rabi_mhz) * 1e3;
  return {seg};
}

std::vector<PulseSegment> schedule_nuclear_gate(double theta, double phi,
                                                const PhysicalParams& phys,
                                                double rf_frame,
                                                double mw_frame) {
  if (theta < 0.0) throw PreconditionError("rotation angle must be >= 0");
  const double tau = phys.tau_ns();
  const double omega_rad_per_ns = theta / (4.0 * tau);

  PulseSegment rf;
  rf.kind = SegmentKind::rf_drive;
  rf.duration_ns = tau;
  rf.rabi_mhz = omega_rad_per_ns / (2.0 * kPi) * 1e3;
  rf.phase_rad = wrap_angle(phi + rf_frame);

  auto pi_pulse = [&](PiAxis axis) {
    PulseSegment pi;
    pi.axis = axis;
    pi.phase_rad = wrap_angle(pi_axis_phase(axis) + mw_frame);
    if (phys.pi_model == PiPulseModel::instantaneous) {
      pi.kind = SegmentKind::mw_pi_instant;
    } else {
      pi.kind = SegmentKind::mw_drive;
      pi.rabi_mhz = phys.mw_rabi_mhz;
      pi.duration_ns = phys.pi_pulse_ns();
    }
    return pi;
  };

  return {rf, pi_pulse(PiAxis::x), rf, pi_pulse(PiAxis::y),
          rf, pi_pulse(PiAxis::x), rf, pi_pulse(PiAxis::y)};
}

std::vector<PulseSegment> schedule_uzz(const PhysicalParams& phys) {
  PulseSegment seg;
  seg.kind = SegmentKind::free;
  seg.duration_ns = phys.t_uzz_ns();
  return {seg};
}

PulseSchedule apply_virtual_z(double phi_z, Qubit target,
                              PulseSchedule schedule) {
  double& frame =
      target == Qubit::electron ? schedule.mw_frame : schedule.rf_frame;
  frame = wrap_angle(frame - phi_z);
  return schedule;
}

PulseSchedule compile_circuit(const Circuit& circuit,
                              const PhysicalParams& phys) {
  phys.validate();
  PulseSchedule schedule;
  for (const GateOp& op : circuit.ops) {
    switch (op.kind) {
      case GateKind::e_rot:
        schedule.append(
            schedule_electron_gate(op.theta, op.phi, phys, schedule.mw_frame));
        break;
      case GateKind::n_rot:
        schedule.append(schedule_nuclear_gate(op.theta, op.phi, phys,
                                              schedule.rf_frame,
                                              schedule.mw_frame));
        break;
      case GateKind::e_vz:
      case GateKind::n_vz:
        schedule = apply_virtual_z(op.phi, op.target(), std::move(schedule));
        break;
      case GateKind::uzz:
        schedule.append(schedule_uzz(phys));
        break;
      case GateKind::named:
        throw PreconditionError("gate '" + op.name +
                                "' has no pulse realization; decompose it "
                                "into the universal circuit first");
    }
  }
  return schedule;
}

PulseSchedule compile_to_pulses(const FifteenParams& p,
                                const PhysicalParams& phys) {
  return compile_circuit(hardware_circuit(p), phys);
}

Mat4 segment_propagator(const PulseSegment& segment,
                        const PhysicalParams& phys) {
  if (segment.duration_ns < 0.0) {
    throw PreconditionError("segment duration must be non-negative");
  }
  const SpinOps& s = spin_ops();
  const double t_us = segment.duration_ns * kUsPerNs;
  switch (segment.kind) {
    case SegmentKind::free:
      return expm_hermitian(hyperfine_hamiltonian(phys), -t_us);
    case SegmentKind::mw_drive: {
      Mat4 h = 2.0 * kPi * segment.rabi_mhz *
               embed(transverse(s, segment.phase_rad), Qubit::electron);
      if (phys.hyperfine_during_mw) h += hyperfine_hamiltonian(phys);
      return expm_hermitian(h, -t_us);
    }
    case SegmentKind::rf_drive: {
      const Mat4 drive = 2.0 * kPi * segment.rabi_mhz *
                         embed(transverse(s, segment.phase_rad), Qubit::nuclear);
      return expm_hermitian(hyperfine_hamiltonian(phys), -t_us) *
             expm_hermitian(drive, -t_us);
    }
    case SegmentKind::mw_pi_instant:
      if (phys.pi_model != PiPulseModel::instantaneous) {
        throw PreconditionError(
            "MW_PI_INSTANT segment requires the instantaneous pi-pulse model");
      }
      return rot(kPi, segment.phase_rad, Qubit::electron);
  }
  throw InternalError("unknown SegmentKind");
}

namespace {

Mat4 frame_correction(const PulseSchedule& schedule) {
  return rz(-schedule.mw_frame, Qubit::electron) *
         rz(-schedule.rf_frame, Qubit::nuclear);
}

}  // namespace

Mat4 schedule_propagator(const PulseSchedule& schedule,
                         const PhysicalParams& phys) {
  Mat4 u = Mat4::Identity();
  for (const PulseSegment& seg : schedule.segments) {
    u = segment_propagator(seg, phys) * u;
  }
  return frame_correction(schedule) * u;
}

DensityMat4 dephase_electron(const DensityMat4& rho, double gamma_e,
                             double duration_ns) {
  if (gamma_e <= 0.0 || duration_ns <= 0.0) return rho;
  const double keep = std::exp(-gamma_e * duration_ns * kUsPerNs);
  DensityMat4 out = rho;
  out.block<2, 2>(0, 2) *= keep;
  out.block<2, 2>(2, 0) *= keep;
  return out;
}

DensityMat4 simulate_schedule(const PulseSchedule& schedule,
                              const DensityMat4& rho0, const NoiseModel& noise,
                              const PhysicalParams& phys) {
  validate_density_matrix(rho0);
  noise.validate();
  phys.validate();
  DensityMat4 rho = rho0;
  for (const PulseSegment& seg : schedule.segments) {
    const Mat4 u = segment_propagator(seg, phys);
    rho = u * rho * u.adjoint();
    rho = dephase_electron(rho, noise.gamma_e, seg.duration_ns);
  }
  const Mat4 frame = frame_correction(schedule);
  return frame * rho * frame.adjoint();
}

DensityMat4 initial_state(const NoiseModel& noise) {
  noise.validate();
  Eigen::Vector2d electron(noise.p_e, 1.0 - noise.p_e);
  Eigen::Vector2d nuclear(noise.p_n, 1.0 - noise.p_n);
  DensityMat4 rho = DensityMat4::Zero();
  for (int e = 0; e < 2; ++e) {
    for (int n = 0; n < 2; ++n) rho(2 * e + n, 2 * e + n) = electron(e) * nuclear(n);
  }
  return rho;
}

double gate_duration_ns(const GateOp& op, const PhysicalParams& phys) {
  switch (op.kind) {
    case GateKind::e_rot:
      return op.theta / (2.0 * kPi * phys.mw_rabi_mhz) * 1e3;
    case GateKind::n_rot: {
      double total = 4.0 * phys.tau_ns();
      if (phys.pi_model == PiPulseModel::finite) total += 4.0 * phys.pi_pulse_ns();
      return total;
    }
    case GateKind::e_vz:
    case GateKind::n_vz: return 0.0;
    case GateKind::uzz: return phys.t_uzz_ns();
    case GateKind::named:
      throw PreconditionError("gate '" + op.name + "' has no hardware duration");
  }
  throw InternalError("unknown GateKind");
}

double circuit_duration_ns(const Circuit& circuit, const PhysicalParams& phys) {
  double total = 0.0;
  for (const GateOp& op : circuit.ops) total += gate_duration_ns(op, phys);
  return total;
}

DensityMat4 simulate_circuit(const Circuit& circuit, const DensityMat4& rho0,
                             const NoiseModel& noise,
                             const PhysicalParams& phys) {
  validate_density_matrix(rho0);
  noise.validate();
  DensityMat4 rho = rho0;
  for (const GateOp& op : circuit.ops) {
    const Mat4 u = op.unitary();
    rho = u * rho * u.adjoint();
    rho = dephase_electron(rho, noise.gamma_e, gate_duration_ns(op, phys));
  }
  return rho;
}

}  // namespace nvforge
