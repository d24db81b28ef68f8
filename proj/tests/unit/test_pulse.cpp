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

#include <gtest/gtest.h>

#include "nvforge/errors.hpp"
#include "nvforge/pulse.hpp"
#include "test_support.hpp"

namespace nvforge {
namespace {

using testing::max_abs;

DensityMat4 pure(const Vec4& psi) { return psi * psi.adjoint(); }

/// Hyperfine free evolution built from the Hamiltonian, independently of the
/// library's propagators: exp(-i 2 pi A t SzIz).
Mat4 free_oracle(double a_mhz, double t_ns) {
  const Mat4 sziz = kron(spin_ops().z, spin_ops().z);
  return testing::taylor_expm<Mat4>(-kI * 2.0 * kPi * a_mhz * t_ns * 1e-3 * sziz);
}

TEST(PhysicalParams, DerivedTimings) {
  const PhysicalParams phys;
  EXPECT_NEAR(phys.tau_ns(), 2777.8, 0.1);
  EXPECT_NEAR(phys.t_uzz_ns(), 231.48, 0.01);
  EXPECT_NEAR(phys.t_uzz_ns(), 231.5, 0.1);
  EXPECT_NEAR(phys.pi_pulse_ns(), 12.5, 1e-12);
  PhysicalParams bad;
  bad.hyperfine_mhz = 0.0;
  EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(ElectronGate, Durations) {
  const PhysicalParams phys;
  const auto pi = schedule_electron_gate(kPi, 0.0, phys);
  ASSERT_EQ(pi.size(), 1u);
  EXPECT_EQ(pi[0].kind, SegmentKind::mw_drive);
  EXPECT_NEAR(pi[0].duration_ns, 12.5, 1e-12);
  EXPECT_NEAR(pi[0].rabi_mhz, 40.0, 0.0);
  EXPECT_TRUE(schedule_electron_gate(0.0, 1.0, phys).empty());
  EXPECT_NEAR(schedule_electron_gate(2 * kPi, 0.0, phys)[0].duration_ns, 25.0, 1e-12);
  EXPECT_NEAR(schedule_electron_gate(kPi, 0.3, phys, 0.5)[0].phase_rad, 0.8, 1e-15);
  EXPECT_THROW(schedule_electron_gate(-1.0, 0.0, phys), PreconditionError);
}

TEST(NuclearGate, StructureAndRate) {
  const PhysicalParams phys;
  const auto segs = schedule_nuclear_gate(kPi, 0.0, phys);
  ASSERT_EQ(segs.size(), 8u);
  const std::array<PiAxis, 4> axes = {PiAxis::x, PiAxis::y, PiAxis::x, PiAxis::y};
  double total = 0.0;
  for (int k = 0; k < 8; ++k) {
    total += segs[k].duration_ns;
    if (k % 2 == 0) {
      EXPECT_EQ(segs[k].kind, SegmentKind::rf_drive);
      EXPECT_NEAR(segs[k].duration_ns, phys.tau_ns(), 1e-9);
    } else {
      EXPECT_EQ(segs[k].kind, SegmentKind::mw_pi_instant);
      EXPECT_EQ(segs[k].axis, axes[k / 2]);
    }
  }
  EXPECT_NEAR(total, 11111.1, 0.2);
  // omega = theta / (4 tau) = 2.827e-4 rad/ns, i.e. 45.0 kHz.
  const double omega_rad_per_ns = 2.0 * kPi * segs[0].rabi_mhz * 1e-3;
  EXPECT_NEAR(omega_rad_per_ns, 2.827e-4, 1e-7);
  EXPECT_NEAR(segs[0].rabi_mhz * 1e3, 45.0, 0.01);

  PhysicalParams finite = phys;
  finite.pi_model = PiPulseModel::finite;
  double finite_total = 0.0;
  for (const auto& s : schedule_nuclear_gate(kPi, 0.0, finite)) finite_total += s.duration_ns;
  EXPECT_NEAR(finite_total, 4 * phys.tau_ns() + 4 * 12.5, 1e-9);
}

TEST(NuclearGate, ZeroAngleIsIdentityOnNucleus) {
  const PhysicalParams phys;
  PulseSchedule s;
  s.append(schedule_nuclear_gate(0.0, 0.0, phys));
  EXPECT_NEAR(fidelity_upto_phase(schedule_propagator(s, phys), Mat4::Identity()), 1.0, 1e-8);
}

TEST(NuclearGate, MatchesTargetRotation) {
  const PhysicalParams phys;
  auto rng = testing::rng_for(2);
  std::uniform_real_distribution<double> a(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = a(rng), phi = a(rng) - kPi;
    PulseSchedule s;
    s.append(schedule_nuclear_gate(theta, phi, phys));
    EXPECT_GE(fidelity_upto_phase(schedule_propagator(s, phys), rot(theta, phi, Qubit::nuclear)),
              1 - 1e-9);
  }
}

TEST(NuclearGate, IndependentOfElectronState) {
  const PhysicalParams phys;
  for (double theta : {kPi / 2, kPi, 2.2}) {
    PulseSchedule s;
    s.append(schedule_nuclear_gate(theta, 0.4, phys));
    const Mat4 u = schedule_propagator(s, phys);
    // Electron-conditioned nuclear blocks; XY-4 returns the electron, so the
    // off-diagonal blocks vanish.
    const Mat2 b0 = u.block<2, 2>(0, 0);
    const Mat2 b1 = u.block<2, 2>(2, 2);
    EXPECT_LE((u.block<2, 2>(0, 2).cwiseAbs().maxCoeff()), 1e-9);
    EXPECT_GE(fidelity_upto_phase(b0, b1), 1 - 1e-6);
  }
}

TEST(NuclearGate, MistunedTauBreaksIndependence) {
  PhysicalParams phys;
  phys.tau_override_ns = phys.tau_ns() * 1.03;
  PulseSchedule s;
  s.append(schedule_nuclear_gate(kPi, 0.0, phys));
  const Mat4 u = schedule_propagator(s, phys);
  EXPECT_LT(fidelity_upto_phase(Mat2(u.block<2, 2>(0, 0)), Mat2(u.block<2, 2>(2, 2))), 1 - 1e-3);
}

TEST(Uzz, FreeSegment) {
  const PhysicalParams phys;
  const auto segs = schedule_uzz(phys);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].kind, SegmentKind::free);
  EXPECT_NEAR(segs[0].duration_ns, 231.5, 0.1);
  const Mat4 u = segment_propagator(segs[0], phys);
  EXPECT_GE(fidelity_upto_phase(u, uzz()), 1 - 1e-10);
  EXPECT_LE(max_abs(u - free_oracle(phys.hyperfine_mhz, segs[0].duration_ns)), 1e-12);
  PulseSegment twice = segs[0];
  twice.duration_ns *= 2;
  EXPECT_GE(fidelity_upto_phase(segment_propagator(twice, phys), uzz() * uzz()), 1 - 1e-10);
}

TEST(Uzz, PositiveCouplingUsesThreeHalfPeriods) {
  PhysicalParams phys;
  phys.hyperfine_mhz = 2.16;
  const auto segs = schedule_uzz(phys);
  EXPECT_GE(fidelity_upto_phase(segment_propagator(segs[0], phys), uzz()), 1 - 1e-10);
}

TEST(VirtualZ, FrameEquivalence) {
  const PhysicalParams phys;
  PhysicalParams no_hf = phys;
  no_hf.hyperfine_during_mw = false;
  // rz(-pi/2), X(pi/2), rz(pi/2) in time order is a Y(pi/2) rotation.
  Circuit with_vz;
  with_vz.add(GateOp::virtual_z(Qubit::electron, -kPi / 2))
      .add(GateOp::rotation(Qubit::electron, kPi / 2, 0.0))
      .add(GateOp::virtual_z(Qubit::electron, kPi / 2));
  Circuit y;
  y.add(GateOp::rotation(Qubit::electron, kPi / 2, kPi / 2));
  EXPECT_LE(max_abs(schedule_propagator(compile_circuit(with_vz, no_hf), no_hf) -
                    schedule_propagator(compile_circuit(y, no_hf), no_hf)),
            1e-9);

  PulseSchedule s;
  EXPECT_EQ(apply_virtual_z(0.0, Qubit::electron, s).mw_frame, 0.0);
  s = apply_virtual_z(0.3, Qubit::nuclear, s);
  s = apply_virtual_z(0.5, Qubit::nuclear, s);
  EXPECT_NEAR(s.rf_frame, -0.8, 1e-15);
  EXPECT_TRUE(s.segments.empty());
}

TEST(VirtualZ, CompiledCircuitMatchesExplicitRz) {
  PhysicalParams phys;
  phys.hyperfine_during_mw = false;
  auto rng = testing::rng_for(44);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c;
    for (int k = 0; k < 6; ++k) {
      const Qubit q = k % 2 ? Qubit::nuclear : Qubit::electron;
      c.add(GateOp::virtual_z(q, a(rng)));
      c.add(GateOp::rotation(q, std::abs(a(rng)), a(rng)));
      if (k == 2) c.add(GateOp::entangler());
    }
    EXPECT_GE(fidelity_upto_phase(schedule_propagator(compile_circuit(c, phys), phys),
                                  circuit_unitary(c)),
              1 - 1e-9);
  }
}

TEST(CompileToPulses, Anchors) {
  const PhysicalParams phys;
  const PulseSchedule empty = compile_to_pulses(FifteenParams{}, phys);
  EXPECT_TRUE(empty.segments.empty());
  EXPECT_EQ(empty.total_duration_ns(), 0.0);

  const FifteenParams p = decompose(cnot());
  EXPECT_GE(fidelity_upto_phase(schedule_propagator(compile_to_pulses(p, phys), phys), cnot()),
            0.995);
  PhysicalParams zeroed = phys;
  zeroed.hyperfine_during_mw = false;
  EXPECT_GE(fidelity_upto_phase(schedule_propagator(compile_to_pulses(p, zeroed), zeroed), cnot()),
            1 - 1e-8);
  Circuit named;
  named.add(GateOp::named("CNOT", cnot()));
  EXPECT_THROW(compile_circuit(named, phys), PreconditionError);
}

TEST(CompileToPulses, DurationIgnoresPhases) {
  const PhysicalParams phys;
  auto rng = testing::rng_for(91);
  const FifteenParams p = decompose(haar_unitary4(rng));
  FifteenParams q = p;
  for (LocalGateParams* g : {&q.a, &q.b, &q.c, &q.d}) {
    g->phi += 0.77;
    g->phi_z -= 1.3;
  }
  EXPECT_NEAR(compile_to_pulses(p, phys).total_duration_ns(),
              compile_to_pulses(q, phys).total_duration_ns(), 1e-9);
  EXPECT_NEAR(compile_to_pulses(p, phys).total_duration_ns(),
              circuit_duration_ns(hardware_circuit(p), phys), 1e-6);
}

TEST(SimulateSchedule, Anchors) {
  const PhysicalParams phys;
  const DensityMat4 rho0 = pure(testing::basis_state(0));
  EXPECT_LE(max_abs(simulate_schedule(PulseSchedule{}, rho0, NoiseModel::noiseless(), phys) - rho0),
            0.0);

  PulseSchedule pi;
  pi.append(schedule_electron_gate(kPi, 0.0, phys));
  const DensityMat4 out = simulate_schedule(pi, rho0, NoiseModel::noiseless(), phys);
  EXPECT_GE(out(2, 2).real(), 0.99);
  EXPECT_LT(out(2, 2).real(), 1.0 - 1e-6);  // the hyperfine detuning is visible

  Vec4 sup = Vec4::Constant(0.5);
  sup(1) *= kI;
  PulseSchedule free;
  free.append(schedule_uzz(phys));
  const DensityMat4 evolved = simulate_schedule(free, pure(sup), NoiseModel::noiseless(), phys);
  const Vec4 want = uzz() * sup;
  EXPECT_LE(max_abs(evolved - pure(want)), 1e-10);
}

TEST(SimulateSchedule, PurityPreservedWithoutNoiseAndDecaysWithIt) {
  const PhysicalParams phys;
  auto rng = testing::rng_for(12);
  const FifteenParams p = decompose(haar_unitary4(rng));
  const PulseSchedule sched = compile_to_pulses(p, phys);
  const DensityMat4 rho0 = initial_state(NoiseModel{});
  const DensityMat4 clean = simulate_schedule(sched, rho0, NoiseModel::noiseless(), phys);
  EXPECT_NEAR(purity(clean), purity(rho0), 1e-10);
  EXPECT_NEAR(clean.trace().real(), 1.0, 1e-12);

  NoiseModel noisy;
  noisy.gamma_e = 0.05;
  DensityMat4 rho = pure(haar_unitary4(rng) * testing::basis_state(0));
  double last = purity(rho);
  for (const PulseSegment& seg : sched.segments) {
    PulseSchedule one;
    one.segments.push_back(seg);
    rho = simulate_schedule(one, rho, noisy, phys);
    const double now = purity(rho);
    ASSERT_LE(now, last + 1e-12);
    last = now;
  }
}

TEST(Dephasing, ScalesElectronCoherences) {
  DensityMat4 rho = DensityMat4::Constant(0.25);
  const DensityMat4 out = dephase_electron(rho, 0.1, 2000.0);
  const double keep = std::exp(-0.2);
  EXPECT_NEAR(out(0, 2).real(), 0.25 * keep, 1e-15);
  EXPECT_NEAR(out(1, 3).real(), 0.25 * keep, 1e-15);
  EXPECT_NEAR(out(0, 1).real(), 0.25, 0.0);  // nuclear coherence untouched
  EXPECT_NEAR(out(2, 3).real(), 0.25, 0.0);
  EXPECT_LE(max_abs(dephase_electron(rho, 0.0, 1e6) - rho), 0.0);
}

TEST(InitialState, Anchors) {
  const DensityMat4 ideal = initial_state(NoiseModel::noiseless());
  EXPECT_LE(max_abs(ideal - pure(testing::basis_state(0))), 0.0);
  const DensityMat4 def = initial_state(NoiseModel{});
  const std::array<double, 4> want = {0.931, 0.019, 0.049, 0.001};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(def(k, k).real(), want[k], 1e-12);
  auto rng = testing::rng_for(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_NEAR(initial_state({u(rng), u(rng), 0.0}).trace().real(), 1.0, 1e-14);
  }
  EXPECT_THROW(initial_state({1.2, 0.5, 0.0}), PreconditionError);
  EXPECT_THROW(initial_state({0.9, 0.5, -1.0}), PreconditionError);
}

TEST(SegmentPropagator, Validation) {
  const PhysicalParams phys;
  PulseSegment neg;
  neg.duration_ns = -1.0;
  EXPECT_THROW(segment_propagator(neg, phys), PreconditionError);
  PhysicalParams finite = phys;
  finite.pi_model = PiPulseModel::finite;
  PulseSegment instant;
  instant.kind = SegmentKind::mw_pi_instant;
  EXPECT_THROW(segment_propagator(instant, finite), PreconditionError);
  EXPECT_EQ(segment_kind_from_string(to_string(SegmentKind::rf_drive)), SegmentKind::rf_drive);
}

TEST(GateDuration, Values) {
  const PhysicalParams phys;
  EXPECT_NEAR(gate_duration_ns(GateOp::rotation(Qubit::electron, kPi, 0.0), phys), 12.5, 1e-12);
  EXPECT_NEAR(gate_duration_ns(GateOp::rotation(Qubit::nuclear, 0.1, 0.0), phys),
              4 * phys.tau_ns(), 1e-9);
  EXPECT_NEAR(gate_duration_ns(GateOp::entangler(), phys), phys.t_uzz_ns(), 0.0);
  EXPECT_EQ(gate_duration_ns(GateOp::virtual_z(Qubit::nuclear, 1.0), phys), 0.0);
  EXPECT_THROW(gate_duration_ns(GateOp::named("I", Mat4::Identity()), phys), PreconditionError);
}

TEST(SimulateCircuit, NoiselessMatchesUnitary) {
  const PhysicalParams phys;
  auto rng = testing::rng_for(3);
  const FifteenParams p = decompose(haar_unitary4(rng));
  const Circuit hw = hardware_circuit(p);
  const DensityMat4 rho0 = initial_state(NoiseModel{});
  const Mat4 u = circuit_unitary(hw);
  EXPECT_LE(max_abs(simulate_circuit(hw, rho0, NoiseModel{0.95, 0.98, 0.0}, phys) -
                    u * rho0 * u.adjoint()),
            1e-12);
}

}  // namespace
}  // namespace nvforge
