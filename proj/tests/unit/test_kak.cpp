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

#include <limits>

#include <set>

#include "nvforge/errors.hpp"
#include "nvforge/kak.hpp"
#include "test_support.hpp"

namespace nvforge {
namespace {

using testing::max_abs;

Mat4 swap_gate() {
  Mat4 s = Mat4::Zero();
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

Mat4 random_local(std::mt19937_64& rng) {
  return kron(haar_unitary2(rng), haar_unitary2(rng));
}

void expect_in_weyl_chamber(const CanonicalClass& c) {
  EXPECT_LE(c.alpha, kPi / 2 + 1e-12);
  EXPECT_GE(c.alpha, c.beta - 1e-12);
  EXPECT_GE(c.beta, std::abs(c.delta) - 1e-12);
  EXPECT_GE(std::abs(c.delta), -1e-12);
}

void expect_same_makhlin(const Mat4& a, const Mat4& b, double tol) {
  const auto ma = testing::makhlin(a);
  const auto mb = testing::makhlin(b);
  EXPECT_LE(std::abs(ma.g1 - mb.g1), tol);
  EXPECT_LE(std::abs(ma.g2 - mb.g2), tol);
}

TEST(CanonicalGate, ExplicitExponential) {
  const SpinOps& s = spin_ops();
  auto rng = testing::rng_for(1);
  std::uniform_real_distribution<double> a(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double al = a(rng), be = a(rng), de = a(rng);
    const Mat4 gen = 2.0 * kI *
                     (al * kron(s.x, s.x) + be * kron(s.y, s.y) + de * kron(s.z, s.z));
    EXPECT_LE(max_abs(canonical_gate(al, be, de) - testing::taylor_expm<Mat4>(gen)), 1e-12);
  }
}

TEST(CanonicalClass, Anchors) {
  const CanonicalClass id = canonical_class(Mat4::Identity());
  EXPECT_NEAR(id.alpha, 0.0, 1e-9);
  EXPECT_NEAR(id.beta, 0.0, 1e-9);
  EXPECT_NEAR(id.delta, 0.0, 1e-9);

  const CanonicalClass cn = canonical_class(cnot());
  EXPECT_NEAR(cn.alpha, 1.571, 1e-3);
  EXPECT_NEAR(cn.alpha, kPi / 2, 1e-9);
  EXPECT_NEAR(cn.beta, 0.0, 1e-9);
  EXPECT_NEAR(cn.delta, 0.0, 1e-9);

  const CanonicalClass sw = canonical_class(swap_gate());
  EXPECT_NEAR(sw.alpha, kPi / 2, 1e-9);
  EXPECT_NEAR(sw.beta, kPi / 2, 1e-9);
  EXPECT_NEAR(sw.delta, kPi / 2, 1e-9);
}

TEST(CanonicalClass, SwapCornerByLocalInvariantOracle) {
  // SWAP shares its local invariants with V(pi/2, pi/2, pi/2) and with no
  // other point on a coarse grid over the chamber.
  expect_same_makhlin(swap_gate(), canonical_gate(kPi / 2, kPi / 2, kPi / 2), 1e-12);
  const auto target = testing::makhlin(swap_gate());
  int matches = 0;
  const int n = 16;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      for (int k = -j; k <= j; ++k) {
        const auto m = testing::makhlin(
            canonical_gate(kPi / 2 * i / n, kPi / 2 * j / n, kPi / 2 * k / n));
        if (std::abs(m.g1 - target.g1) < 1e-9 && std::abs(m.g2 - target.g2) < 1e-9) {
          ++matches;
        }
      }
    }
  }
  // The corner and its mirror (pi/2, pi/2, -pi/2) are the same class.
  EXPECT_EQ(matches, 2);
}

TEST(CanonicalClass, LocalInvarianceAndChamber) {
  auto rng = testing::rng_for(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat4 u = haar_unitary4(rng);
    const CanonicalClass c0 = canonical_class(u);
    expect_in_weyl_chamber(c0);
    const CanonicalClass c1 = canonical_class(random_local(rng) * u * random_local(rng));
    ASSERT_NEAR(c0.alpha, c1.alpha, 1e-8);
    ASSERT_NEAR(c0.beta, c1.beta, 1e-8);
    ASSERT_NEAR(c0.delta, c1.delta, 1e-8);
    if (trial % 50 == 0) expect_same_makhlin(u, canonical_gate(c0.alpha, c0.beta, c0.delta), 1e-9);
  }
}

TEST(Decompose, IdentityAndLocalProducts) {
  const FifteenParams p = decompose(Mat4::Identity());
  EXPECT_NEAR(p.alpha, 0.0, 1e-12);
  EXPECT_NEAR(p.beta, 0.0, 1e-12);
  EXPECT_NEAR(p.delta, 0.0, 1e-12);
  for (const LocalGateParams& g : {p.a, p.b, p.c, p.d}) {
    const double t = std::fmod(g.theta, 4 * kPi);
    EXPECT_TRUE(t < 1e-9 || 4 * kPi - t < 1e-9) << g.theta;
  }
  EXPECT_GE(fidelity_upto_phase(synthesize(p), Mat4::Identity()), 1 - 1e-12);

  auto rng = testing::rng_for(5);
  for (int trial = 0; trial < 50; ++trial) {
    const FifteenParams q = decompose(random_local(rng));
    EXPECT_NEAR(q.alpha, 0.0, 1e-9);
    EXPECT_NEAR(q.beta, 0.0, 1e-9);
    EXPECT_NEAR(q.delta, 0.0, 1e-9);
  }
}

TEST(Decompose, DegenerateTargets) {
  for (const Mat4& u : {Mat4(Mat4::Identity()), cnot(), swap_gate(), uzz(),
                        Mat4(cnot() * swap_gate()), cphase(0, 1)}) {
    const KakDecomposition kak = kak_decompose(u);
    EXPECT_GE(fidelity_upto_phase(synthesize(kak.params), u), 1 - 1e-12);
    EXPECT_LE(max_abs(std::exp(kI * kak.global_phase) * synthesize(kak.params) - u), 1e-9);
  }
}

TEST(Decompose, HaarRoundTripThousandSeeds) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto rng = testing::rng_for(seed);
    const Mat4 u = haar_unitary4(rng);
    const KakDecomposition kak = kak_decompose(u);
    ASSERT_GE(fidelity_upto_phase(synthesize(kak.params), u), 1 - 1e-9) << "seed " << seed;
    // The global phase is tracked, not just discarded.
    ASSERT_LE(max_abs(std::exp(kI * kak.global_phase) * synthesize(kak.params) - u), 1e-8);
    const FifteenParams& p = kak.params;
    ASSERT_LE(p.alpha, kPi / 2 + 1e-12);
    ASSERT_GE(p.alpha + 1e-12, p.beta);
    ASSERT_GE(p.beta + 1e-12, std::abs(p.delta));
  }
}

TEST(Decompose, Deterministic) {
  auto rng = testing::rng_for(99);
  const Mat4 u = haar_unitary4(rng);
  EXPECT_EQ(decompose(u), decompose(u));
}

TEST(Decompose, RejectsNonUnitary) {
  Mat4 u = Mat4::Identity();
  u(1, 1) = 1.01;
  EXPECT_THROW(decompose(u), PreconditionError);
  EXPECT_THROW(canonical_class(u), PreconditionError);
  u(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(decompose(u), PreconditionError);
}

TEST(Synthesize, Anchors) {
  EXPECT_LE(max_abs(synthesize(FifteenParams{}) - Mat4::Identity()), 1e-15);
  EXPECT_GE(fidelity_upto_phase(synthesize(decompose(cnot())), cnot()), 1 - 1e-9);
  FifteenParams p;
  p.alpha = kPi / 2;
  const CanonicalClass c = canonical_class(synthesize(p));
  EXPECT_NEAR(c.alpha, 1.571, 1e-3);
  EXPECT_NEAR(c.beta, 0.0, 1e-9);
  EXPECT_NEAR(c.delta, 0.0, 1e-9);
}

TEST(Synthesize, LocalGateConvention) {
  const LocalGateParams g{1.1, -0.4, 2.3};
  EXPECT_LE(max_abs(local_gate(g) - rz2(g.phi_z) * rot2(g.theta, g.phi)), 1e-15);
}

TEST(CnotDressing, KakFindsLocalsAroundUzz) {
  const KakDecomposition kc = kak_decompose(cnot());
  const KakDecomposition kz = kak_decompose(uzz());
  ASSERT_NEAR(kc.params.alpha, kz.params.alpha, 1e-9);
  ASSERT_NEAR(kc.params.beta, kz.params.beta, 1e-9);
  ASSERT_NEAR(kc.params.delta, kz.params.delta, 1e-9);
  const Mat4 pre = kz.before.matrix().adjoint() * kc.before.matrix();
  const Mat4 post = kc.after.matrix() * kz.after.matrix().adjoint();
  EXPECT_NEAR(fidelity_upto_phase(post * uzz() * pre, cnot()), 1.0, 1e-10);
}

TEST(FactorLocal, RecoversKroneckerFactors) {
  auto rng = testing::rng_for(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat2 a = haar_unitary2(rng);
    const Mat2 b = haar_unitary2(rng);
    const LocalPair pair = factor_local(kron(a, b));
    EXPECT_LE(max_abs(pair.matrix() - kron(a, b)), 1e-10);
    EXPECT_NEAR(std::abs(pair.electron.determinant() - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(pair.nuclear.determinant() - 1.0), 0.0, 1e-12);
    EXPECT_LE(unitarity_residual(pair.electron), 1e-12);
  }
  EXPECT_THROW(factor_local(cnot()), std::exception);
}

TEST(Su2Params, Anchors) {
  const Su2Params id = su2_params(Mat2::Identity());
  EXPECT_NEAR(id.theta, 0.0, 1e-15);
  EXPECT_NEAR(id.phi_z, 0.0, 1e-15);
  EXPECT_NEAR(id.global_phase, 0.0, 1e-15);
  EXPECT_NEAR(id.phi, 0.0, 1e-15);

  Mat2 x;
  x << 0, 1, 1, 0;
  const Su2Params px = su2_params(testing::taylor_expm<Mat2>(-kI * kPi / 2.0 * x));
  EXPECT_NEAR(px.theta, kPi, 1e-12);
  EXPECT_NEAR(px.phi, 0.0, 1e-12);
  EXPECT_NEAR(px.phi_z, 0.0, 1e-12);
}

TEST(Su2Params, ReconstructsRandomUnitaries) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto rng = testing::rng_for(seed + 5000);
    const Mat2 g = haar_unitary2(rng);
    const Su2Params s = su2_params(g);
    const Mat2 rebuilt = std::exp(kI * s.global_phase) * rz2(s.phi_z) * rot2(s.theta, s.phi);
    ASSERT_LE(max_abs(rebuilt - g), 1e-10) << "seed " << seed;
    ASSERT_NEAR(std::abs((g.adjoint() * rebuilt).trace()) / 2.0, 1.0, 1e-10);
  }
}

TEST(Su2Params, DiagonalAndAntiDiagonalEdgeCases) {
  for (const Mat2& g : {Mat2(rz2(1.3)), Mat2(rot2(kPi, 0.7)), Mat2(rz2(-2.0) * rot2(kPi, -1.0)),
                        Mat2(-Mat2::Identity())}) {
    const Su2Params s = su2_params(g);
    EXPECT_LE(max_abs(std::exp(kI * s.global_phase) * rz2(s.phi_z) * rot2(s.theta, s.phi) - g),
              1e-10);
  }
}

TEST(VCircuit, AnchorsAndStructure) {
  const Circuit zero = v_circuit(0, 0, 0);
  EXPECT_NEAR(fidelity_upto_phase(circuit_unitary(zero), Mat4::Identity()), 1.0, 1e-12);
  const CanonicalClass c = canonical_class(circuit_unitary(v_circuit(kPi / 2, 0, 0)));
  EXPECT_NEAR(c.alpha, 1.571, 1e-3);
  EXPECT_NEAR(c.beta, 0.0, 1e-9);

  std::set<std::size_t> sizes;
  auto rng = testing::rng_for(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit v = v_circuit(u(rng), u(rng), u(rng));
    sizes.insert(v.size());
    int uzz_count = 0;
    for (const GateOp& op : v.ops) {
      EXPECT_NE(op.kind, GateKind::named);
      uzz_count += op.kind == GateKind::uzz;
    }
    EXPECT_LE(uzz_count, 6);
  }
  sizes.insert(zero.size());
  EXPECT_EQ(sizes.size(), 1u);  // constant gate count
}

TEST(VCircuit, HundredWeylChamberPoints) {
  auto rng = testing::rng_for(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = kPi / 2 * u(rng);
    const double b = a * u(rng);
    const double d = b * (2 * u(rng) - 1);
    ASSERT_GE(fidelity_upto_phase(circuit_unitary(v_circuit(a, b, d)), canonical_gate(a, b, d)),
              1 - 1e-9);
  }
}

TEST(HardwareCircuit, SameUnitaryAndHardwareOnly) {
  auto rng = testing::rng_for(8);
  for (int trial = 0; trial < 100; ++trial) {
    const FifteenParams p = decompose(haar_unitary4(rng));
    const Circuit hw = hardware_circuit(p);
    for (const GateOp& op : hw.ops) EXPECT_NE(op.kind, GateKind::named);
    EXPECT_GE(fidelity_upto_phase(circuit_unitary(hw), synthesize(p)), 1 - 1e-9);
    EXPECT_GE(fidelity_upto_phase(circuit_unitary(universal_circuit(p)), synthesize(p)),
              1 - 1e-9);
  }
  EXPECT_TRUE(hardware_circuit(FifteenParams{}).empty());
  // Zero-angle terms are pruned: a CNOT-class block keeps only one two-UZZ term.
  FifteenParams cnot_class;
  cnot_class.alpha = kPi / 2;
  int uzz_count = 0;
  for (const GateOp& op : hardware_circuit(cnot_class).ops) uzz_count += op.kind == GateKind::uzz;
  EXPECT_EQ(uzz_count, 2);
}

TEST(FifteenParams, ArrayRoundTripAndNames) {
  std::array<double, 15> v{};
  for (int k = 0; k < 15; ++k) v[k] = 0.1 * k - 0.7;
  EXPECT_EQ(FifteenParams::from_array(v).to_array(), v);
  EXPECT_STREQ(fifteen_param_names()[0], "alpha");
  EXPECT_STREQ(fifteen_param_names()[5], "phizA");
  EXPECT_STREQ(fifteen_param_names()[14], "phizD");
}

}  // namespace
}  // namespace nvforge
