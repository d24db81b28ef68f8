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

#include "nvforge/linalg.hpp"
#include "nvforge/spin_model.hpp"

namespace nvforge {

/// Parameters of one local gate rz(phi_z) * rot(theta, phi).
struct LocalGateParams {
  double theta = 0.0;
  double phi = 0.0;
  double phi_z = 0.0;

  bool operator==(const LocalGateParams&) const = default;
};

/// The fifteen numbers of the universal circuit
/// (C (x) D) * V(alpha, beta, delta) * (A (x) B).
/// A and C act on the electron, B and D on the nuclear spin.
struct FifteenParams {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  LocalGateParams a;
  LocalGateParams b;
  LocalGateParams c;
  LocalGateParams d;

  /// alpha, beta, delta, thetaA, phiA, phizA, ..., thetaD, phiD, phizD.
  std::array<double, 15> to_array() const;
  static FifteenParams from_array(const std::array<double, 15>& values);

  bool operator==(const FifteenParams&) const = default;
};

/// Field names in to_array() order.
const std::array<const char*, 15>& fifteen_param_names();

struct CanonicalClass {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
};

/// Pair of SU(2) factors with the phase split off: e^{i phase} electron (x) nuclear.
struct LocalPair {
  Mat2 electron = Mat2::Identity();
  Mat2 nuclear = Mat2::Identity();
  double global_phase = 0.0;

  Mat4 matrix() const;
};

/// g = e^{i global_phase} rz2(phi_z) rot2(theta, phi).
struct Su2Params {
  double theta = 0.0;
  double phi = 0.0;
  double phi_z = 0.0;
  double global_phase = 0.0;
};

/// Full result of decompose(): u = e^{i global_phase} synthesize(params).
struct KakDecomposition {
  FifteenParams params;
  double global_phase = 0.0;
  LocalPair before;  // A (x) B
  LocalPair after;   // C (x) D
};

/// V(alpha, beta, delta) = exp[2i (alpha Sx Ix + beta Sy Iy + delta Sz Iz)].
Mat4 canonical_gate(double alpha, double beta, double delta);

/// Local gate matrix rz2(phi_z) * rot2(theta, phi).
Mat2 local_gate(const LocalGateParams& p);

/// Nonlocal class of u, normalized to pi/2 >= alpha >= beta >= |delta|
/// (delta >= 0 when alpha = pi/2). Throws PreconditionError if u is not
/// unitary within tol::kInput.
CanonicalClass canonical_class(const Mat4& u);

/// Three-step decomposition. Throws PreconditionError for non-unitary
/// input and InternalError if the local factorization fails.
KakDecomposition kak_decompose(const Mat4& u);
FifteenParams decompose(const Mat4& u);

/// (C (x) D) * V * (A (x) B), without any global phase.
Mat4 synthesize(const FifteenParams& p);

/// Splits a Kronecker product into SU(2) factors and a phase.
/// Throws InternalError when k is not a product within tol::kOutput.
LocalPair factor_local(const Mat4& k);

Su2Params su2_params(const Mat2& g);

/// Hardware realization of V(alpha, beta, delta) using only rotations,
/// virtual-Z and six UZZ gates. The gate count does not depend on the angles.
Circuit v_circuit(double alpha, double beta, double delta);

/// A (x) B, v_circuit, C (x) D as a gate list with every gate present.
Circuit universal_circuit(const FifteenParams& p);

/// universal_circuit with identity gates dropped: rotations with theta = 0,
/// virtual-Z with phi_z = 0, and each two-UZZ term of the V block whose angle
/// is zero. This is what runs on hardware. Same unitary up to global phase.
Circuit hardware_circuit(const FifteenParams& p);

}  // namespace nvforge
