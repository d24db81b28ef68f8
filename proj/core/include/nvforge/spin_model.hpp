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
#include <string>
#include <vector>

#include "nvforge/linalg.hpp"

namespace nvforge {

enum class Qubit { electron, nuclear };

/// Mapping between level labels |1>..|4> and the physical (mS, mI) states.
///
/// Internally every operator is stored in tensor order: electron factor first,
/// electron qubit |0> = mS=0, |1> = mS=-1; nuclear qubit |0> = mI=+1,
/// |1> = mI=0. The convention only decides which label each tensor index
/// carries when populations are reported or matrices are read and written.
///
///   text:    |1>=(0,+1) |2>=(0,0)  |3>=(-1,+1) |4>=(-1,0)
///   caption: |1>=(0,+1) |2>=(-1,+1) |3>=(0,0)  |4>=(-1,0)
enum class BasisConvention { text, caption };

struct SpinState {
  int ms = 0;
  int mi = 0;
};

/// 0-based tensor index of level label 1..4.
int tensor_index(BasisConvention convention, int label);

/// Level label 1..4 of a 0-based tensor index.
int level_label(BasisConvention convention, int index);

SpinState physical_state(BasisConvention convention, int label);

/// Permutation matrix P with (P * v)[label-1] = v[tensor_index(label)].
/// Converting an operator to label order is P * m * P^T.
RealMat4 label_permutation(BasisConvention convention);

/// Pseudo-spin-1/2 operators (half the Pauli matrices). The same 2x2 set
/// serves as S (electron) and I (nuclear).
struct SpinOps {
  Mat2 x;
  Mat2 y;
  Mat2 z;
};
const SpinOps& spin_ops();

/// Lifts a single-qubit operator onto the two-qubit space.
Mat4 embed(const Mat2& op, Qubit target);

/// exp[-i theta (cos(phi) J_x + sin(phi) J_y)].
Mat2 rot2(double theta, double phi);
/// exp(-i phi_z J_z).
Mat2 rz2(double phi_z);

Mat4 rot(double theta, double phi, Qubit target);
Mat4 rz(double phi_z, Qubit target);

/// exp(i pi S_z (x) I_z) = diag(e^{i pi/4}, e^{-i pi/4}, e^{-i pi/4}, e^{i pi/4}).
Mat4 uzz();

/// Electron-controlled NOT on the nuclear qubit.
Mat4 cnot();

/// Phase oracle with -1 on the basis state |ij> (electron bit first).
/// Throws PreconditionError unless i, j are 0 or 1.
Mat4 cphase(int i, int j);

enum class GateKind { e_rot, n_rot, e_vz, n_vz, uzz, named };

std::string to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& text);

/// One abstract gate. Angles are normalized on construction: theta in
/// [0, 4pi), phi and phi_z in (-pi, pi].
struct GateOp {
  GateKind kind = GateKind::uzz;
  double theta = 0.0;
  double phi = 0.0;  // drive phase for rotations, phi_z for virtual-Z
  std::string name;  // named gates only
  Mat4 matrix = Mat4::Identity();

  static GateOp rotation(Qubit target, double theta, double phi);
  static GateOp virtual_z(Qubit target, double phi_z);
  static GateOp entangler();
  static GateOp named(std::string name, const Mat4& matrix);

  bool is_rotation() const {
    return kind == GateKind::e_rot || kind == GateKind::n_rot;
  }
  bool is_virtual_z() const {
    return kind == GateKind::e_vz || kind == GateKind::n_vz;
  }
  Qubit target() const;

  Mat4 unitary() const;
};

/// Gates applied left to right in time.
struct Circuit {
  std::vector<GateOp> ops;

  Circuit& add(GateOp op) {
    ops.push_back(std::move(op));
    return *this;
  }
  Circuit& append(const Circuit& later) {
    ops.insert(ops.end(), later.ops.begin(), later.ops.end());
    return *this;
  }
  std::size_t size() const { return ops.size(); }
  bool empty() const { return ops.empty(); }
};

/// Ordered product; the first op is the rightmost factor.
Mat4 circuit_unitary(const Circuit& circuit);

enum class DjOracle { constant, balanced };

/// +1 = Y (pi/2 about +y), -1 = Ybar (pi/2 about -y), 0 = no rotation,
/// for the slots {electron before, nuclear before, electron after,
/// nuclear after} the oracle.
using DjScaffold = std::array<int, 4>;

/// Rotation scaffold used by dj_circuit. Found by search_dj_scaffold().
inline constexpr DjScaffold kDjScaffold = {+1, -1, -1, +1};

/// Exhaustive search over the 81 scaffolds. Returns the one with the fewest
/// rotations (ties broken by slot order none < Y < Ybar, lexicographic) that
/// sends |1> to |1> for the constant oracle and to the electron-flipped
/// state |mS=-1, mI=+1> for the balanced oracle.
DjScaffold search_dj_scaffold();

Circuit dj_circuit(DjOracle oracle, const DjScaffold& scaffold = kDjScaffold);

/// Uniform-superposition preparation on both qubits (pi/2 about +y).
Circuit grover_preparation();

/// Single-iteration two-qubit Grover search marking |ij>:
/// preparation, cphase(i, j), preparation^dagger, cphase(0, 0), preparation.
Circuit grover_circuit(int i, int j);

}  // namespace nvforge
