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

#include "nvforge/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvforge/errors.hpp"

namespace nvforge {

namespace {

void check_label(int label) {
  if (label < 1 || label > 4) {
    throw PreconditionError("level label must be 1..4, got " +
                            std::to_string(label));
  }
}

// Tensor index of each label, per convention.
constexpr std::array<int, 4> kTextOrder = {0, 1, 2, 3};
constexpr std::array<int, 4> kCaptionOrder = {0, 2, 1, 3};

const std::array<int, 4>& order(BasisConvention convention) {
  return convention == BasisConvention::text ? kTextOrder : kCaptionOrder;
}

double normalize_theta(double theta) {
  double t = std::fmod(theta, 4.0 * kPi);
  if (t < 0.0) t += 4.0 * kPi;
  if (t >= 4.0 * kPi) t = 0.0;
  return t;
}

}  // namespace

int tensor_index(BasisConvention convention, int label) {
  check_label(label);
  return order(convention)[label - 1];
}

int level_label(BasisConvention convention, int index) {
  const auto& o = order(convention);
  const auto it = std::find(o.begin(), o.end(), index);
  if (it == o.end()) {
    throw PreconditionError("tensor index must be 0..3, got " +
                            std::to_string(index));
  }
  return static_cast<int>(it - o.begin()) + 1;
}

SpinState physical_state(BasisConvention convention, int label) {
  const int index = tensor_index(convention, label);
  return SpinState{(index / 2) == 0 ? 0 : -1, (index % 2) == 0 ? +1 : 0};
}

RealMat4 label_permutation(BasisConvention convention) {
  RealMat4 p = RealMat4::Zero();
  for (int label = 1; label <= 4; ++label) {
    p(label - 1, tensor_index(convention, label)) = 1.0;
  }
  return p;
}

const SpinOps& spin_ops() {
  static const SpinOps ops = [] {
    SpinOps s;
    s.x << 0.0, 0.5, 0.5, 0.0;
    s.y << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
    s.z << 0.5, 0.0, 0.0, -0.5;
    return s;
  }();
  return ops;
}

Mat4 embed(const Mat2& op, Qubit target) {
  return target == Qubit::electron ? kron(op, Mat2::Identity())
                                   : kron(Mat2::Identity(), op);
}

Mat2 rot2(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Mat2 r;
  r << c, -kI * std::exp(-kI * phi) * s, -kI * std::exp(kI * phi) * s, c;
  return r;
}

Mat2 rz2(double phi_z) {
  Mat2 r = Mat2::Zero();
  r(0, 0) = std::exp(-0.5 * kI * phi_z);
  r(1, 1) = std::exp(0.5 * kI * phi_z);
  return r;
}

Mat4 rot(double theta, double phi, Qubit target) {
  return embed(rot2(theta, phi), target);
}

Mat4 rz(double phi_z, Qubit target) { return embed(rz2(phi_z), target); }

Mat4 uzz() {
  const Complex plus = std::exp(kI * (kPi / 4.0));
  const Complex minus = std::conj(plus);
  Mat4 u = Mat4::Zero();
  u.diagonal() << plus, minus, minus, plus;
  return u;
}

Mat4 cnot() {
  Mat4 u = Mat4::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(3, 2) = 1.0;
  u(2, 3) = 1.0;
  return u;
}

Mat4 cphase(int i, int j) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1)) {
    std::ostringstream msg;
    msg << "cphase: oracle bits must be 0 or 1, got (" << i << ", " << j
        << ")";
    throw PreconditionError(msg.str());
  }
  Mat4 u = Mat4::Identity();
  u(2 * i + j, 2 * i + j) = -1.0;
  return u;
}

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::e_rot: return "E_ROT";
    case GateKind::n_rot: return "N_ROT";
    case GateKind::e_vz: return "E_VZ";
    case GateKind::n_vz: return "N_VZ";
    case GateKind::uzz: return "UZZ";
    case GateKind::named: return "NAMED";
  }
  throw InternalError("unknown GateKind");
}

GateKind gate_kind_from_string(const std::string& text) {
  for (GateKind kind : {GateKind::e_rot, GateKind::n_rot, GateKind::e_vz,
                        GateKind::n_vz, GateKind::uzz, GateKind::named}) {
    if (to_string(kind) == text) return kind;
  }
  throw PreconditionError("unknown gate kind '" + text + "'");
}

GateOp GateOp::rotation(Qubit target, double theta, double phi) {
  if (theta < 0.0) {
    theta = -theta;
    phi += kPi;
  }
  GateOp op;
  op.kind = target == Qubit::electron ? GateKind::e_rot : GateKind::n_rot;
  op.theta = normalize_theta(theta);
  op.phi = wrap_angle(phi);
  return op;
}

GateOp GateOp::virtual_z(Qubit target, double phi_z) {
  GateOp op;
  op.kind = target == Qubit::electron ? GateKind::e_vz : GateKind::n_vz;
  op.phi = wrap_angle(phi_z);
  return op;
}

GateOp GateOp::entangler() { return GateOp{}; }

GateOp GateOp::named(std::string name, const Mat4& matrix) {
  const double residual = unitarity_residual(matrix);
  if (!(residual <= tol::kInput)) {
    std::ostringstream msg;
    msg << "named gate '" << name << "' is not unitary (residual " << residual
        << ")";
    throw PreconditionError(msg.str());
  }
  GateOp op;
  op.kind = GateKind::named;
  op.name = std::move(name);
  op.matrix = matrix;
  return op;
}

Qubit GateOp::target() const {
  switch (kind) {
    case GateKind::e_rot:
    case GateKind::e_vz: return Qubit::electron;
    case GateKind::n_rot:
    case GateKind::n_vz: return Qubit::nuclear;
    default: throw PreconditionError(to_string(kind) + " has no single target");
  }
}

Mat4 GateOp::unitary() const {
  switch (kind) {
    case GateKind::e_rot:
    case GateKind::n_rot: return rot(theta, phi, target());
    case GateKind::e_vz:
    case GateKind::n_vz: return rz(phi, target());
    case GateKind::uzz: return nvforge::uzz();
    case GateKind::named: return matrix;
  }
  throw InternalError("unknown GateKind");
}

Mat4 circuit_unitary(const Circuit& circuit) {
  Mat4 u = Mat4::Identity();
  for (const GateOp& op : circuit.ops) u = op.unitary() * u;
  return u;
}

namespace {

void add_y(Circuit& circuit, Qubit target, int sign) {
  if (sign == 0) return;
  circuit.add(GateOp::rotation(target, kPi / 2.0, sign * kPi / 2.0));
}

}  // namespace

Circuit dj_circuit(DjOracle oracle, const DjScaffold& scaffold) {
  Circuit c;
  add_y(c, Qubit::electron, scaffold[0]);
  add_y(c, Qubit::nuclear, scaffold[1]);
  if (oracle == DjOracle::constant) {
    c.add(GateOp::named("I", Mat4::Identity()));
  } else {
    c.add(GateOp::named("CNOT", cnot()));
  }
  add_y(c, Qubit::electron, scaffold[2]);
  add_y(c, Qubit::nuclear, scaffold[3]);
  return c;
}

DjScaffold search_dj_scaffold() {
  constexpr std::array<int, 3> kChoices = {0, +1, -1};
  const Vec4 start = Vec4::Unit(0);
  const int flipped = 2;  // |mS=-1, mI=+1>

  auto lands_on = [&](const Circuit& c, int index) {
    const Vec4 out = circuit_unitary(c) * start;
    return std::norm(out(index)) >= 1.0 - tol::kInput;
  };

  DjScaffold best{};
  int best_count = 5;
  for (int a : kChoices)
    for (int b : kChoices)
      for (int c : kChoices)
        for (int d : kChoices) {
          const DjScaffold s = {a, b, c, d};
          const int count = std::count_if(s.begin(), s.end(),
                                          [](int v) { return v != 0; });
          if (count >= best_count) continue;
          if (lands_on(dj_circuit(DjOracle::constant, s), 0) &&
              lands_on(dj_circuit(DjOracle::balanced, s), flipped)) {
            best = s;
            best_count = count;
          }
        }
  if (best_count > 4) throw InternalError("no Deutsch-Jozsa scaffold found");
  return best;
}

Circuit grover_preparation() {
  Circuit c;
  c.add(GateOp::rotation(Qubit::electron, kPi / 2.0, kPi / 2.0));
  c.add(GateOp::rotation(Qubit::nuclear, kPi / 2.0, kPi / 2.0));
  return c;
}

Circuit grover_circuit(int i, int j) {
  const Mat4 oracle = cphase(i, j);
  Circuit unprepare;
  unprepare.add(GateOp::rotation(Qubit::electron, kPi / 2.0, -kPi / 2.0));
  unprepare.add(GateOp::rotation(Qubit::nuclear, kPi / 2.0, -kPi / 2.0));

  Circuit c = grover_preparation();
  c.add(GateOp::named("cU" + std::to_string(i) + std::to_string(j), oracle));
  c.append(unprepare);
  c.add(GateOp::named("cU00", cphase(0, 0)));
  c.append(grover_preparation());
  return c;
}

}  // namespace nvforge
