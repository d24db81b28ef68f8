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

#include "nvforge/kak.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "nvforge/errors.hpp"

namespace nvforge {

std::array<double, 15> FifteenParams::to_array() const {
  return {alpha, beta,    delta, a.theta, a.phi,   a.phi_z, b.theta, b.phi,
          b.phi_z, c.theta, c.phi, c.phi_z, d.theta, d.phi,   d.phi_z};
}

FifteenParams FifteenParams::from_array(const std::array<double, 15>& v) {
  FifteenParams p;
  p.alpha = v[0];
  p.beta = v[1];
  p.delta = v[2];
  p.a = {v[3], v[4], v[5]};
  p.b = {v[6], v[7], v[8]};
  p.c = {v[9], v[10], v[11]};
  p.d = {v[12], v[13], v[14]};
  return p;
}

const std::array<const char*, 15>& fifteen_param_names() {
  static const std::array<const char*, 15> names = {
      "alpha",  "beta", "delta", "thetaA", "phiA", "phizA", "thetaB", "phiB",
      "phizB", "thetaC", "phiC", "phizC",  "thetaD", "phiD", "phizD"};
  return names;
}

Mat4 LocalPair::matrix() const {
  return std::exp(kI * global_phase) * kron(electron, nuclear);
}

namespace {

const Mat2& pauli(int k) {
  static const std::array<Mat2, 3> paulis = [] {
    std::array<Mat2, 3> p;
    p[0] << 0.0, 1.0, 1.0, 0.0;
    p[1] << 0.0, -kI, kI, 0.0;
    p[2] << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return paulis[k];
}

/// Columns: (|00>+|11>)/sqrt2, i(|00>-|11>)/sqrt2, i(|01>+|10>)/sqrt2,
/// (|01>-|10>)/sqrt2. Local SU(2) x SU(2) becomes SO(4) in this basis.
const Mat4& magic_basis() {
  static const Mat4 m = [] {
    const double r = 1.0 / std::sqrt(2.0);
    Mat4 b = Mat4::Zero();
    b(0, 0) = r;
    b(3, 0) = r;
    b(0, 1) = kI * r;
    b(3, 1) = -kI * r;
    b(1, 2) = kI * r;
    b(2, 2) = kI * r;
    b(1, 3) = r;
    b(2, 3) = -r;
    return b;
  }();
  return m;
}

/// Eigenvalues (+-1) of XX, YY, ZZ on the magic basis vectors.
const std::array<std::array<double, 4>, 3>& magic_pauli_signs() {
  static const std::array<std::array<double, 4>, 3> signs = [] {
    std::array<std::array<double, 4>, 3> s{};
    const Mat4& m = magic_basis();
    for (int p = 0; p < 3; ++p) {
      const Mat4 diag = m.adjoint() * kron(pauli(p), pauli(p)) * m;
      for (int k = 0; k < 4; ++k) s[p][k] = diag(k, k).real();
    }
    return s;
  }();
  return signs;
}

void require_unitary(const Mat4& u, const char* who) {
  const double residual = unitarity_residual(u);
  if (!(residual <= tol::kInput)) {
    std::ostringstream msg;
    msg << who << ": input is not unitary (residual " << residual << ")";
    throw PreconditionError(msg.str());
  }
}

/// u = e^{i phase} * after * V(coords) * before, with before/after local.
/// Canonicalization rewrites V while keeping the product fixed.
struct KakState {
  std::array<double, 3> coords{};
  Mat4 before = Mat4::Identity();
  Mat4 after = Mat4::Identity();
  double phase = 0.0;

  // V(a) = V(a - pi e_k) * (i P_k P_k)
  void shift_down(int k) {
    coords[k] -= kPi;
    before = kron(pauli(k), pauli(k)) * before;
    phase += kPi / 2.0;
  }
  // V(a) = V(a + pi e_k) * (-i P_k P_k)
  void shift_up(int k) {
    coords[k] += kPi;
    before = kron(pauli(k), pauli(k)) * before;
    phase -= kPi / 2.0;
  }
  // Conjugation by Q (x) I, where Q is the Pauli commuting with the
  // coordinate left untouched.
  void negate_pair(int keep) {
    for (int k = 0; k < 3; ++k) {
      if (k != keep) coords[k] = -coords[k];
    }
    const Mat4 q = kron(pauli(keep), Mat2::Identity());
    before = q * before;
    after = after * q;
  }
  // V(..a_i..a_j..) = (W (x) W) V(..a_j..a_i..) (W (x) W)^dagger
  void swap_coords(int i, int j) {
    if (i > j) std::swap(i, j);
    Mat2 w;
    const double r = 1.0 / std::sqrt(2.0);
    if (i == 0 && j == 1) {
      w << 1.0, 0.0, 0.0, kI;  // X -> Y, Y -> -X
    } else if (i == 1 && j == 2) {
      w << r, -kI * r, -kI * r, r;  // rx(pi/2): Y -> Z, Z -> -Y
    } else {
      w << r, -r, r, r;  // ry(pi/2): Z -> X, X -> -Z
    }
    std::swap(coords[i], coords[j]);
    const Mat4 ww = kron(w, w);
    after = after * ww;
    before = ww.adjoint() * before;
  }

  void canonicalize() {
    for (int k = 0; k < 3; ++k) {
      while (coords[k] > kPi / 2.0) shift_down(k);
      while (coords[k] <= -kPi / 2.0) shift_up(k);
    }
    auto mag = [&](int k) { return std::abs(coords[k]); };
    if (mag(0) < mag(1)) swap_coords(0, 1);
    if (mag(1) < mag(2)) swap_coords(1, 2);
    if (mag(0) < mag(1)) swap_coords(0, 1);

    if (coords[0] < 0.0 && coords[1] < 0.0) {
      negate_pair(2);
    } else if (coords[0] < 0.0) {
      negate_pair(1);
    } else if (coords[1] < 0.0) {
      negate_pair(0);
    }
    // alpha = pi/2 face: (pi/2, b, d) ~ (pi/2, b, -d).
    if (coords[0] >= kPi / 2.0 - tol::kAlgebra && coords[2] < 0.0) {
      shift_down(0);
      negate_pair(1);
    }
  }
};

KakState kak_core(const Mat4& u) {
  const Mat4& m = magic_basis();
  const auto& signs = magic_pauli_signs();

  const Complex det = u.determinant();
  const double det_phase = std::arg(det) / 4.0;
  const Mat4 special = u * std::exp(-kI * det_phase);
  const Mat4 tilde = m.adjoint() * special * m;
  const Mat4 gram = tilde.transpose() * tilde;

  const SymmetricUnitaryEigen eig = eig_symmetric_unitary(gram);
  std::array<double, 4> half{};
  for (int k = 0; k < 4; ++k) half[k] = eig.phases[k] / 2.0;

  const Mat4 q = eig.basis.cast<Complex>();
  auto build_left = [&](const std::array<double, 4>& h) {
    Mat4 d_inv = Mat4::Zero();
    for (int k = 0; k < 4; ++k) d_inv(k, k) = std::exp(-kI * h[k]);
    return Mat4(tilde * q * d_inv);
  };
  Mat4 left = build_left(half);
  if (left.real().determinant() < 0.0) {
    half[0] += kPi;
    left = build_left(half);
  }
  const double imag_residual = left.imag().cwiseAbs().maxCoeff();
  if (!(imag_residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "kak: left factor is not real orthogonal (imaginary residual "
        << imag_residual << ")";
    throw InternalError(msg.str());
  }

  KakState state;
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += half[k];
  for (int p = 0; p < 3; ++p) {
    double dot = 0.0;
    for (int k = 0; k < 4; ++k) dot += signs[p][k] * half[k];
    state.coords[p] = dot / 2.0;
  }
  state.phase = det_phase + sum / 4.0;
  const Mat4 left_real = left.real().cast<Complex>();
  state.after = m * left_real * m.adjoint();
  state.before = m * q.transpose() * m.adjoint();
  state.canonicalize();
  return state;
}

}  // namespace

Mat4 canonical_gate(double alpha, double beta, double delta) {
  // The three Pauli products commute and are diagonal in the magic basis.
  const auto& signs = magic_pauli_signs();
  Mat4 diag = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double angle =
        0.5 * (alpha * signs[0][k] + beta * signs[1][k] + delta * signs[2][k]);
    diag(k, k) = std::exp(kI * angle);
  }
  const Mat4& m = magic_basis();
  return m * diag * m.adjoint();
}

Mat2 local_gate(const LocalGateParams& p) {
  return rz2(p.phi_z) * rot2(p.theta, p.phi);
}

CanonicalClass canonical_class(const Mat4& u) {
  require_unitary(u, "canonical_class");
  const KakState state = kak_core(u);
  return {state.coords[0], state.coords[1], state.coords[2]};
}

LocalPair factor_local(const Mat4& k) {
  int bi = 0;
  int bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double norm = k.block<2, 2>(2 * i, 2 * j).norm();
      if (norm > best) {
        best = norm;
        bi = i;
        bj = j;
      }
    }
  }
  const Mat2 block = k.block<2, 2>(2 * bi, 2 * bj);
  const Mat2 nuclear = block / std::sqrt(block.determinant());
  Mat2 electron;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      electron(i, j) =
          (nuclear.adjoint() * k.block<2, 2>(2 * i, 2 * j)).trace() / 2.0;
    }
  }
  const Complex root = std::sqrt(electron.determinant());
  LocalPair pair;
  pair.electron = electron / root;
  pair.nuclear = nuclear;
  pair.global_phase = std::arg(root);

  const double residual = (pair.matrix() - k).cwiseAbs().maxCoeff();
  if (!(residual <= tol::kOutput)) {
    std::ostringstream msg;
    msg << "factor_local: operator is not a Kronecker product (residual "
        << residual << ")";
    throw InternalError(msg.str());
  }
  return pair;
}

Su2Params su2_params(const Mat2& g) {
  constexpr double kZero = 1e-12;
  const Complex root = std::sqrt(g.determinant());
  const Mat2 special = g / root;
  const Complex a = special(0, 0);
  const Complex b = special(1, 0);

  Su2Params out;
  out.global_phase = std::arg(root);
  out.theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  double phi_z = 0.0;
  if (std::abs(b) < kZero) {
    phi_z = -2.0 * std::arg(a);
    out.phi = 0.0;
  } else if (std::abs(a) < kZero) {
    phi_z = 0.0;
    out.phi = wrap_angle(std::arg(b) + kPi / 2.0);
  } else {
    phi_z = -2.0 * std::arg(a);
    out.phi = wrap_angle(std::arg(b) + kPi / 2.0 - phi_z / 2.0);
  }
  // rz2(phi_z + 2 pi) = -rz2(phi_z)
  out.phi_z = wrap_angle(phi_z);
  const long turns = std::lround((phi_z - out.phi_z) / (2.0 * kPi));
  if (turns % 2 != 0) out.global_phase = wrap_angle(out.global_phase + kPi);
  else out.global_phase = wrap_angle(out.global_phase);
  return out;
}

KakDecomposition kak_decompose(const Mat4& u) {
  require_unitary(u, "decompose");
  const KakState state = kak_core(u);

  KakDecomposition out;
  out.before = factor_local(state.before);
  out.after = factor_local(state.after);

  const Su2Params a = su2_params(out.before.electron);
  const Su2Params b = su2_params(out.before.nuclear);
  const Su2Params c = su2_params(out.after.electron);
  const Su2Params d = su2_params(out.after.nuclear);

  FifteenParams& p = out.params;
  p.alpha = state.coords[0];
  p.beta = state.coords[1];
  p.delta = state.coords[2];
  p.a = {a.theta, a.phi, a.phi_z};
  p.b = {b.theta, b.phi, b.phi_z};
  p.c = {c.theta, c.phi, c.phi_z};
  p.d = {d.theta, d.phi, d.phi_z};

  out.global_phase =
      wrap_angle(state.phase + out.before.global_phase +
                 out.after.global_phase + a.global_phase + b.global_phase +
                 c.global_phase + d.global_phase);

  const Mat4 rebuilt = std::exp(kI * out.global_phase) * synthesize(p);
  const double residual = (rebuilt - u).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "decompose: reconstruction residual " << residual
        << " exceeds 1e-8";
    throw InternalError(msg.str());
  }
  return out;
}

FifteenParams decompose(const Mat4& u) { return kak_decompose(u).params; }

Mat4 synthesize(const FifteenParams& p) {
  const Mat4 before = kron(local_gate(p.a), local_gate(p.b));
  const Mat4 after = kron(local_gate(p.c), local_gate(p.d));
  return after * canonical_gate(p.alpha, p.beta, p.delta) * before;
}

namespace {

/// Local layers separated by UZZ gates; the last layer is the one being
/// extended.
class LayeredBuilder {
 public:
  LayeredBuilder() : layers_(1, {Mat2::Identity(), Mat2::Identity()}) {}

  void local(const Mat2& electron, const Mat2& nuclear) {
    layers_.back().first = electron * layers_.back().first;
    layers_.back().second = nuclear * layers_.back().second;
  }
  void entangle() { layers_.push_back({Mat2::Identity(), Mat2::Identity()}); }

  Circuit build() const {
    Circuit circuit;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (i > 0) circuit.add(GateOp::entangler());
      const Su2Params e = su2_params(layers_[i].first);
      const Su2Params n = su2_params(layers_[i].second);
      circuit.add(GateOp::rotation(Qubit::electron, e.theta, e.phi));
      circuit.add(GateOp::virtual_z(Qubit::electron, e.phi_z));
      circuit.add(GateOp::rotation(Qubit::nuclear, n.theta, n.phi));
      circuit.add(GateOp::virtual_z(Qubit::nuclear, n.phi_z));
    }
    return circuit;
  }

 private:
  std::vector<std::pair<Mat2, Mat2>> layers_;
};

// exp(i gamma/2 W Z W^dag (x) W Z W^dag) from two UZZ:
//   exp(i gamma/2 ZZ) = -(G (x) I) UZZ rx(gamma + pi) UZZ rx(pi) (G^dag (x) I)
// with G = rx(pi/2) taking Y to Z.
void add_zz_like(LayeredBuilder& builder, const Mat2& w, double gamma) {
  const Mat2 id = Mat2::Identity();
  const Mat2 g = rot2(kPi / 2.0, 0.0);
  builder.local(w.adjoint(), w.adjoint());
  builder.local(rot2(kPi, 0.0) * g.adjoint(), id);
  builder.entangle();
  builder.local(rot2(gamma + kPi, 0.0), id);
  builder.entangle();
  builder.local(g, id);
  builder.local(w, w);
}

}  // namespace

namespace {

// With skip_zero set, terms whose angle vanishes are left out. Each such term
// is the identity up to a sign, so the unitary is unchanged up to phase.
Circuit build_v(double alpha, double beta, double delta, bool skip_zero) {
  LayeredBuilder builder;
  const std::array<std::pair<Mat2, double>, 3> terms = {{
      {Mat2::Identity(), delta},
      {rot2(-kPi / 2.0, 0.0), beta},        // Z -> Y
      {rot2(kPi / 2.0, kPi / 2.0), alpha},  // Z -> X
  }};
  for (const auto& [w, angle] : terms) {
    if (skip_zero && std::abs(angle) <= tol::kAlgebra) continue;
    add_zz_like(builder, w, angle);
  }
  return builder.build();
}

}  // namespace

Circuit v_circuit(double alpha, double beta, double delta) {
  return build_v(alpha, beta, delta, false);
}

Circuit universal_circuit(const FifteenParams& p) {
  Circuit circuit;
  circuit.add(GateOp::rotation(Qubit::electron, p.a.theta, p.a.phi));
  circuit.add(GateOp::virtual_z(Qubit::electron, p.a.phi_z));
  circuit.add(GateOp::rotation(Qubit::nuclear, p.b.theta, p.b.phi));
  circuit.add(GateOp::virtual_z(Qubit::nuclear, p.b.phi_z));
  circuit.append(v_circuit(p.alpha, p.beta, p.delta));
  circuit.add(GateOp::rotation(Qubit::electron, p.c.theta, p.c.phi));
  circuit.add(GateOp::virtual_z(Qubit::electron, p.c.phi_z));
  circuit.add(GateOp::rotation(Qubit::nuclear, p.d.theta, p.d.phi));
  circuit.add(GateOp::virtual_z(Qubit::nuclear, p.d.phi_z));
  return circuit;
}

namespace {

bool is_identity_gate(const GateOp& op) {
  if (op.is_rotation()) {
    return op.theta <= tol::kAlgebra || op.theta >= 4.0 * kPi - tol::kAlgebra;
  }
  if (op.is_virtual_z()) return std::abs(op.phi) <= tol::kAlgebra;
  return false;
}

}  // namespace

Circuit hardware_circuit(const FifteenParams& p) {
  Circuit full;
  full.add(GateOp::rotation(Qubit::electron, p.a.theta, p.a.phi));
  full.add(GateOp::virtual_z(Qubit::electron, p.a.phi_z));
  full.add(GateOp::rotation(Qubit::nuclear, p.b.theta, p.b.phi));
  full.add(GateOp::virtual_z(Qubit::nuclear, p.b.phi_z));
  full.append(build_v(p.alpha, p.beta, p.delta, true));
  full.add(GateOp::rotation(Qubit::electron, p.c.theta, p.c.phi));
  full.add(GateOp::virtual_z(Qubit::electron, p.c.phi_z));
  full.add(GateOp::rotation(Qubit::nuclear, p.d.theta, p.d.phi));
  full.add(GateOp::virtual_z(Qubit::nuclear, p.d.phi_z));

  Circuit pruned;
  for (const GateOp& op : full.ops) {
    if (!is_identity_gate(op)) pruned.add(op);
  }
  return pruned;
}

}  // namespace nvforge
