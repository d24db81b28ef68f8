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

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <numbers>

namespace nvforge {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using RealMat4 = Eigen::Matrix4d;

/// Mixed two-qubit state; Hermitian, unit trace, positive semidefinite.
using DensityMat4 = Mat4;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

namespace tol {
inline constexpr double kInput = 1e-10;    // validating caller input
inline constexpr double kOutput = 1e-9;    // guarantees on returned values
inline constexpr double kAlgebra = 1e-12;  // internal identities
}  // namespace tol

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Largest entry of |U^dagger U - I|; NaN if any entry is NaN.
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .template maxCoeff<Eigen::PropagateNaN>();
}

/// Largest entry of |H - H^dagger|; NaN if any entry is NaN.
template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& h) {
  return (h - h.adjoint()).cwiseAbs().template maxCoeff<Eigen::PropagateNaN>();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u,
                double tolerance = tol::kInput) {
  return unitarity_residual(u) <= tolerance;
}

/// Kronecker product; the first factor is the electron qubit.
Mat4 kron(const Mat2& electron, const Mat2& nuclear);

/// exp(i * scale * h) for Hermitian h, computed spectrally.
/// Throws PreconditionError when h is not Hermitian within tol::kInput.
Mat4 expm_hermitian(const Mat4& h, double scale);
Mat2 expm_hermitian(const Mat2& h, double scale);

/// |Tr(U^dagger V)| / 4. Equals 1 iff U and V agree up to a global phase.
double fidelity_upto_phase(const Mat4& u, const Mat4& v);

/// |Tr(U^dagger V)| / 2 for single-qubit operators.
double fidelity_upto_phase(const Mat2& u, const Mat2& v);

struct SymmetricUnitaryEigen {
  std::array<double, 4> phases{};  // each in (-pi, pi]
  RealMat4 basis;                  // columns are eigenvectors, det = +1
};

/// Eigendecomposition m = O diag(exp(i phases)) O^T of a complex-symmetric
/// unitary with a real orthogonal O. Degenerate eigenspaces are handled.
///
/// Re(m) and Im(m) are commuting real symmetric matrices sharing the
/// eigenbasis O, so O is obtained from a real symmetric solve on a linear
/// combination of the two. A small fixed set of combinations is tried and the
/// one with the smallest off-diagonal residual is kept.
///
/// Throws PreconditionError if m is not unitary or not symmetric within
/// tol::kInput, InternalError if no real eigenbasis reaches tol::kOutput.
SymmetricUnitaryEigen eig_symmetric_unitary(const Mat4& m);

/// Throws PreconditionError unless rho is Hermitian, has unit trace and no
/// eigenvalue below -1e-10.
void validate_density_matrix(const DensityMat4& rho);

/// Tr(rho^2).
double purity(const DensityMat4& rho);

}  // namespace nvforge
