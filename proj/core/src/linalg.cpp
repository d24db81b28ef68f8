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

#include "nvforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nvforge/errors.hpp"

namespace nvforge {

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Mat4 kron(const Mat2& electron, const Mat2& nuclear) {
  Mat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = electron(i, j) * nuclear;
    }
  }
  return out;
}

namespace {

template <typename Mat>
Mat expm_hermitian_impl(const Mat& h, double scale) {
  const double residual = hermiticity_residual(h);
  if (!(residual <= tol::kInput)) {
    std::ostringstream msg;
    msg << "expm_hermitian: generator is not Hermitian (residual " << residual
        << ")";
    throw PreconditionError(msg.str());
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Mat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(herm);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  Mat phases = Mat::Zero();
  for (int k = 0; k < values.size(); ++k) {
    phases(k, k) = std::exp(kI * (scale * values(k)));
  }
  return vectors * phases * vectors.adjoint();
}

}  // namespace

Mat4 expm_hermitian(const Mat4& h, double scale) {
  return expm_hermitian_impl(h, scale);
}

Mat2 expm_hermitian(const Mat2& h, double scale) {
  return expm_hermitian_impl(h, scale);
}

double fidelity_upto_phase(const Mat4& u, const Mat4& v) {
  return std::min(1.0, std::abs((u.adjoint() * v).trace()) / 4.0);
}

double fidelity_upto_phase(const Mat2& u, const Mat2& v) {
  return std::min(1.0, std::abs((u.adjoint() * v).trace()) / 2.0);
}

namespace {

struct RealBasisCandidate {
  RealMat4 basis;
  double off_diagonal = 0.0;
};

RealBasisCandidate diagonalize_combination(const RealMat4& re,
                                           const RealMat4& im,
                                           const Mat4& m, double angle) {
  const RealMat4 combo = std::cos(angle) * re + std::sin(angle) * im;
  Eigen::SelfAdjointEigenSolver<RealMat4> solver(combo);
  RealBasisCandidate candidate;
  candidate.basis = solver.eigenvectors();
  const Mat4 o = candidate.basis.cast<Complex>();
  Mat4 diag = o.transpose() * m * o;
  diag.diagonal().setZero();
  candidate.off_diagonal = diag.cwiseAbs().maxCoeff();
  return candidate;
}

}  // namespace

SymmetricUnitaryEigen eig_symmetric_unitary(const Mat4& m) {
  const double unitarity = unitarity_residual(m);
  if (!(unitarity <= tol::kInput)) {
    std::ostringstream msg;
    msg << "eig_symmetric_unitary: input is not unitary (residual "
        << unitarity << ")";
    throw PreconditionError(msg.str());
  }
  const double symmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(symmetry <= tol::kInput)) {
    std::ostringstream msg;
    msg << "eig_symmetric_unitary: input is not complex-symmetric (residual "
        << symmetry << ")";
    throw PreconditionError(msg.str());
  }
  const Mat4 sym = 0.5 * (m + m.transpose());
  const RealMat4 re = sym.real();
  const RealMat4 im = sym.imag();

  // Irrational-ish angles so no pair of distinct eigenphases is likely to
  // collide under every combination.
  static constexpr std::array<double, 8> kAngles = {
      0.4142135623730951, 1.2360679774997898, 2.6457513110645907,
      0.7320508075688772, 1.9129311827723892, 2.2360679774997898,
      0.1415926535897932, 2.9999999999999999};

  RealBasisCandidate best;
  best.off_diagonal = std::numeric_limits<double>::infinity();
  for (double angle : kAngles) {
    RealBasisCandidate candidate = diagonalize_combination(re, im, sym, angle);
    if (candidate.off_diagonal < best.off_diagonal) best = candidate;
    if (best.off_diagonal <= tol::kAlgebra) break;
  }
  if (!(best.off_diagonal <= tol::kOutput)) {
    std::ostringstream msg;
    msg << "eig_symmetric_unitary: could not find a real orthogonal "
           "eigenbasis (best off-diagonal residual "
        << best.off_diagonal << ")";
    throw InternalError(msg.str());
  }

  SymmetricUnitaryEigen result;
  result.basis = best.basis;
  if (result.basis.determinant() < 0.0) result.basis.col(0) *= -1.0;
  const Mat4 o = result.basis.cast<Complex>();
  const Mat4 diag = o.transpose() * sym * o;
  for (int k = 0; k < 4; ++k) {
    result.phases[k] = wrap_angle(std::arg(diag(k, k)));
  }
  return result;
}

void validate_density_matrix(const DensityMat4& rho) {
  std::ostringstream msg;
  const double herm = hermiticity_residual(rho);
  if (!(herm <= tol::kAlgebra)) {
    msg << "density matrix is not Hermitian (residual " << herm << ")";
    throw PreconditionError(msg.str());
  }
  const Complex trace = rho.trace();
  if (!(std::abs(trace - 1.0) <= tol::kInput)) {
    msg << "density matrix trace is " << trace.real() << ", expected 1";
    throw PreconditionError(msg.str());
  }
  const Mat4 herm_part = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(herm_part,
                                             Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -tol::kInput) {
    msg << "density matrix has negative eigenvalue " << smallest;
    throw PreconditionError(msg.str());
  }
}

double purity(const DensityMat4& rho) { return (rho * rho).trace().real(); }

}  // namespace nvforge
