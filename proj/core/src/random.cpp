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

#include "nvforge/random.hpp"

namespace nvforge {

namespace {

template <typename M>
M haar(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  M z;
  for (int r = 0; r < z.rows(); ++r) {
    for (int c = 0; c < z.cols(); ++c) z(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<M> qr(z);
  M q = qr.householderQ();
  const M r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace

Mat4 haar_unitary4(std::mt19937_64& rng) { return haar<Mat4>(rng); }
Mat2 haar_unitary2(std::mt19937_64& rng) { return haar<Mat2>(rng); }

}  // namespace nvforge
