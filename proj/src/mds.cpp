// Copyright 2026 The covtrack Authors
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

#include "covtrack/mds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "covtrack/errors.hpp"

namespace covtrack {

MdsResult classical_mds(const Eigen::MatrixXd& distances, int dim) {
  const Eigen::Index n = distances.rows();
  if (n < 2 || distances.cols() != n) {
    throw ContractError("classical_mds: need a square distance matrix with n >= 2");
  }
  if (dim < 1) throw ContractError("classical_mds: dim must be positive");
  if (!distances.allFinite() || (distances.array() < 0.0).any()) {
    throw ContractError("classical_mds: distances must be finite and nonnegative");
  }
  if ((distances - distances.transpose()).cwiseAbs().maxCoeff() > 1e-9 ||
      distances.diagonal().cwiseAbs().maxCoeff() > 1e-12) {
    throw ContractError("classical_mds: matrix must be symmetric with zero diagonal");
  }

  const Eigen::MatrixXd squared = distances.array().square();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd gram = -0.5 * centering * squared * centering;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (gram + gram.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericError("classical_mds: eigensolver did not converge");
  }

  // Eigenvalues ascend; walk from the top, keeping only genuinely positive
  // ones (a distance matrix that is not Euclidean-realizable in `dim`
  // dimensions yields fewer usable eigenpairs than requested).
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
  const double max_eig = eigenvalues[n - 1];
  const double positive_tol = std::max(1e-12, 1e-12 * std::abs(max_eig));
  int available = 0;
  while (available < dim && available < n &&
         eigenvalues[n - 1 - available] > positive_tol) {
    ++available;
  }

  MdsResult result;
  result.requested_dim = dim;
  result.effective_dim = available;
  result.truncated = available < dim;
  result.coords.resize(n, available);
  for (int k = 0; k < available; ++k) {
    result.coords.col(k) =
        solver.eigenvectors().col(n - 1 - k) * std::sqrt(eigenvalues[n - 1 - k]);
  }

  double residual_sq = 0.0;
  double total_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double embedded =
          available > 0 ? (result.coords.row(i) - result.coords.row(j)).norm() : 0.0;
      const double target = distances(i, j);
      residual_sq += (embedded - target) * (embedded - target);
      total_sq += target * target;
    }
  }
  result.relative_stress = total_sq > 0.0 ? std::sqrt(residual_sq / total_sq) : 0.0;
  return result;
}

}  // namespace covtrack
