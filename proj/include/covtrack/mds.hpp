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

#pragma once

#include <Eigen/Core>

namespace covtrack {

struct MdsResult {
  Eigen::MatrixXd coords;  // n x effective_dim, column k scaled by sqrt(lambda_k)
  int requested_dim;
  int effective_dim;       // positive eigenvalues actually available
  bool truncated;          // effective_dim < requested_dim
  double relative_stress;  // || d_embedded - D ||_F / || D ||_F over pairs
};

/// Classical (Torgerson) multidimensional scaling: double-center the
/// squared distances, B = -1/2 J D.^2 J, and embed with the top
/// eigenpairs. Output coordinates are centered; they are unique only up
/// to rigid motion, so compare distance matrices, not raw coordinates.
MdsResult classical_mds(const Eigen::MatrixXd& distances, int dim);

}  // namespace covtrack
