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

#include <cstdint>
#include <span>
#include <vector>

#include "covtrack/matrix.hpp"

namespace covtrack {

// Geometry of the SPD manifold with the affine-invariant metric: spectral
// matrix functions, exp/log maps, geodesic distance, the log-space random
// walk used for template propagation, and weighted log-Euclidean means.
// All functions are pure; dimensions are arbitrary (the tracker uses 9).

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

/// Symmetric eigendecomposition, eigenvalues ascending.
EigenDecomposition sym_eig(const SymMatrix& s);

/// Matrix exponential of a symmetric matrix, V diag(exp lambda) V^T.
SpdMatrix sym_exp(const SymMatrix& s);

/// Matrix logarithm of an SPD matrix; inverse of sym_exp.
SymMatrix sym_log(const SpdMatrix& p);

/// Principal square root of an SPD matrix.
SpdMatrix sym_sqrt(const SpdMatrix& p);

/// Manifold exponential map at `base`: base^1/2 exp(base^-1/2 y base^-1/2) base^1/2.
SpdMatrix exp_map(const SpdMatrix& base, const SymMatrix& y);

/// Manifold logarithm map at `base`; inverse of exp_map.
SymMatrix log_map(const SpdMatrix& base, const SpdMatrix& dest);

/// Affine-invariant metric trace(base^-1 y_k base^-1 y_l) on the tangent
/// space at `base`.
double inner_product(const SpdMatrix& base, const SymMatrix& y_k, const SymMatrix& y_l);

/// Geodesic distance sqrt(sum_k ln^2 lambda_k) over the generalized
/// eigenvalues lambda_k solving lambda_k a v = b v.
double geodesic_distance(const SpdMatrix& a, const SpdMatrix& b);

/// The symmetric Gaussian noise matrix of the log-space walk: entries
/// w[i][j] == w[j][i] ~ N(0, sigma[i][j]^2). Deterministic in
/// (spec.rng_seed, draw_index); parallel draws need no shared state.
SymMatrix draw_symmetric_noise(const NoiseSpec& spec, std::uint64_t draw_index);

/// One step of the template random walk, exp(log(prev) + w). The result is
/// SPD by construction for every draw.
SpdMatrix sample_log_walk(const SpdMatrix& prev, const NoiseSpec& spec,
                          std::uint64_t draw_index);

struct EigBounds {
  double lower;  // lower bound on the smallest eigenvalue
  double upper;  // upper bound on the largest eigenvalue
};

/// Extremal eigenvalue bounds for a dim x dim symmetric matrix with entries
/// in [a, b] (Zhan 2006). For dim = 9 the constants specialize to (9, 80).
EigBounds eig_bounds(double a, double b, int dim);

/// exp(sum_i weights[i] log(mats[i])); weights nonnegative, summing to 1.
SpdMatrix log_euclidean_mean(std::span<const double> weights,
                             std::span<const SpdMatrix> mats);

}  // namespace covtrack
