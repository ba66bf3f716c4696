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

#include "covtrack/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "covtrack/rng.hpp"

namespace covtrack {
namespace {

// exp(709) is the last finite double; anything above overflows.
constexpr double kMaxExpEigenvalue = 700.0;

void require_same_dim(int a, int b, const char* where) {
  if (a != b) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ContractError(msg.str());
  }
}

EigenDecomposition decompose(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sym_eig: eigensolver did not converge (dim=" << m.rows()
        << ", frobenius=" << m.norm() << ", max|entry|="
        << m.cwiseAbs().maxCoeff() << ")";
    throw NumericError(msg.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// V diag(f(lambda)) V^T for a scalar spectral function f.
template <typename F>
Eigen::MatrixXd spectral_apply(const EigenDecomposition& decomp, F&& f) {
  Eigen::VectorXd mapped = decomp.eigenvalues;
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped[i] = f(mapped[i]);
  return decomp.eigenvectors * mapped.asDiagonal() * decomp.eigenvectors.transpose();
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& s) { return decompose(s.mat()); }

SpdMatrix sym_exp(const SymMatrix& s) {
  const EigenDecomposition decomp = decompose(s.mat());
  const double max_eig = decomp.eigenvalues.maxCoeff();
  if (max_eig > kMaxExpEigenvalue) {
    std::ostringstream msg;
    msg << "sym_exp: overflow, max eigenvalue " << max_eig;
    throw NumericError(msg.str());
  }
  return SpdMatrix(SymMatrix(spectral_apply(decomp, [](double x) { return std::exp(x); })));
}

SymMatrix sym_log(const SpdMatrix& p) {
  const EigenDecomposition decomp = decompose(p.mat());
  return SymMatrix(spectral_apply(decomp, [](double x) { return std::log(x); }));
}

SpdMatrix sym_sqrt(const SpdMatrix& p) {
  const EigenDecomposition decomp = decompose(p.mat());
  return SpdMatrix(SymMatrix(spectral_apply(decomp, [](double x) { return std::sqrt(x); })));
}

SpdMatrix exp_map(const SpdMatrix& base, const SymMatrix& y) {
  require_same_dim(base.dim(), y.dim(), "exp_map");
  const EigenDecomposition decomp = decompose(base.mat());
  const Eigen::MatrixXd root =
      spectral_apply(decomp, [](double x) { return std::sqrt(x); });
  const Eigen::MatrixXd inv_root =
      spectral_apply(decomp, [](double x) { return 1.0 / std::sqrt(x); });
  const SpdMatrix inner = sym_exp(SymMatrix(inv_root * y.mat() * inv_root));
  return SpdMatrix(SymMatrix(root * inner.mat() * root));
}

SymMatrix log_map(const SpdMatrix& base, const SpdMatrix& dest) {
  require_same_dim(base.dim(), dest.dim(), "log_map");
  const EigenDecomposition decomp = decompose(base.mat());
  const Eigen::MatrixXd root =
      spectral_apply(decomp, [](double x) { return std::sqrt(x); });
  const Eigen::MatrixXd inv_root =
      spectral_apply(decomp, [](double x) { return 1.0 / std::sqrt(x); });
  const SymMatrix inner = sym_log(SpdMatrix(SymMatrix(inv_root * dest.mat() * inv_root)));
  return SymMatrix(root * inner.mat() * root);
}

double inner_product(const SpdMatrix& base, const SymMatrix& y_k, const SymMatrix& y_l) {
  require_same_dim(base.dim(), y_k.dim(), "inner_product");
  require_same_dim(base.dim(), y_l.dim(), "inner_product");
  // trace(base^-1 y_k base^-1 y_l) computed as the Frobenius inner product
  // of the whitened tangent vectors, which keeps <y,y> exactly nonnegative.
  const EigenDecomposition decomp = decompose(base.mat());
  const Eigen::MatrixXd inv_root =
      spectral_apply(decomp, [](double x) { return 1.0 / std::sqrt(x); });
  const Eigen::MatrixXd wk = inv_root * y_k.mat() * inv_root;
  const Eigen::MatrixXd wl = inv_root * y_l.mat() * inv_root;
  return (wk.array() * wl.array()).sum();
}

double geodesic_distance(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "geodesic_distance");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      b.mat(), a.mat(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw NumericError("geodesic_distance: generalized eigensolve failed");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()[k];
    if (!(lambda > 0.0)) {
      std::ostringstream msg;
      msg << "geodesic_distance: nonpositive generalized eigenvalue " << lambda
          << " (pair too ill-conditioned)";
      throw NumericError(msg.str());
    }
    const double log_lambda = std::log(lambda);
    sum += log_lambda * log_lambda;
  }
  return std::sqrt(sum);
}

SymMatrix draw_symmetric_noise(const NoiseSpec& spec, std::uint64_t draw_index) {
  CounterRng rng(spec.rng_seed(), draw_index);
  const int dim = spec.dim();
  Eigen::MatrixXd w(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double value = spec.sigma()(i, j) * rng.normal();
      w(i, j) = value;
      w(j, i) = value;
    }
  }
  return SymMatrix(std::move(w));
}

SpdMatrix sample_log_walk(const SpdMatrix& prev, const NoiseSpec& spec,
                          std::uint64_t draw_index) {
  require_same_dim(prev.dim(), spec.dim(), "sample_log_walk");
  const SymMatrix w = draw_symmetric_noise(spec, draw_index);
  if (w.is_zero()) return prev;  // zero noise walks in place, bit for bit
  return sym_exp(sym_log(prev) + w);
}

EigBounds eig_bounds(double a, double b, int dim) {
  if (a > b) throw ContractError("eig_bounds: need a <= b");
  if (dim < 1) throw ContractError("eig_bounds: dim must be positive");
  const double d = static_cast<double>(dim);
  if (std::abs(a) < b) {
    const double root = std::sqrt(a * a + (d * d - 1.0) * b * b);
    return {0.5 * (d * a - root), 0.5 * (d * b + root)};
  }
  return {d * a, d * b};
}

SpdMatrix log_euclidean_mean(std::span<const double> weights,
                             std::span<const SpdMatrix> mats) {
  if (mats.empty()) throw ContractError("log_euclidean_mean: empty input");
  if (weights.size() != mats.size()) {
    throw ContractError("log_euclidean_mean: weights/matrices length mismatch");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0) throw ContractError("log_euclidean_mean: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ContractError("log_euclidean_mean: weights must sum to 1");
  }
  const int dim = mats[0].dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    require_same_dim(dim, mats[i].dim(), "log_euclidean_mean");
    if (weights[i] == 0.0) continue;
    acc += weights[i] * sym_log(mats[i]).mat();
  }
  return sym_exp(SymMatrix(std::move(acc)));
}

}  // namespace covtrack
