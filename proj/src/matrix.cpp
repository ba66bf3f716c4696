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

#include "covtrack/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace covtrack {

SymMatrix::SymMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ContractError("SymMatrix: matrix must be square and non-empty, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw ContractError("SymMatrix: entries must be finite");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(int dim) {
  if (dim < 1) throw ContractError("SymMatrix::zero: dim must be positive");
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), AlreadySymmetric{});
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  if (other.dim() != dim()) {
    throw ContractError("SymMatrix::operator+: dimension mismatch");
  }
  return SymMatrix(mat_ + other.mat_, AlreadySymmetric{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
  if (other.dim() != dim()) {
    throw ContractError("SymMatrix::operator-: dimension mismatch");
  }
  return SymMatrix(mat_ - other.mat_, AlreadySymmetric{});
}

SymMatrix SymMatrix::operator*(double scale) const {
  return SymMatrix(mat_ * scale, AlreadySymmetric{});
}

SpdMatrix::SpdMatrix(const SymMatrix& s) : sym_(s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym_.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("SpdMatrix: eigenvalue check did not converge");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  const double max_eig = solver.eigenvalues().maxCoeff();
  if (!(min_eig > 1e-12 * max_eig) || !(min_eig > 0.0)) {
    std::ostringstream msg;
    msg << "SpdMatrix: not positive definite (lambda_min=" << min_eig
        << ", lambda_max=" << max_eig << ")";
    throw DefinitenessError(msg.str());
  }
}

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(SymMatrix(Eigen::MatrixXd::Identity(dim, dim)));
}

NoiseSpec::NoiseSpec(SymMatrix sigma, std::uint64_t rng_seed)
    : sigma_(std::move(sigma)), rng_seed_(rng_seed) {
  if ((sigma_.mat().array() < 0.0).any()) {
    throw ContractError("NoiseSpec: sigma entries must be nonnegative");
  }
}

NoiseSpec NoiseSpec::uniform(int dim, double sigma, std::uint64_t rng_seed) {
  if (sigma < 0.0) throw ContractError("NoiseSpec::uniform: sigma must be nonnegative");
  return NoiseSpec(SymMatrix(Eigen::MatrixXd::Constant(dim, dim, sigma)), rng_seed);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j == 0 ? "" : " ") << buf;
    }
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  int dim = 0;
  if (!(in >> dim) || dim < 1) {
    throw IoError("read_matrix: missing or invalid dimension line");
  }
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (!(in >> m(i, j))) {
        throw IoError("read_matrix: truncated matrix body at row " + std::to_string(i));
      }
    }
  }
  return m;
}

}  // namespace covtrack
