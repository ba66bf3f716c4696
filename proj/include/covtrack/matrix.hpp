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
#include <cstdint>
#include <iosfwd>

#include "covtrack/errors.hpp"

namespace covtrack {

// Symmetric real matrix. Construction symmetrizes the input by averaging
// with its transpose and rejects non-finite entries, so a SymMatrix is
// exactly symmetric entry-by-entry for its whole lifetime.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  double frobenius_norm() const { return mat_.norm(); }

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double scale) const;

  bool is_zero() const { return (mat_.array() == 0.0).all(); }

 private:
  struct AlreadySymmetric {};
  SymMatrix(Eigen::MatrixXd m, AlreadySymmetric) : mat_(std::move(m)) {}

  Eigen::MatrixXd mat_;
};

// Symmetric positive definite matrix. Construction checks the spectrum and
// throws DefinitenessError when the smallest eigenvalue falls at or below
// 1e-12 times the largest; callers wanting repair must regularize first.
class SpdMatrix {
 public:
  explicit SpdMatrix(const SymMatrix& s);
  explicit SpdMatrix(Eigen::MatrixXd m) : SpdMatrix(SymMatrix(std::move(m))) {}

  static SpdMatrix identity(int dim);

  int dim() const { return sym_.dim(); }
  const SymMatrix& sym() const { return sym_; }
  const Eigen::MatrixXd& mat() const { return sym_.mat(); }
  double operator()(int i, int j) const { return sym_(i, j); }

 private:
  SymMatrix sym_;
};

// Entry-wise standard deviations for the symmetric noise matrix of the
// log-space template walk, plus the seed of its counter-based stream.
class NoiseSpec {
 public:
  NoiseSpec(SymMatrix sigma, std::uint64_t rng_seed);

  /// All entries share one standard deviation.
  static NoiseSpec uniform(int dim, double sigma, std::uint64_t rng_seed);

  int dim() const { return sigma_.dim(); }
  const SymMatrix& sigma() const { return sigma_; }
  std::uint64_t rng_seed() const { return rng_seed_; }

 private:
  SymMatrix sigma_;
  std::uint64_t rng_seed_;
};

// Text fixture format: first line the dimension, then dim rows of dim
// space-separated decimals at 17 significant digits (round-trip exact).
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& in);

}  // namespace covtrack
