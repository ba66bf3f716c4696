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

#include <stdexcept>
#include <string>

namespace covtrack {

/// Caller broke a documented precondition (dimension mismatch, bad range, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: eigensolver non-convergence, overflow, ill-conditioning.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix required to be strictly positive definite is not.
class DefinitenessError : public NumericError {
 public:
  explicit DefinitenessError(const std::string& what) : NumericError(what) {}
};

/// Requested image region has no usable overlap with the frame.
class OutOfViewError : public std::runtime_error {
 public:
  explicit OutOfViewError(const std::string& what) : std::runtime_error(what) {}
};

/// File or stream problem.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration or input schema.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace covtrack
