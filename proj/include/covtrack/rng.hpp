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

#include <array>
#include <cstdint>
#include <initializer_list>

namespace covtrack {

// Counter-based random stream (Philox4x32-10, Salmon et al. SC 2011).
//
// A stream is identified by (seed, stream). Two CounterRng objects built
// with the same pair produce the same sequence no matter when or on which
// thread they are consumed, which is what makes parallel particle
// propagation bit-identical to the serial run.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Next raw 64-bit word.
  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0, 1).
  double uniform() noexcept;

  /// Standard normal via Box-Muller (second value of each pair is cached).
  double normal() noexcept;

 private:
  std::array<std::uint32_t, 4> next_block() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Mixes identifiers (frame, particle, purpose, ...) into a stream id so
/// that distinct tuples get statistically independent streams.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts) noexcept;

}  // namespace covtrack
