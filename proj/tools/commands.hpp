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

#include <filesystem>

#include "covtrack/config.hpp"

namespace covtrack::cli {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitTrackLost = 4;

int cmd_track(const RunConfig& cfg);
int cmd_eval(const std::filesystem::path& track_csv, const std::filesystem::path& gt_csv);
int cmd_synth(const RunConfig& cfg);
int cmd_mds(const RunConfig& cfg);

/// Maps an exception in flight to the exit-code taxonomy and prints it.
int report_error_and_exit_code();

}  // namespace covtrack::cli
