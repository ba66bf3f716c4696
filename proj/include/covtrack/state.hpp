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

namespace covtrack {

// Target pose and velocity: center position (pixels), velocity
// (pixels/frame), uniform scale factor and rotation (radians).
struct KineticState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double h = 1.0;
  double theta = 0.0;
};

// Base target size in pixels at scale h = 1, fixed when tracking starts.
struct TargetExtent {
  double width = 0.0;
  double height = 0.0;
};

}  // namespace covtrack
