// Copyright 2026 The sedkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace sedkit {

/// Slack applied to every time comparison. Inputs are millisecond-quantized,
/// so one nanosecond absorbs binary rounding (1.15 - 1.0 != 0.15) without
/// changing any decision a human would make.
inline constexpr double kTimeEpsilon = 1e-9;

[[nodiscard]] constexpr bool time_less(double a, double b) noexcept { return a < b - kTimeEpsilon; }
[[nodiscard]] constexpr bool time_leq(double a, double b) noexcept { return a <= b + kTimeEpsilon; }

}  // namespace sedkit
