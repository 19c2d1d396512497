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

#include <optional>

namespace sedkit {

/// Annotation conventions: minimum pause between same-class events, minimum
/// event length and clip length, all in seconds.
struct NormalizeConfig {
    double min_gap = 0.150;
    double min_event_duration = 0.250;
    std::optional<double> max_clip_duration = 10.0;

    /// Throws ConfigError on negative or non-finite values.
    void validate() const;
};

/// Frame-activation decoding parameters.
struct DecodeConfig {
    double threshold = 0.5;
    int median_window = 51;

    /// Throws ConfigError unless 0 < threshold < 1 and median_window is odd and >= 1.
    void validate() const;
};

/// Collar tolerances for event matching. The offset tolerance for a reference
/// event of length L is max(offset_collar, offset_length_pct * L).
struct EvalConfig {
    double onset_collar = 0.200;
    double offset_collar = 0.200;
    double offset_length_pct = 0.20;

    void validate() const;
};

}  // namespace sedkit
