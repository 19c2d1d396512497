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

#include "sedkit/config.hpp"

#include <cmath>
#include <string>

#include "sedkit/error.hpp"

namespace sedkit {

namespace {

void require_non_negative(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ConfigError(std::string(name) + " must be a finite non-negative number");
    }
}

}  // namespace

void NormalizeConfig::validate() const {
    require_non_negative(min_gap, "min_gap");
    require_non_negative(min_event_duration, "min_event_duration");
    if (max_clip_duration) {
        require_non_negative(*max_clip_duration, "max_clip_duration");
    }
}

void DecodeConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("threshold must lie strictly between 0 and 1");
    }
    if (median_window < 1 || median_window % 2 == 0) {
        throw ConfigError("median window must be an odd number >= 1, got " + std::to_string(median_window));
    }
}

void EvalConfig::validate() const {
    require_non_negative(onset_collar, "onset_collar");
    require_non_negative(offset_collar, "offset_collar");
    require_non_negative(offset_length_pct, "offset_length_pct");
    if (offset_length_pct > 1.0) {
        throw ConfigError("offset_length_pct must not exceed 1");
    }
}

}  // namespace sedkit
