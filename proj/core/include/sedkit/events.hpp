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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sedkit/annot.hpp"
#include "sedkit/config.hpp"

namespace sedkit {

/// Frame x class activation grid for one clip, row-major, values in [0, 1].
class ActivationMatrix {
  public:
    /// 40 ms frames with 50% overlap.
    static constexpr double kDefaultHop = 0.020;

    /// Throws ConfigError when hop <= 0, the value count is not a multiple of
    /// the class count, or a value falls outside [0, 1].
    ActivationMatrix(ClipId clip, double hop, std::vector<ClassLabel> classes, std::vector<double> values);

    [[nodiscard]] const ClipId& clip() const noexcept { return clip_; }
    [[nodiscard]] double hop() const noexcept { return hop_; }
    [[nodiscard]] const std::vector<ClassLabel>& classes() const noexcept { return classes_; }
    [[nodiscard]] std::size_t frames() const noexcept { return classes_.empty() ? 0 : values_.size() / classes_.size(); }
    [[nodiscard]] double at(std::size_t frame, std::size_t cls) const { return values_.at(frame * classes_.size() + cls); }
    [[nodiscard]] std::span<const double> row(std::size_t frame) const {
        return std::span<const double>(values_).subspan(frame * classes_.size(), classes_.size());
    }

  private:
    ClipId clip_;
    double hop_;
    std::vector<ClassLabel> classes_;
    std::vector<double> values_;
};

struct PolyphonySegment {
    double start;
    double end;
    std::size_t count;

    friend bool operator==(const PolyphonySegment&, const PolyphonySegment&) = default;
};

/// Sorted, non-overlapping, maximally coalesced segments from the first onset
/// to the last offset. Zero-count segments appear only between active regions.
struct PolyphonyProfile {
    std::vector<PolyphonySegment> segments;

    [[nodiscard]] std::size_t max_count() const noexcept;
    /// Total length of segments with count == level.
    [[nodiscard]] double time_at(std::size_t level) const noexcept;
};

/// Per class, replaces consecutive events separated by less than `min_gap`
/// (overlaps included) with their hull, until no such pair remains. A gap of
/// exactly `min_gap` is kept. Output is sorted.
[[nodiscard]] std::vector<TimedEvent> merge_gaps(std::span<const TimedEvent> events, double min_gap);

/// Removes events shorter than `min_duration`; an event of exactly
/// `min_duration` survives. Order is preserved.
[[nodiscard]] std::vector<TimedEvent> drop_short(std::span<const TimedEvent> events, double min_duration);

/// merge_gaps followed by drop_short.
[[nodiscard]] std::vector<TimedEvent> normalize(std::span<const TimedEvent> events, const NormalizeConfig& cfg);

/// Binary median filter with a window shrunk at the sequence edges. When the
/// effective window is evenly split the input value is kept. Throws
/// ConfigError for an even or non-positive window.
[[nodiscard]] std::vector<std::uint8_t> median_filter_binary(std::span<const std::uint8_t> seq, int window);

/// Threshold (>=), median-filter each class column, then turn each run of
/// active frames [i, j] into an event (i * hop, (j + 1) * hop). Sorted output.
[[nodiscard]] std::vector<TimedEvent> decode(const ActivationMatrix& act, const DecodeConfig& cfg);

/// Class-agnostic sweep line over all event boundaries.
[[nodiscard]] PolyphonyProfile polyphony(std::span<const TimedEvent> events);

/// Activation file:
///   header  `filename<TAB>hop<TAB>class1<TAB>class2...`
///   rows    `clip<TAB>frame_index<TAB>p1<TAB>p2...`
/// The header's second field is a number in seconds, `hop=<seconds>`, or the
/// literal `hop`, in which case `default_hop` applies. Frames of one clip must
/// be contiguous and numbered from 0. Throws ParseError.
[[nodiscard]] std::vector<ActivationMatrix> parse_activations(std::string_view text,
                                                              double default_hop = ActivationMatrix::kDefaultHop);

/// Inverse of parse_activations (hop written as a number, 6 decimals per value).
[[nodiscard]] std::string serialize_activations(std::span<const ActivationMatrix> matrices);

}  // namespace sedkit
