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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sedkit/annot.hpp"

namespace sedkit {

struct ClassStats {
    ClassLabel label;
    std::size_t clip_count = 0;
    std::size_t event_count = 0;
    std::optional<double> mean_duration;
    std::optional<double> median_duration;
};

/// Table of per-class rows plus an all-classes total (clips counted once).
struct ClassStatsTable {
    std::vector<ClassStats> classes;
    std::size_t total_clips = 0;
    std::size_t total_events = 0;
    std::optional<double> total_mean_duration;
    std::optional<double> total_median_duration;
};

struct WeakClassCount {
    ClassLabel label;
    std::size_t clip_count = 0;
};

struct WeakClassStatsTable {
    std::vector<WeakClassCount> classes;
    std::size_t total_occurrences = 0;
    std::size_t total_clips = 0;
};

/// Fractions for the buckets 1, 2 and "3 and more"; absent for an empty corpus.
using BucketProportions = std::optional<std::array<double, 3>>;

struct ClassesPerClipStats {
    BucketProportions proportion;
    std::size_t clip_count = 0;
};

/// Time proportions use event-covered time as the denominator; clips are
/// bucketed by their maximum instantaneous polyphony.
struct PolyphonyStats {
    BucketProportions time_proportion;
    BucketProportions clip_proportion;
    double covered_time = 0.0;
    std::size_t clip_count = 0;
};

struct HistogramBin {
    double lower_edge;
    std::size_t count;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Non-empty bins only, ascending.
struct DurationHistogram {
    ClassLabel label;
    double bin_width;
    std::vector<HistogramBin> bins;
};

/// Middle value, or the mean of the two middle values. Empty input -> nullopt.
[[nodiscard]] std::optional<double> median(std::vector<double> values);

[[nodiscard]] ClassStatsTable class_stats(const StrongAnnotationSet& set);
[[nodiscard]] WeakClassStatsTable weak_class_stats(const WeakAnnotationSet& set);
[[nodiscard]] ClassesPerClipStats classes_per_clip(const WeakAnnotationSet& set);
[[nodiscard]] ClassesPerClipStats classes_per_clip(const StrongAnnotationSet& set);
[[nodiscard]] PolyphonyStats overlap_stats(const StrongAnnotationSet& set);
/// Throws ConfigError unless bin_width > 0.
[[nodiscard]] std::vector<DurationHistogram> duration_histogram(const StrongAnnotationSet& set, double bin_width);

// Rendering: aligned text tables and one-JSON-record-per-row output.

[[nodiscard]] std::string render_class_stats(const ClassStatsTable& table);
[[nodiscard]] std::string render_weak_class_stats(const WeakClassStatsTable& table);
[[nodiscard]] std::string render_classes_per_clip(const ClassesPerClipStats& stats);
[[nodiscard]] std::string render_overlap_stats(const PolyphonyStats& stats);
[[nodiscard]] std::string render_histograms(const std::vector<DurationHistogram>& histograms);

[[nodiscard]] std::string class_stats_jsonl(const ClassStatsTable& table);
[[nodiscard]] std::string weak_class_stats_jsonl(const WeakClassStatsTable& table);
[[nodiscard]] std::string classes_per_clip_jsonl(const ClassesPerClipStats& stats);
[[nodiscard]] std::string overlap_stats_jsonl(const PolyphonyStats& stats);
[[nodiscard]] std::string histograms_jsonl(const std::vector<DurationHistogram>& histograms);

}  // namespace sedkit
