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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sedkit/annot.hpp"
#include "sedkit/config.hpp"

namespace sedkit {

struct ClassCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    /// Class seen in neither reference nor system output.
    [[nodiscard]] bool absent() const noexcept { return tp == 0 && fp == 0 && fn == 0; }

    ClassCounts& operator+=(const ClassCounts& other) noexcept {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        return *this;
    }

    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Matching outcome for one class within one clip.
struct ClassMatch {
    ClassLabel label;
    std::vector<std::pair<TimedEvent, TimedEvent>> matched;  // (reference, system)
    std::vector<TimedEvent> missed;                          // unmatched reference events
    std::vector<TimedEvent> spurious;                        // unmatched system events

    [[nodiscard]] ClassCounts counts() const noexcept { return {matched.size(), spurious.size(), missed.size()}; }
};

/// Matching outcome for one clip, classes in lexicographic order.
struct MatchDetail {
    std::vector<ClassMatch> classes;
};

struct ClassResult {
    ClassLabel label;
    ClassCounts counts;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool absent = false;
};

struct EvalReport {
    EvalConfig config;
    /// One row per class of the ensemble, in ensemble order.
    std::vector<ClassResult> per_class;
    /// Classes that occur in the inputs but are not part of the ensemble; not averaged.
    std::vector<ClassResult> unscored;
    double macro_f1 = 0.0;
    std::size_t clip_count = 0;

    [[nodiscard]] std::size_t class_count() const noexcept { return per_class.size(); }
    [[nodiscard]] const ClassResult* find(const ClassLabel& label) const noexcept;
};

/// Same label, onset within the onset collar and offset within
/// max(offset_collar, offset_length_pct * reference length). Inclusive.
[[nodiscard]] bool event_matches(const TimedEvent& ref, const TimedEvent& sys, const EvalConfig& cfg);

/// Maximum-cardinality one-to-one matching per class. Augmenting paths are
/// explored in (onset, offset) order so the chosen matching is deterministic.
[[nodiscard]] MatchDetail match_clip(std::span<const TimedEvent> ref, std::span<const TimedEvent> sys, const EvalConfig& cfg);

/// Class-wise sum over clips.
[[nodiscard]] std::map<ClassLabel, ClassCounts> accumulate(std::span<const MatchDetail> details);

/// 2tp / (2tp + fp + fn), or 0 for an absent class.
[[nodiscard]] double f1_class(const ClassCounts& counts) noexcept;
[[nodiscard]] double precision(const ClassCounts& counts) noexcept;
[[nodiscard]] double recall(const ClassCounts& counts) noexcept;

/// Unweighted mean over the classes. Throws std::invalid_argument when empty.
[[nodiscard]] double macro_f1(const std::map<ClassLabel, double>& per_class);

struct EvalOptions {
    /// Class ensemble to average over; defaults to the reference labels.
    std::optional<std::vector<ClassLabel>> classes;
    /// Worker threads for per-clip matching. Results do not depend on it.
    unsigned jobs = 1;
};

/// Matches every clip (clips missing on one side count as all-FN or all-FP),
/// accumulates the counts and averages F1 over the class ensemble. Throws
/// std::invalid_argument if the ensemble is empty.
[[nodiscard]] EvalReport evaluate(const StrongAnnotationSet& ref,
                                  const StrongAnnotationSet& sys,
                                  const EvalConfig& cfg,
                                  const EvalOptions& options = {});

/// Per-clip match details, in clip order, for the union of clips.
[[nodiscard]] std::vector<std::pair<ClipId, MatchDetail>> match_corpus(const StrongAnnotationSet& ref,
                                                                      const StrongAnnotationSet& sys,
                                                                      const EvalConfig& cfg,
                                                                      unsigned jobs = 1);

/// Class rows plus a macro-average row, F1 in percent.
[[nodiscard]] std::string render_report_table(const EvalReport& report);
/// Single JSON document.
[[nodiscard]] std::string render_report_json(const EvalReport& report);
/// One JSON record per class and a final record for the macro average.
[[nodiscard]] std::string render_report_jsonl(const EvalReport& report);

}  // namespace sedkit
