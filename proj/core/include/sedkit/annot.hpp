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

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sedkit/config.hpp"

namespace sedkit {

namespace detail {

/// Non-empty string with a set of forbidden characters, compared byte-wise.
template <typename Tag>
class Name {
  public:
    /// Throws std::invalid_argument when `value` is empty or contains a forbidden character.
    explicit Name(std::string value) : value_(std::move(value)) {
        if (!is_valid(value_)) {
            throw std::invalid_argument(std::string(Tag::kind) + " '" + value_ + "' is empty or contains a forbidden character");
        }
    }

    [[nodiscard]] static bool is_valid(std::string_view value) noexcept {
        return !value.empty() && value.find_first_of(Tag::forbidden) == std::string_view::npos;
    }

    [[nodiscard]] const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const Name&, const Name&) = default;
    friend bool operator==(const Name&, const Name&) = default;

  private:
    std::string value_;
};

struct ClassLabelTag {
    static constexpr const char* kind = "class label";
    static constexpr std::string_view forbidden{"\t\n\r;"};
};

struct ClipIdTag {
    static constexpr const char* kind = "clip id";
    static constexpr std::string_view forbidden{"\t\n\r"};
};

}  // namespace detail

using ClassLabel = detail::Name<detail::ClassLabelTag>;
using ClipId = detail::Name<detail::ClipIdTag>;

/// One labeled interval in seconds. Default ordering is (onset, offset, label).
struct TimedEvent {
    double onset;
    double offset;
    ClassLabel label;

    [[nodiscard]] double duration() const noexcept { return offset - onset; }
    /// onset >= 0, offset > onset, both finite.
    [[nodiscard]] bool is_valid() const noexcept;

    friend auto operator<=>(const TimedEvent&, const TimedEvent&) = default;
    friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
};

/// Clip-level tags.
struct WeakAnnotationSet {
    std::map<ClipId, std::set<ClassLabel>> entries;

    friend bool operator==(const WeakAnnotationSet&, const WeakAnnotationSet&) = default;
};

/// Per-clip event lists, kept sorted by (onset, offset, label). Each event
/// remembers the input line it came from (0 when built in memory) so that
/// validation findings can point back at the file.
class StrongAnnotationSet {
  public:
    using EventMap = std::map<ClipId, std::vector<TimedEvent>>;

    StrongAnnotationSet() = default;
    explicit StrongAnnotationSet(const EventMap& events);

    /// Throws std::invalid_argument if `event` violates the TimedEvent invariants.
    void add(const ClipId& clip, TimedEvent event, std::size_t source_line = 0);
    void add(const ClipId& clip, const std::vector<TimedEvent>& events);

    [[nodiscard]] const EventMap& entries() const noexcept { return entries_; }
    /// Empty list for unknown clips.
    [[nodiscard]] const std::vector<TimedEvent>& events(const ClipId& clip) const;
    [[nodiscard]] std::size_t source_line(const ClipId& clip, std::size_t index) const;
    [[nodiscard]] std::size_t event_count() const noexcept;
    [[nodiscard]] std::size_t clip_count() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::set<ClassLabel> labels() const;

    /// Source lines are ignored.
    friend bool operator==(const StrongAnnotationSet& a, const StrongAnnotationSet& b) { return a.entries_ == b.entries_; }

  private:
    EventMap entries_;
    std::map<ClipId, std::vector<std::size_t>> lines_;
};

enum class Severity { warning, error };

[[nodiscard]] std::string_view to_string(Severity severity) noexcept;

struct ValidationIssue {
    std::string clip;  // empty when the line could not be attributed to a clip
    std::size_t line = 0;
    Severity severity = Severity::error;
    std::string message;

    friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    [[nodiscard]] bool empty() const noexcept { return issues.empty(); }
    [[nodiscard]] bool has_errors() const noexcept;
    [[nodiscard]] std::size_t count(Severity severity) const noexcept;
    /// --strict semantics: every warning becomes an error.
    void promote_warnings() noexcept;
    void append(const ValidationReport& other);
    /// Stable sort by line number; findings without a line go last.
    void sort();
};

// Parsing. Lines may end in LF or CRLF, blank lines are ignored and a first
// line whose first field is "filename" is treated as a header.

/// `clip<TAB>label(;label)*`. Repeated clip lines merge their label sets.
/// Throws ParseError at the first malformed line.
[[nodiscard]] WeakAnnotationSet parse_weak(std::string_view text);

/// `clip<TAB>onset<TAB>offset<TAB>label`. Throws ParseError at the first malformed line.
[[nodiscard]] StrongAnnotationSet parse_strong(std::string_view text);

template <typename Set>
struct LenientParse {
    Set set;
    ValidationReport report;
};

/// Same grammar, but malformed lines become error findings and are skipped.
[[nodiscard]] LenientParse<WeakAnnotationSet> parse_weak_lenient(std::string_view text);
[[nodiscard]] LenientParse<StrongAnnotationSet> parse_strong_lenient(std::string_view text);

/// Canonical form: clips and labels in lexicographic order, LF endings, no header.
[[nodiscard]] std::string serialize_weak(const WeakAnnotationSet& set);
/// Canonical form with onset/offset printed to exactly three decimals.
[[nodiscard]] std::string serialize_strong(const StrongAnnotationSet& set);

/// Checks annotation conventions. Short events, short same-class pauses and
/// duplicate lines are warnings; events past the clip end are errors.
[[nodiscard]] ValidationReport validate_strong(const StrongAnnotationSet& set, const NormalizeConfig& cfg);

/// `line<TAB>severity<TAB>clip<TAB>message` per finding, then an error/warning count line.
[[nodiscard]] std::string render_validation_text(const ValidationReport& report);
/// One JSON object per line with fields clip, line, severity, message.
[[nodiscard]] std::string render_validation_jsonl(const ValidationReport& report);

}  // namespace sedkit
