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

#include "sedkit/annot.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sedkit/error.hpp"
#include "sedkit/time.hpp"
#include "text.hpp"

namespace sedkit {

bool TimedEvent::is_valid() const noexcept {
    return std::isfinite(onset) && std::isfinite(offset) && onset >= 0.0 && offset > onset;
}

// ---------------------------------------------------------------------------
// StrongAnnotationSet

StrongAnnotationSet::StrongAnnotationSet(const EventMap& events) {
    for (const auto& [clip, list] : events) {
        add(clip, list);
    }
}

void StrongAnnotationSet::add(const ClipId& clip, TimedEvent event, std::size_t source_line) {
    if (!event.is_valid()) {
        throw std::invalid_argument(fmt::format("invalid event ({}, {}, {}) in clip '{}'", event.onset, event.offset,
                                                event.label.str(), clip.str()));
    }
    auto& list = entries_[clip];
    auto& lines = lines_[clip];
    // upper_bound keeps equal events in insertion order
    const auto pos = std::upper_bound(list.begin(), list.end(), event);
    const auto index = std::distance(list.begin(), pos);
    list.insert(pos, std::move(event));
    lines.insert(lines.begin() + index, source_line);
}

void StrongAnnotationSet::add(const ClipId& clip, const std::vector<TimedEvent>& events) {
    entries_.try_emplace(clip);
    lines_.try_emplace(clip);
    for (const auto& event : events) {
        add(clip, event);
    }
}

const std::vector<TimedEvent>& StrongAnnotationSet::events(const ClipId& clip) const {
    static const std::vector<TimedEvent> none;
    const auto it = entries_.find(clip);
    return it == entries_.end() ? none : it->second;
}

std::size_t StrongAnnotationSet::source_line(const ClipId& clip, std::size_t index) const {
    const auto it = lines_.find(clip);
    return it == lines_.end() || index >= it->second.size() ? 0 : it->second[index];
}

std::size_t StrongAnnotationSet::event_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [clip, list] : entries_) {
        n += list.size();
    }
    return n;
}

std::set<ClassLabel> StrongAnnotationSet::labels() const {
    std::set<ClassLabel> out;
    for (const auto& [clip, list] : entries_) {
        for (const auto& e : list) {
            out.insert(e.label);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ValidationReport

std::string_view to_string(Severity severity) noexcept {
    return severity == Severity::error ? "error" : "warning";
}

bool ValidationReport::has_errors() const noexcept {
    return count(Severity::error) > 0;
}

std::size_t ValidationReport::count(Severity severity) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.severity == severity; }));
}

void ValidationReport::promote_warnings() noexcept {
    for (auto& issue : issues) {
        issue.severity = Severity::error;
    }
}

void ValidationReport::append(const ValidationReport& other) {
    issues.insert(issues.end(), other.issues.begin(), other.issues.end());
}

void ValidationReport::sort() {
    std::stable_sort(issues.begin(), issues.end(), [](const ValidationIssue& a, const ValidationIssue& b) {
        if ((a.line == 0) != (b.line == 0)) {
            return b.line == 0;
        }
        return a.line < b.line;
    });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_header(const std::vector<text::Line>& lines) {
    return !lines.empty() && text::trim(text::split(lines.front().content, '\t').front()) == "filename";
}

class IssueSink {
  public:
    explicit IssueSink(ValidationReport& report) : report_(report) {}

    void error(std::size_t line, std::string_view clip, std::string message) {
        report_.issues.push_back({std::string(clip), line, Severity::error, std::move(message)});
    }
    void warning(std::size_t line, std::string_view clip, std::string message) {
        report_.issues.push_back({std::string(clip), line, Severity::warning, std::move(message)});
    }

  private:
    ValidationReport& report_;
};

std::optional<ClassLabel> parse_label(std::string_view raw, std::size_t line, std::string_view clip, IssueSink& sink) {
    const std::string_view label = text::trim(raw);
    if (label.empty()) {
        sink.error(line, clip, "empty class label");
        return std::nullopt;
    }
    if (!ClassLabel::is_valid(label)) {
        sink.error(line, clip, fmt::format("class label '{}' contains a forbidden character", label));
        return std::nullopt;
    }
    return ClassLabel(std::string(label));
}

std::optional<ClipId> parse_clip(std::string_view raw, std::size_t line, IssueSink& sink) {
    const std::string_view clip = text::trim(raw);
    if (!ClipId::is_valid(clip)) {
        sink.error(line, clip, "empty clip id");
        return std::nullopt;
    }
    return ClipId(std::string(clip));
}

[[noreturn]] void throw_first_error(const ValidationReport& report) {
    for (const auto& issue : report.issues) {
        if (issue.severity == Severity::error) {
            throw ParseError(issue.line, issue.message);
        }
    }
    throw ParseError(0, "malformed input");
}

}  // namespace

LenientParse<WeakAnnotationSet> parse_weak_lenient(std::string_view input) {
    LenientParse<WeakAnnotationSet> out;
    IssueSink sink(out.report);
    auto lines = text::split_lines(input);
    const std::size_t first = is_header(lines) ? 1 : 0;
    for (std::size_t i = first; i < lines.size(); ++i) {
        const auto& [number, content] = lines[i];
        const auto fields = text::split(content, '\t');
        if (fields.size() != 2) {
            sink.error(number, text::trim(fields.front()),
                       fmt::format("expected 2 tab-separated fields (clip, labels), got {}", fields.size()));
            continue;
        }
        const auto clip = parse_clip(fields[0], number, sink);
        if (!clip) {
            continue;
        }
        std::set<ClassLabel> labels;
        bool ok = true;
        for (const auto piece : text::split(fields[1], ';')) {
            auto label = parse_label(piece, number, clip->str(), sink);
            if (!label) {
                ok = false;
                break;
            }
            if (!labels.insert(*label).second) {
                sink.warning(number, clip->str(), fmt::format("label '{}' repeated on the same line", label->str()));
            }
        }
        if (ok) {
            out.set.entries[*clip].merge(labels);
        }
    }
    return out;
}

LenientParse<StrongAnnotationSet> parse_strong_lenient(std::string_view input) {
    LenientParse<StrongAnnotationSet> out;
    IssueSink sink(out.report);
    auto lines = text::split_lines(input);
    const std::size_t first = is_header(lines) ? 1 : 0;
    for (std::size_t i = first; i < lines.size(); ++i) {
        const auto& [number, content] = lines[i];
        const auto fields = text::split(content, '\t');
        if (fields.size() != 4) {
            sink.error(number, text::trim(fields.front()),
                       fmt::format("expected 4 tab-separated fields (clip, onset, offset, label), got {}", fields.size()));
            continue;
        }
        const auto clip = parse_clip(fields[0], number, sink);
        if (!clip) {
            continue;
        }
        const auto onset = text::parse_double(fields[1]);
        const auto offset = text::parse_double(fields[2]);
        if (!onset) {
            sink.error(number, clip->str(), fmt::format("onset '{}' is not a number", text::trim(fields[1])));
            continue;
        }
        if (!offset) {
            sink.error(number, clip->str(), fmt::format("offset '{}' is not a number", text::trim(fields[2])));
            continue;
        }
        if (*onset < 0.0) {
            sink.error(number, clip->str(), fmt::format("onset {} is negative", *onset));
            continue;
        }
        if (*offset <= *onset) {
            sink.error(number, clip->str(), fmt::format("offset {} is not greater than onset {}", *offset, *onset));
            continue;
        }
        auto label = parse_label(fields[3], number, clip->str(), sink);
        if (!label) {
            continue;
        }
        out.set.add(*clip, TimedEvent{*onset, *offset, std::move(*label)}, number);
    }
    return out;
}

WeakAnnotationSet parse_weak(std::string_view input) {
    auto parsed = parse_weak_lenient(input);
    if (parsed.report.has_errors()) {
        throw_first_error(parsed.report);
    }
    return std::move(parsed.set);
}

StrongAnnotationSet parse_strong(std::string_view input) {
    auto parsed = parse_strong_lenient(input);
    if (parsed.report.has_errors()) {
        throw_first_error(parsed.report);
    }
    return std::move(parsed.set);
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_weak(const WeakAnnotationSet& set) {
    std::string out;
    for (const auto& [clip, labels] : set.entries) {
        if (labels.empty()) {
            continue;
        }
        out += clip.str();
        char sep = '\t';
        for (const auto& label : labels) {
            out += sep;
            out += label.str();
            sep = ';';
        }
        out += '\n';
    }
    return out;
}

std::string serialize_strong(const StrongAnnotationSet& set) {
    std::string out;
    for (const auto& [clip, events] : set.entries()) {
        for (const auto& e : events) {
            out += clip.str();
            out += '\t';
            out += text::fixed(e.onset, 3);
            out += '\t';
            out += text::fixed(e.offset, 3);
            out += '\t';
            out += e.label.str();
            out += '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_strong(const StrongAnnotationSet& set, const NormalizeConfig& cfg) {
    cfg.validate();
    ValidationReport report;
    IssueSink sink(report);
    for (const auto& [clip, events] : set.entries()) {
        const std::string& name = clip.str();
        // previous event per class, as (index, running hull end)
        std::map<ClassLabel, std::pair<std::size_t, double>> previous;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const TimedEvent& e = events[i];
            const std::size_t line = set.source_line(clip, i);
            if (time_less(e.duration(), cfg.min_event_duration)) {
                sink.warning(line, name,
                             fmt::format("{} event lasts {} s, shorter than the {} s minimum", e.label.str(),
                                         text::fixed(e.duration(), 3), text::fixed(cfg.min_event_duration, 3)));
            }
            if (cfg.max_clip_duration && time_less(*cfg.max_clip_duration, e.offset)) {
                sink.error(line, name,
                           fmt::format("{} event ends at {} s, past the {} s clip end", e.label.str(),
                                       text::fixed(e.offset, 3), text::fixed(*cfg.max_clip_duration, 3)));
            }
            if (i > 0 && events[i - 1] == e) {
                sink.warning(line, name, fmt::format("duplicate of the event on line {}", set.source_line(clip, i - 1)));
            } else if (const auto it = previous.find(e.label); it != previous.end()) {
                const auto [prev_index, prev_end] = it->second;
                const double gap = e.onset - prev_end;
                const std::size_t prev_line = set.source_line(clip, prev_index);
                if (gap < 0.0) {
                    sink.warning(line, name,
                                 fmt::format("{} event overlaps the same-class event on line {}", e.label.str(), prev_line));
                } else if (time_less(gap, cfg.min_gap)) {
                    sink.warning(line, name,
                                 fmt::format("pause of {} s after the same-class event on line {} is shorter than {} s",
                                             text::fixed(gap, 3), prev_line, text::fixed(cfg.min_gap, 3)));
                }
            }
            auto [it, inserted] = previous.try_emplace(e.label, i, e.offset);
            if (!inserted) {
                it->second = {i, std::max(it->second.second, e.offset)};
            }
        }
    }
    report.sort();
    return report;
}

std::string render_validation_text(const ValidationReport& report) {
    std::string out;
    for (const auto& issue : report.issues) {
        out += fmt::format("{}\t{}\t{}\t{}\n", issue.line, to_string(issue.severity), issue.clip, issue.message);
    }
    out += fmt::format("{} error(s), {} warning(s)\n", report.count(Severity::error), report.count(Severity::warning));
    return out;
}

std::string render_validation_jsonl(const ValidationReport& report) {
    std::string out;
    for (const auto& issue : report.issues) {
        const nlohmann::ordered_json record = {
            {"clip", issue.clip},
            {"line", issue.line},
            {"severity", to_string(issue.severity)},
            {"message", issue.message},
        };
        out += record.dump();
        out += '\n';
    }
    return out;
}

}  // namespace sedkit
