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

#include "sedkit/events.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "sedkit/error.hpp"
#include "sedkit/time.hpp"
#include "text.hpp"

namespace sedkit {

ActivationMatrix::ActivationMatrix(ClipId clip, double hop, std::vector<ClassLabel> classes, std::vector<double> values)
    : clip_(std::move(clip)), hop_(hop), classes_(std::move(classes)), values_(std::move(values)) {
    if (!(hop_ > 0.0) || !std::isfinite(hop_)) {
        throw ConfigError("activation hop must be a positive number of seconds");
    }
    if (classes_.empty()) {
        if (!values_.empty()) {
            throw ConfigError("activation values given without classes");
        }
        return;
    }
    if (values_.size() % classes_.size() != 0) {
        throw ConfigError(fmt::format("{} activation values do not fill rows of {} classes", values_.size(), classes_.size()));
    }
    for (const double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(fmt::format("activation value {} outside [0, 1]", v));
        }
    }
}

std::size_t PolyphonyProfile::max_count() const noexcept {
    std::size_t m = 0;
    for (const auto& s : segments) {
        m = std::max(m, s.count);
    }
    return m;
}

double PolyphonyProfile::time_at(std::size_t level) const noexcept {
    double t = 0.0;
    for (const auto& s : segments) {
        if (s.count == level) {
            t += s.end - s.start;
        }
    }
    return t;
}

std::vector<TimedEvent> merge_gaps(std::span<const TimedEvent> events, double min_gap) {
    if (!(min_gap >= 0.0)) {
        throw ConfigError("min_gap must be non-negative");
    }
    std::map<ClassLabel, std::vector<TimedEvent>> by_class;
    for (const auto& e : events) {
        by_class[e.label].push_back(e);
    }
    std::vector<TimedEvent> out;
    out.reserve(events.size());
    for (auto& [label, list] : by_class) {
        std::sort(list.begin(), list.end());
        // the hull end only grows, so one pass over onset order reaches the fixpoint
        TimedEvent current = list.front();
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (time_less(list[i].onset - current.offset, min_gap)) {
                current.offset = std::max(current.offset, list[i].offset);
            } else {
                out.push_back(current);
                current = list[i];
            }
        }
        out.push_back(current);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TimedEvent> drop_short(std::span<const TimedEvent> events, double min_duration) {
    std::vector<TimedEvent> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [&](const TimedEvent& e) { return !time_less(e.duration(), min_duration); });
    return out;
}

std::vector<TimedEvent> normalize(std::span<const TimedEvent> events, const NormalizeConfig& cfg) {
    cfg.validate();
    return drop_short(merge_gaps(events, cfg.min_gap), cfg.min_event_duration);
}

std::vector<std::uint8_t> median_filter_binary(std::span<const std::uint8_t> seq, int window) {
    if (window < 1 || window % 2 == 0) {
        throw ConfigError(fmt::format("median window must be an odd number >= 1, got {}", window));
    }
    const std::size_t n = seq.size();
    const std::size_t half = static_cast<std::size_t>(window / 2);
    std::vector<std::size_t> ones(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ones[i + 1] = ones[i] + (seq[i] != 0 ? 1 : 0);
    }
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        const std::size_t len = hi - lo + 1;
        const std::size_t count = ones[hi + 1] - ones[lo];
        if (2 * count > len) {
            out[i] = 1;
        } else if (2 * count < len) {
            out[i] = 0;
        } else {
            out[i] = seq[i] != 0 ? 1 : 0;
        }
    }
    return out;
}

std::vector<TimedEvent> decode(const ActivationMatrix& act, const DecodeConfig& cfg) {
    cfg.validate();
    std::vector<TimedEvent> out;
    const std::size_t frames = act.frames();
    std::vector<std::uint8_t> active(frames);
    for (std::size_t c = 0; c < act.classes().size(); ++c) {
        for (std::size_t f = 0; f < frames; ++f) {
            active[f] = act.at(f, c) >= cfg.threshold ? 1 : 0;
        }
        const auto smoothed = median_filter_binary(active, cfg.median_window);
        std::size_t f = 0;
        while (f < frames) {
            if (smoothed[f] == 0) {
                ++f;
                continue;
            }
            const std::size_t start = f;
            while (f < frames && smoothed[f] != 0) {
                ++f;
            }
            out.push_back({static_cast<double>(start) * act.hop(), static_cast<double>(f) * act.hop(), act.classes()[c]});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PolyphonyProfile polyphony(std::span<const TimedEvent> events) {
    std::vector<std::pair<double, int>> points;
    points.reserve(2 * events.size());
    for (const auto& e : events) {
        points.emplace_back(e.onset, +1);
        points.emplace_back(e.offset, -1);
    }
    std::sort(points.begin(), points.end());

    PolyphonyProfile profile;
    long active = 0;
    for (std::size_t i = 0; i < points.size();) {
        const double t = points[i].first;
        while (i < points.size() && points[i].first == t) {
            active += points[i].second;
            ++i;
        }
        if (i == points.size()) {
            break;
        }
        const auto count = static_cast<std::size_t>(active);
        const double next = points[i].first;
        if (!profile.segments.empty() && profile.segments.back().count == count) {
            profile.segments.back().end = next;
        } else {
            profile.segments.push_back({t, next, count});
        }
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Activation files

namespace {

double parse_hop(std::string_view field, double default_hop) {
    field = text::trim(field);
    if (field == "hop") {
        return default_hop;
    }
    if (field.substr(0, 4) == "hop=") {
        field.remove_prefix(4);
    }
    const auto hop = text::parse_double(field);
    if (!hop || *hop <= 0.0) {
        throw ParseError(1, fmt::format("hop '{}' is not a positive number of seconds", field));
    }
    return *hop;
}

}  // namespace

std::vector<ActivationMatrix> parse_activations(std::string_view input, double default_hop) {
    const auto lines = text::split_lines(input);
    if (lines.empty()) {
        throw ParseError(0, "activation file is empty (missing header)");
    }
    const auto header = text::split(lines.front().content, '\t');
    if (header.size() < 3 || text::trim(header[0]) != "filename") {
        throw ParseError(lines.front().number, "header must be 'filename<TAB>hop<TAB>class...'");
    }
    const double hop = parse_hop(header[1], default_hop);
    std::vector<ClassLabel> classes;
    for (std::size_t i = 2; i < header.size(); ++i) {
        const auto name = text::trim(header[i]);
        if (!ClassLabel::is_valid(name)) {
            throw ParseError(lines.front().number, fmt::format("invalid class name '{}' in header", name));
        }
        classes.emplace_back(std::string(name));
    }
    if (std::set<ClassLabel>(classes.begin(), classes.end()).size() != classes.size()) {
        throw ParseError(lines.front().number, "duplicate class name in header");
    }

    std::vector<ActivationMatrix> out;
    std::set<std::string> finished;
    std::optional<std::string> current;
    std::vector<double> values;
    auto flush = [&] {
        if (current) {
            out.emplace_back(ClipId(*current), hop, classes, std::move(values));
            finished.insert(*current);
            values.clear();
        }
    };

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [number, content] = lines[i];
        const auto fields = text::split(content, '\t');
        if (fields.size() != classes.size() + 2) {
            throw ParseError(number, fmt::format("expected {} fields, got {}", classes.size() + 2, fields.size()));
        }
        const std::string clip(text::trim(fields[0]));
        if (!ClipId::is_valid(clip)) {
            throw ParseError(number, "empty clip id");
        }
        if (!current || *current != clip) {
            if (finished.count(clip) != 0) {
                throw ParseError(number, fmt::format("frames of clip '{}' are not contiguous", clip));
            }
            flush();
            current = clip;
        }
        const auto frame = text::parse_integer(fields[1]);
        const auto expected = static_cast<long long>(values.size() / classes.size());
        if (!frame || *frame != expected) {
            throw ParseError(number, fmt::format("expected frame index {} for clip '{}', got '{}'", expected, clip,
                                                 text::trim(fields[1])));
        }
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto v = text::parse_double(fields[c + 2]);
            if (!v || *v < 0.0 || *v > 1.0) {
                throw ParseError(number, fmt::format("activation '{}' is not a number in [0, 1]", text::trim(fields[c + 2])));
            }
            values.push_back(*v);
        }
    }
    flush();
    return out;
}

std::string serialize_activations(std::span<const ActivationMatrix> matrices) {
    if (matrices.empty()) {
        return {};
    }
    const auto& first = matrices.front();
    std::string out = "filename\t" + text::fixed(first.hop(), 6);
    for (const auto& c : first.classes()) {
        out += '\t';
        out += c.str();
    }
    out += '\n';
    for (const auto& m : matrices) {
        if (m.classes() != first.classes() || m.hop() != first.hop()) {
            throw ConfigError("all matrices in one activation file must share hop and classes");
        }
        for (std::size_t f = 0; f < m.frames(); ++f) {
            out += m.clip().str();
            out += '\t';
            out += std::to_string(f);
            for (const double v : m.row(f)) {
                out += '\t';
                out += text::fixed(v, 6);
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace sedkit
