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

#include "sedkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sedkit/error.hpp"
#include "sedkit/events.hpp"
#include "text.hpp"

namespace sedkit {

std::optional<double> median(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

namespace {

std::optional<double> mean(const std::vector<double>& values) {
    if (values.empty()) {
        return std::nullopt;
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::size_t bucket(std::size_t n) {
    return std::min<std::size_t>(n, 3) - 1;
}

BucketProportions proportions(const std::array<double, 3>& amounts) {
    const double total = amounts[0] + amounts[1] + amounts[2];
    if (total <= 0.0) {
        return std::nullopt;
    }
    return std::array<double, 3>{amounts[0] / total, amounts[1] / total, amounts[2] / total};
}

template <typename LabelSets>
ClassesPerClipStats bucket_label_sets(const LabelSets& sets) {
    std::array<double, 3> clips{};
    ClassesPerClipStats out;
    for (const auto& labels : sets) {
        if (labels.empty()) {
            continue;
        }
        clips[bucket(labels.size())] += 1.0;
        ++out.clip_count;
    }
    out.proportion = proportions(clips);
    return out;
}

}  // namespace

ClassStatsTable class_stats(const StrongAnnotationSet& set) {
    std::map<ClassLabel, std::vector<double>> durations;
    std::map<ClassLabel, std::size_t> clips;
    std::vector<double> all;
    ClassStatsTable table;
    for (const auto& [clip, events] : set.entries()) {
        std::set<ClassLabel> present;
        for (const auto& e : events) {
            durations[e.label].push_back(e.duration());
            all.push_back(e.duration());
            present.insert(e.label);
        }
        for (const auto& label : present) {
            ++clips[label];
        }
        if (!events.empty()) {
            ++table.total_clips;
        }
    }
    for (const auto& [label, list] : durations) {
        table.classes.push_back({label, clips[label], list.size(), mean(list), median(list)});
    }
    table.total_events = all.size();
    table.total_mean_duration = mean(all);
    table.total_median_duration = median(all);
    return table;
}

WeakClassStatsTable weak_class_stats(const WeakAnnotationSet& set) {
    std::map<ClassLabel, std::size_t> clips;
    WeakClassStatsTable table;
    for (const auto& [clip, labels] : set.entries) {
        for (const auto& label : labels) {
            ++clips[label];
            ++table.total_occurrences;
        }
        if (!labels.empty()) {
            ++table.total_clips;
        }
    }
    for (const auto& [label, n] : clips) {
        table.classes.push_back({label, n});
    }
    return table;
}

ClassesPerClipStats classes_per_clip(const WeakAnnotationSet& set) {
    std::vector<std::set<ClassLabel>> sets;
    for (const auto& [clip, labels] : set.entries) {
        sets.push_back(labels);
    }
    return bucket_label_sets(sets);
}

ClassesPerClipStats classes_per_clip(const StrongAnnotationSet& set) {
    std::vector<std::set<ClassLabel>> sets;
    for (const auto& [clip, events] : set.entries()) {
        std::set<ClassLabel> labels;
        for (const auto& e : events) {
            labels.insert(e.label);
        }
        sets.push_back(std::move(labels));
    }
    return bucket_label_sets(sets);
}

PolyphonyStats overlap_stats(const StrongAnnotationSet& set) {
    std::array<double, 3> time{};
    std::array<double, 3> clips{};
    PolyphonyStats out;
    for (const auto& [clip, events] : set.entries()) {
        if (events.empty()) {
            continue;
        }
        const auto profile = polyphony(events);
        for (const auto& segment : profile.segments) {
            if (segment.count > 0) {
                time[bucket(segment.count)] += segment.end - segment.start;
            }
        }
        clips[bucket(profile.max_count())] += 1.0;
        ++out.clip_count;
    }
    out.covered_time = time[0] + time[1] + time[2];
    out.time_proportion = proportions(time);
    out.clip_proportion = proportions(clips);
    return out;
}

std::vector<DurationHistogram> duration_histogram(const StrongAnnotationSet& set, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw ConfigError("histogram bin width must be positive");
    }
    std::map<ClassLabel, std::map<long long, std::size_t>> bins;
    for (const auto& [clip, events] : set.entries()) {
        for (const auto& e : events) {
            // 1e-9 keeps durations that sit exactly on an edge (0.3 / 0.1) in the upper bin
            const auto k = static_cast<long long>(std::floor(e.duration() / bin_width + 1e-9));
            ++bins[e.label][k];
        }
    }
    std::vector<DurationHistogram> out;
    for (const auto& [label, counts] : bins) {
        DurationHistogram h{label, bin_width, {}};
        for (const auto& [k, n] : counts) {
            h.bins.push_back({static_cast<double>(k) * bin_width, n});
        }
        out.push_back(std::move(h));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

constexpr std::array<const char*, 3> kBucketNames{"1", "2", "3+"};

std::string seconds(const std::optional<double>& v) {
    return v ? text::fixed(*v, 2) : "-";
}

std::string percent(const BucketProportions& p, std::size_t i) {
    return p ? text::fixed(100.0 * (*p)[i], 2) + "%" : "-";
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json buckets_json(const BucketProportions& p) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < 3; ++i) {
        out[kBucketNames[i]] = p ? nlohmann::ordered_json((*p)[i]) : nlohmann::ordered_json(nullptr);
    }
    return out;
}

std::size_t label_width(std::size_t floor_width, const auto& rows) {
    std::size_t w = floor_width;
    for (const auto& row : rows) {
        w = std::max(w, row.label.str().size());
    }
    return w;
}

}  // namespace

std::string render_class_stats(const ClassStatsTable& table) {
    const std::size_t w = label_width(5, table.classes);
    std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>9}  {:>11}\n", "Class", w, "Clips", "Events", "Mean (s)", "Median (s)");
    const auto row = [&](const std::string& label, std::size_t clips, std::size_t events, const std::optional<double>& mean,
                         const std::optional<double>& med) {
        return fmt::format("{:<{}}  {:>6}  {:>6}  {:>9}  {:>11}\n", label, w, clips, events, seconds(mean), seconds(med));
    };
    const std::string rule(w + 42, '-');
    out += rule + '\n';
    for (const auto& c : table.classes) {
        out += row(c.label.str(), c.clip_count, c.event_count, c.mean_duration, c.median_duration);
    }
    out += rule + '\n';
    out += row("Total", table.total_clips, table.total_events, table.total_mean_duration, table.total_median_duration);
    return out;
}

std::string render_weak_class_stats(const WeakClassStatsTable& table) {
    const std::size_t w = label_width(5, table.classes);
    std::string out = fmt::format("{:<{}}  {:>6}\n", "Class", w, "Clips");
    const std::string rule(w + 8, '-');
    out += rule + '\n';
    for (const auto& c : table.classes) {
        out += fmt::format("{:<{}}  {:>6}\n", c.label.str(), w, c.clip_count);
    }
    out += rule + '\n';
    out += fmt::format("{:<{}}  {:>6}\n", "Total", w, table.total_occurrences);
    out += fmt::format("({} labeled clip(s); the total counts class occurrences)\n", table.total_clips);
    return out;
}

std::string render_classes_per_clip(const ClassesPerClipStats& stats) {
    std::string out = fmt::format("{:<17}  {:>8}  {:>8}  {:>11}\n", "Number of classes", "1", "2", "3 and more");
    out += fmt::format("{:<17}  {:>8}  {:>8}  {:>11}\n", "Clip proportion", percent(stats.proportion, 0),
                       percent(stats.proportion, 1), percent(stats.proportion, 2));
    return out;
}

std::string render_overlap_stats(const PolyphonyStats& stats) {
    std::string out = fmt::format(
        "Time proportion is relative to event-covered time ({} s); clips are bucketed by maximum polyphony.\n",
        text::fixed(stats.covered_time, 3));
    out += fmt::format("{:<16}  {:>8}  {:>8}  {:>11}\n", "Number of events", "1", "2", "3 and more");
    out += fmt::format("{:<16}  {:>8}  {:>8}  {:>11}\n", "Time proportion", percent(stats.time_proportion, 0),
                       percent(stats.time_proportion, 1), percent(stats.time_proportion, 2));
    out += fmt::format("{:<16}  {:>8}  {:>8}  {:>11}\n", "Clip proportion", percent(stats.clip_proportion, 0),
                       percent(stats.clip_proportion, 1), percent(stats.clip_proportion, 2));
    return out;
}

std::string render_histograms(const std::vector<DurationHistogram>& histograms) {
    constexpr std::size_t kBarWidth = 40;
    std::string out;
    for (const auto& h : histograms) {
        std::size_t peak = 0;
        for (const auto& b : h.bins) {
            peak = std::max(peak, b.count);
        }
        out += h.label.str() + '\n';
        for (const auto& b : h.bins) {
            const std::size_t bar = peak == 0 ? 0 : std::max<std::size_t>(1, b.count * kBarWidth / peak);
            out += fmt::format("  [{:>7}, {:>7})  {:>5}  {}\n", text::fixed(b.lower_edge, 2),
                               text::fixed(b.lower_edge + h.bin_width, 2), b.count, std::string(bar, '#'));
        }
    }
    return out;
}

std::string class_stats_jsonl(const ClassStatsTable& table) {
    std::string out;
    for (const auto& c : table.classes) {
        const nlohmann::ordered_json record = {
            {"record", "class"},
            {"label", c.label.str()},
            {"clips", c.clip_count},
            {"events", c.event_count},
            {"mean_duration", optional_json(c.mean_duration)},
            {"median_duration", optional_json(c.median_duration)},
        };
        out += record.dump() + "\n";
    }
    const nlohmann::ordered_json total = {
        {"record", "total"},
        {"clips", table.total_clips},
        {"events", table.total_events},
        {"mean_duration", optional_json(table.total_mean_duration)},
        {"median_duration", optional_json(table.total_median_duration)},
    };
    out += total.dump() + "\n";
    return out;
}

std::string weak_class_stats_jsonl(const WeakClassStatsTable& table) {
    std::string out;
    for (const auto& c : table.classes) {
        out += nlohmann::ordered_json{{"record", "class"}, {"label", c.label.str()}, {"clips", c.clip_count}}.dump() + "\n";
    }
    out += nlohmann::ordered_json{{"record", "total"},
                                  {"occurrences", table.total_occurrences},
                                  {"clips", table.total_clips}}
               .dump() +
           "\n";
    return out;
}

std::string classes_per_clip_jsonl(const ClassesPerClipStats& stats) {
    const nlohmann::ordered_json record = {
        {"record", "classes_per_clip"},
        {"clips", stats.clip_count},
        {"proportion", buckets_json(stats.proportion)},
    };
    return record.dump() + "\n";
}

std::string overlap_stats_jsonl(const PolyphonyStats& stats) {
    const nlohmann::ordered_json record = {
        {"record", "overlap"},
        {"clips", stats.clip_count},
        {"covered_time", stats.covered_time},
        {"time_proportion", buckets_json(stats.time_proportion)},
        {"clip_proportion", buckets_json(stats.clip_proportion)},
        {"clip_bucketing", "max_polyphony"},
    };
    return record.dump() + "\n";
}

std::string histograms_jsonl(const std::vector<DurationHistogram>& histograms) {
    std::string out;
    for (const auto& h : histograms) {
        for (const auto& b : h.bins) {
            const nlohmann::ordered_json record = {
                {"record", "histogram_bin"}, {"label", h.label.str()}, {"bin_width", h.bin_width},
                {"lower_edge", b.lower_edge}, {"count", b.count},
            };
            out += record.dump() + "\n";
        }
    }
    return out;
}

}  // namespace sedkit
