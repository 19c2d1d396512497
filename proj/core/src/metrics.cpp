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

#include "sedkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sedkit/time.hpp"
#include "text.hpp"

namespace sedkit {

bool event_matches(const TimedEvent& ref, const TimedEvent& sys, const EvalConfig& cfg) {
    if (ref.label != sys.label) {
        return false;
    }
    const double offset_tolerance = std::max(cfg.offset_collar, cfg.offset_length_pct * ref.duration());
    return time_leq(std::abs(sys.onset - ref.onset), cfg.onset_collar) &&
           time_leq(std::abs(sys.offset - ref.offset), offset_tolerance);
}

namespace {

/// Kuhn's augmenting-path matching on a dense bipartite graph.
class BipartiteMatcher {
  public:
    explicit BipartiteMatcher(std::vector<std::vector<std::size_t>> adjacency, std::size_t right_count)
        : adjacency_(std::move(adjacency)), right_owner_(right_count, kFree), visited_(right_count, false) {}

    /// right_owner()[s] is the left vertex matched to s, or kFree.
    const std::vector<std::size_t>& solve() {
        for (std::size_t left = 0; left < adjacency_.size(); ++left) {
            std::fill(visited_.begin(), visited_.end(), false);
            augment(left);
        }
        return right_owner_;
    }

    static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

  private:
    bool augment(std::size_t left) {
        for (const std::size_t right : adjacency_[left]) {
            if (visited_[right]) {
                continue;
            }
            visited_[right] = true;
            if (right_owner_[right] == kFree || augment(right_owner_[right])) {
                right_owner_[right] = left;
                return true;
            }
        }
        return false;
    }

    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::size_t> right_owner_;
    std::vector<bool> visited_;
};

ClassMatch match_class(const ClassLabel& label, std::vector<TimedEvent> ref, std::vector<TimedEvent> sys,
                       const EvalConfig& cfg) {
    std::sort(ref.begin(), ref.end());
    std::sort(sys.begin(), sys.end());
    std::vector<std::vector<std::size_t>> adjacency(ref.size());
    for (std::size_t r = 0; r < ref.size(); ++r) {
        for (std::size_t s = 0; s < sys.size(); ++s) {
            if (event_matches(ref[r], sys[s], cfg)) {
                adjacency[r].push_back(s);
            }
        }
    }
    BipartiteMatcher matcher(std::move(adjacency), sys.size());
    const auto& owner = matcher.solve();

    ClassMatch out{label, {}, {}, {}};
    std::vector<bool> ref_used(ref.size(), false);
    for (std::size_t s = 0; s < sys.size(); ++s) {
        if (owner[s] == BipartiteMatcher::kFree) {
            out.spurious.push_back(sys[s]);
        } else {
            ref_used[owner[s]] = true;
        }
    }
    // report pairs in reference order
    std::vector<std::size_t> partner(ref.size(), BipartiteMatcher::kFree);
    for (std::size_t s = 0; s < sys.size(); ++s) {
        if (owner[s] != BipartiteMatcher::kFree) {
            partner[owner[s]] = s;
        }
    }
    for (std::size_t r = 0; r < ref.size(); ++r) {
        if (ref_used[r]) {
            out.matched.emplace_back(ref[r], sys[partner[r]]);
        } else {
            out.missed.push_back(ref[r]);
        }
    }
    return out;
}

}  // namespace

MatchDetail match_clip(std::span<const TimedEvent> ref, std::span<const TimedEvent> sys, const EvalConfig& cfg) {
    std::map<ClassLabel, std::pair<std::vector<TimedEvent>, std::vector<TimedEvent>>> by_class;
    for (const auto& e : ref) {
        by_class[e.label].first.push_back(e);
    }
    for (const auto& e : sys) {
        by_class[e.label].second.push_back(e);
    }
    MatchDetail detail;
    detail.classes.reserve(by_class.size());
    for (auto& [label, lists] : by_class) {
        detail.classes.push_back(match_class(label, std::move(lists.first), std::move(lists.second), cfg));
    }
    return detail;
}

std::vector<std::pair<ClipId, MatchDetail>> match_corpus(const StrongAnnotationSet& ref,
                                                         const StrongAnnotationSet& sys,
                                                         const EvalConfig& cfg,
                                                         unsigned jobs) {
    std::set<ClipId> clips;
    for (const auto& [clip, events] : ref.entries()) {
        clips.insert(clip);
    }
    for (const auto& [clip, events] : sys.entries()) {
        clips.insert(clip);
    }
    const std::vector<ClipId> order(clips.begin(), clips.end());
    std::vector<MatchDetail> details(order.size());

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < order.size(); i += stride) {
            details[i] = match_clip(ref.events(order[i]), sys.events(order[i]), cfg);
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(order.size(), 1));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
    }

    std::vector<std::pair<ClipId, MatchDetail>> out;
    out.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.emplace_back(order[i], std::move(details[i]));
    }
    return out;
}

std::map<ClassLabel, ClassCounts> accumulate(std::span<const MatchDetail> details) {
    std::map<ClassLabel, ClassCounts> totals;
    for (const auto& detail : details) {
        for (const auto& cls : detail.classes) {
            totals[cls.label] += cls.counts();
        }
    }
    return totals;
}

double f1_class(const ClassCounts& c) noexcept {
    const std::size_t denominator = 2 * c.tp + c.fp + c.fn;
    return denominator == 0 ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(denominator);
}

double precision(const ClassCounts& c) noexcept {
    return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const ClassCounts& c) noexcept {
    return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double macro_f1(const std::map<ClassLabel, double>& per_class) {
    if (per_class.empty()) {
        throw std::invalid_argument("macro F1 over an empty class ensemble is undefined");
    }
    double sum = 0.0;
    for (const auto& [label, f1] : per_class) {
        sum += f1;
    }
    return sum / static_cast<double>(per_class.size());
}

const ClassResult* EvalReport::find(const ClassLabel& label) const noexcept {
    for (const auto* rows : {&per_class, &unscored}) {
        for (const auto& row : *rows) {
            if (row.label == label) {
                return &row;
            }
        }
    }
    return nullptr;
}

namespace {

ClassResult make_result(const ClassLabel& label, const ClassCounts& counts) {
    return {label, counts, precision(counts), recall(counts), f1_class(counts), counts.absent()};
}

}  // namespace

EvalReport evaluate(const StrongAnnotationSet& ref,
                    const StrongAnnotationSet& sys,
                    const EvalConfig& cfg,
                    const EvalOptions& options) {
    cfg.validate();
    std::vector<ClassLabel> ensemble;
    if (options.classes) {
        std::set<ClassLabel> seen;
        for (const auto& label : *options.classes) {
            if (seen.insert(label).second) {
                ensemble.push_back(label);
            }
        }
    } else {
        const auto labels = ref.labels();
        ensemble.assign(labels.begin(), labels.end());
    }
    if (ensemble.empty()) {
        throw std::invalid_argument("class ensemble is empty: the reference has no events and no class list was given");
    }

    const auto corpus = match_corpus(ref, sys, cfg, options.jobs);
    std::vector<MatchDetail> details;
    details.reserve(corpus.size());
    for (const auto& [clip, detail] : corpus) {
        details.push_back(detail);
    }
    auto totals = accumulate(details);

    EvalReport report;
    report.config = cfg;
    report.clip_count = corpus.size();
    std::map<ClassLabel, double> f1s;
    for (const auto& label : ensemble) {
        const auto it = totals.find(label);
        const ClassCounts counts = it == totals.end() ? ClassCounts{} : it->second;
        report.per_class.push_back(make_result(label, counts));
        f1s.emplace(label, report.per_class.back().f1);
        if (it != totals.end()) {
            totals.erase(it);
        }
    }
    for (const auto& [label, counts] : totals) {
        report.unscored.push_back(make_result(label, counts));
    }
    report.macro_f1 = macro_f1(f1s);
    return report;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string percent(double fraction) {
    return text::fixed(100.0 * fraction, 2) + "%";
}

nlohmann::ordered_json config_json(const EvalConfig& cfg) {
    return {
        {"onset_collar", cfg.onset_collar},
        {"offset_collar", cfg.offset_collar},
        {"offset_length_pct", cfg.offset_length_pct},
    };
}

nlohmann::ordered_json row_json(const ClassResult& row) {
    return {
        {"label", row.label.str()}, {"tp", row.counts.tp},         {"fp", row.counts.fp},
        {"fn", row.counts.fn},      {"precision", row.precision}, {"recall", row.recall},
        {"f1", row.f1},             {"absent", row.absent},
    };
}

}  // namespace

std::string render_report_table(const EvalReport& report) {
    std::size_t width = std::string_view("Macro average").size();
    for (const auto* rows : {&report.per_class, &report.unscored}) {
        for (const auto& row : *rows) {
            width = std::max(width, row.label.str().size());
        }
    }
    const auto& cfg = report.config;
    std::string out = fmt::format("Event-based F1 over {} clip(s); onset collar {} s, offset collar max({} s, {} of length)\n",
                                  report.clip_count, text::fixed(cfg.onset_collar, 3), text::fixed(cfg.offset_collar, 3),
                                  percent(cfg.offset_length_pct));
    const auto line = [&](const ClassResult& row) {
        return fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>9}  {:>8}  {:>8}{}\n", row.label.str(), width, row.counts.tp,
                           row.counts.fp, row.counts.fn, percent(row.precision), percent(row.recall), percent(row.f1),
                           row.absent ? " *" : "");
    };
    const std::string rule(width + 55, '-');
    out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>9}  {:>8}  {:>8}\n", "Class", width, "TP", "FP", "FN", "Precision",
                       "Recall", "F1");
    out += rule + '\n';
    bool any_absent = false;
    for (const auto& row : report.per_class) {
        out += line(row);
        any_absent = any_absent || row.absent;
    }
    out += rule + '\n';
    out += fmt::format("{:<{}}  {:>53}\n", "Macro average", width, percent(report.macro_f1));
    if (any_absent) {
        out += "* class absent from both reference and system output; F1 counted as 0\n";
    }
    if (!report.unscored.empty()) {
        out += "\nNot in the class list (excluded from the macro average):\n";
        for (const auto& row : report.unscored) {
            out += line(row);
        }
    }
    return out;
}

std::string render_report_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["config"] = config_json(report.config);
    doc["clip_count"] = report.clip_count;
    doc["class_count"] = report.class_count();
    doc["classes"] = nlohmann::ordered_json::array();
    for (const auto& row : report.per_class) {
        doc["classes"].push_back(row_json(row));
    }
    doc["unscored"] = nlohmann::ordered_json::array();
    for (const auto& row : report.unscored) {
        doc["unscored"].push_back(row_json(row));
    }
    doc["macro_f1"] = report.macro_f1;
    return doc.dump(2) + "\n";
}

std::string render_report_jsonl(const EvalReport& report) {
    std::string out;
    for (const auto& row : report.per_class) {
        auto record = nlohmann::ordered_json{{"record", "class"}};
        record.update(row_json(row));
        out += record.dump() + "\n";
    }
    for (const auto& row : report.unscored) {
        auto record = nlohmann::ordered_json{{"record", "unscored"}};
        record.update(row_json(row));
        out += record.dump() + "\n";
    }
    const nlohmann::ordered_json summary = {
        {"record", "macro"},
        {"macro_f1", report.macro_f1},
        {"class_count", report.class_count()},
        {"clip_count", report.clip_count},
        {"config", config_json(report.config)},
    };
    out += summary.dump() + "\n";
    return out;
}

}  // namespace sedkit
