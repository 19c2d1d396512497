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

// Acceptance suite: one line per criterion, non-zero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sedkit/sedkit.hpp"
#include "test_support.hpp"

using namespace sedkit;
using sedkit::testing::ev;

namespace {

/// Collects the first few failure messages of a criterion.
class Check {
  public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            ++failures_;
            if (failures_ <= 5) {
                messages_ += "\n      " + what;
            }
        }
    }
    [[nodiscard]] bool ok() const { return failures_ == 0; }
    [[nodiscard]] std::string summary() const {
        return std::to_string(checks_ - failures_) + "/" + std::to_string(checks_) + " checks" + messages_;
    }
    void note(const std::string& s) { notes_ += s; }
    [[nodiscard]] const std::string& notes() const { return notes_; }

  private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string messages_;
    std::string notes_;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

const std::vector<std::string> kClasses = {"Cat", "Dog", "Speech"};

StrongAnnotationSet random_corpus(std::mt19937& rng, int clips, std::size_t per_class, bool as_system,
                                  const StrongAnnotationSet* ref = nullptr) {
    StrongAnnotationSet set;
    for (int c = 0; c < clips; ++c) {
        const ClipId clip("clip" + std::to_string(c) + ".wav");
        std::vector<TimedEvent> events;
        if (as_system && ref != nullptr) {
            events = sedkit::testing::perturb(rng, ref->events(clip), 2, kClasses);
        } else {
            events = sedkit::testing::random_events(rng, per_class, kClasses);
        }
        if (!events.empty()) {
            set.add(clip, events);
        }
    }
    return set;
}

StrongAnnotationSet shifted(const StrongAnnotationSet& set, double delta) {
    StrongAnnotationSet out;
    for (const auto& [clip, events] : set.entries()) {
        std::vector<TimedEvent> moved;
        for (const auto& e : events) {
            moved.push_back({e.onset + delta, e.offset + delta, e.label});
        }
        out.add(clip, moved);
    }
    return out;
}

// ---------------------------------------------------------------------------

Check f1_arithmetic() {
    Check c;
    c.expect(std::fabs(f1_class({2, 1, 1}) - 2.0 / 3.0) <= 1e-12, "f1_class(2,1,1) = " + num(f1_class({2, 1, 1})));
    const double two = macro_f1({{ClassLabel("Dog"), 1.0}, {ClassLabel("Cat"), 0.0}});
    c.expect(std::fabs(two - 0.5) <= 1e-12, "macro {1,0} = " + num(two));
    // per-class F1 (%) after the second pass of the baseline
    const std::vector<std::pair<const char*, double>> baseline = {
        {"Alarm/bell/ringing", 3.9}, {"Blender", 15.4},      {"Cat", 0.0},   {"Dishes", 0.0},
        {"Dog", 0.0},               {"Electric shaver/toothbrush", 32.4}, {"Frying", 31.0}, {"Running water", 11.4},
        {"Speech", 0.0},            {"Vacuum cleaner", 46.5},
    };
    std::map<ClassLabel, double> f1s;
    for (const auto& [label, pct] : baseline) {
        f1s.emplace(ClassLabel(label), pct / 100.0);
    }
    const double macro_pct = 100.0 * macro_f1(f1s);
    c.expect(std::fabs(macro_pct - 14.06) <= 0.05, "ten-class macro = " + num(macro_pct) + " %");
    c.note("ten-class macro " + num(macro_pct) + " % vs 14.06 %");
    return c;
}

Check matching_oracle() {
    Check c;
    std::mt19937 rng(2018);
    std::uniform_int_distribution<std::size_t> n_classes(1, 3);
    std::uniform_int_distribution<std::size_t> n_events(0, 6);
    std::uniform_int_distribution<int> onset(0, 950);
    std::uniform_int_distribution<int> length(1, 300);
    std::uniform_int_distribution<int> jitter(-35, 35);
    std::bernoulli_distribution copy(0.75);
    const EvalConfig cfg;
    constexpr int kClips = 1500;
    std::size_t edges_total = 0;
    const auto start = std::chrono::steady_clock::now();
    for (int clip = 0; clip < kClips; ++clip) {
        std::vector<TimedEvent> ref;
        std::vector<TimedEvent> sys;
        const std::size_t k = n_classes(rng);
        for (std::size_t ci = 0; ci < k; ++ci) {
            const ClassLabel label(kClasses[ci]);
            std::vector<TimedEvent> class_ref;
            for (std::size_t i = n_events(rng); i > 0; --i) {
                const int on = onset(rng);
                class_ref.push_back({on / 100.0, std::min(1000, on + length(rng)) / 100.0, label});
            }
            for (std::size_t i = n_events(rng); i > 0; --i) {
                if (!class_ref.empty() && copy(rng)) {
                    const auto& src = class_ref[rng() % class_ref.size()];
                    const int on = std::max(0, static_cast<int>(std::lround(src.onset * 100)) + jitter(rng));
                    const int off = std::max(on + 1, static_cast<int>(std::lround(src.offset * 100)) + jitter(rng));
                    sys.push_back({on / 100.0, off / 100.0, label});
                } else {
                    const int on = onset(rng);
                    sys.push_back({on / 100.0, std::min(1000, on + length(rng)) / 100.0, label});
                }
            }
            ref.insert(ref.end(), class_ref.begin(), class_ref.end());
        }
        const auto detail = match_clip(ref, sys, cfg);
        for (const auto& name : kClasses) {
            const auto r = sedkit::testing::of_class(ref, name);
            const auto s = sedkit::testing::of_class(sys, name);
            const std::size_t expected = sedkit::testing::brute_force_max_matches(
                r, s, [](const TimedEvent& a, const TimedEvent& b) { return sedkit::testing::oracle_matches(a, b); });
            edges_total += expected;
            std::size_t got = 0;
            for (const auto& m : detail.classes) {
                if (m.label.str() == name) {
                    got = m.matched.size();
                }
            }
            c.expect(got == expected, "clip " + std::to_string(clip) + " class " + name + ": tp " + std::to_string(got) +
                                          " vs oracle " + std::to_string(expected));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(seconds < 10.0, "runtime " + num(seconds) + " s");
    c.note(std::to_string(kClips) + " clips, " + std::to_string(edges_total) + " oracle matches, " + num(seconds).substr(0, 5) +
           " s");
    return c;
}

Check collar_fixtures() {
    Check c;
    const EvalConfig cfg;
    c.expect(event_matches(ev(0.0, 1.0, "Dog"), ev(0.15, 1.10, "Dog"), cfg), "(0,1) vs (0.15,1.10) should match");
    c.expect(event_matches(ev(0.0, 10.0, "Frying"), ev(0.0, 8.5, "Frying"), cfg), "(0,10) vs (0,8.5) should match");
    c.expect(!event_matches(ev(0.0, 1.0, "Dog"), ev(0.0, 1.0, "Cat"), cfg), "label mismatch should not match");
    return c;
}

Check count_identities() {
    Check c;
    std::mt19937 rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ref = random_corpus(rng, 12, 5, false);
        const auto sys = random_corpus(rng, 12, 5, true, &ref);
        if (ref.empty()) {
            continue;
        }
        EvalOptions all;
        all.classes = std::vector<ClassLabel>(kClasses.begin(), kClasses.end());
        const auto base = evaluate(ref, sys, EvalConfig{}, all);
        for (const auto& row : base.per_class) {
            std::size_t n_ref = 0;
            std::size_t n_sys = 0;
            for (const auto& [clip, events] : ref.entries()) {
                n_ref += sedkit::testing::of_class(events, row.label.str()).size();
            }
            for (const auto& [clip, events] : sys.entries()) {
                n_sys += sedkit::testing::of_class(events, row.label.str()).size();
            }
            c.expect(row.counts.tp + row.counts.fn == n_ref, "tp+fn != reference count");
            c.expect(row.counts.tp + row.counts.fp == n_sys, "tp+fp != system count");
        }

        // translation invariance on a 10 ms grid
        const double delta = static_cast<double>(rng() % 500) / 100.0;
        const auto moved = evaluate(shifted(ref, delta), shifted(sys, delta), EvalConfig{}, all);
        for (std::size_t i = 0; i < base.per_class.size(); ++i) {
            c.expect(moved.per_class[i].counts == base.per_class[i].counts,
                     "shift by " + num(delta) + " changed counts of " + base.per_class[i].label.str());
        }

        // collar monotonicity
        EvalConfig wide;
        wide.onset_collar += static_cast<double>(rng() % 30) / 100.0;
        wide.offset_collar += static_cast<double>(rng() % 30) / 100.0;
        const auto widened = evaluate(ref, sys, wide, all);
        for (std::size_t i = 0; i < base.per_class.size(); ++i) {
            c.expect(widened.per_class[i].counts.tp >= base.per_class[i].counts.tp, "wider collars lost a true positive");
        }
    }
    return c;
}

Check decode_round_trip() {
    Check c;
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> gap(1, 50);
    std::uniform_int_distribution<int> length(1, 80);
    constexpr double kHop = 0.02;
    constexpr std::size_t kFrames = 500;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(kFrames * kClasses.size(), 0.0);
        StrongAnnotationSet source;
        const ClipId clip("rt" + std::to_string(trial) + ".wav");
        std::vector<TimedEvent> events;
        for (std::size_t ci = 0; ci < kClasses.size(); ++ci) {
            std::size_t f = static_cast<std::size_t>(gap(rng)) - 1;
            while (true) {
                const std::size_t end = f + static_cast<std::size_t>(length(rng));
                if (end > kFrames) {
                    break;
                }
                for (std::size_t k = f; k < end; ++k) {
                    values[k * kClasses.size() + ci] = 1.0;
                }
                events.push_back({static_cast<double>(f) * kHop, static_cast<double>(end) * kHop, ClassLabel(kClasses[ci])});
                f = end + static_cast<std::size_t>(gap(rng));
            }
        }
        if (events.empty()) {
            continue;
        }
        source.add(clip, events);
        const ActivationMatrix act(clip, kHop, std::vector<ClassLabel>(kClasses.begin(), kClasses.end()), values);
        DecodeConfig cfg;
        cfg.median_window = 1;
        StrongAnnotationSet decoded;
        decoded.add(clip, decode(act, cfg));
        const auto report = evaluate(source, decoded, EvalConfig{});
        c.expect(report.macro_f1 == 1.0, "trial " + std::to_string(trial) + " macro F1 " + num(report.macro_f1));
    }
    return c;
}

Check median_filter() {
    using Seq = std::vector<std::uint8_t>;
    Check c;
    c.expect(median_filter_binary(Seq{0, 1, 0}, 3) == Seq{0, 0, 0}, "[0,1,0] w3");
    c.expect(median_filter_binary(Seq{1, 1, 0, 1, 1}, 3) == Seq{1, 1, 1, 1, 1}, "[1,1,0,1,1] w3");
    std::mt19937 rng(5);
    std::bernoulli_distribution bit(0.5);
    for (int trial = 0; trial < 500; ++trial) {
        Seq seq(rng() % 200);
        for (auto& v : seq) {
            v = bit(rng) ? 1 : 0;
        }
        c.expect(median_filter_binary(seq, 1) == seq, "window 1 is not the identity");
        const int window = 2 * static_cast<int>(rng() % 40) + 1;
        const auto out = median_filter_binary(seq, window);
        c.expect(out.size() == seq.size(), "length changed");
        c.expect(std::all_of(out.begin(), out.end(), [](std::uint8_t v) { return v == 0 || v == 1; }), "alphabet left {0,1}");
    }
    return c;
}

Check normalization() {
    Check c;
    std::mt19937 rng(150);
    std::uniform_int_distribution<int> onset(0, 900);
    std::uniform_int_distribution<int> length(1, 100);
    for (int trial = 0; trial < 500; ++trial) {
        const auto events = sedkit::testing::random_events(rng, 8, kClasses, 600);
        const auto once = merge_gaps(events, 0.15);
        c.expect(merge_gaps(once, 0.15) == once, "merge_gaps not idempotent");

        // two same-class events exactly 150 ms apart stay separate
        const int on = onset(rng);
        const int first_end = on + length(rng);
        const int second_on = first_end + 15;
        const std::vector<TimedEvent> pair = {{on / 100.0, first_end / 100.0, ClassLabel("Dog")},
                                              {second_on / 100.0, (second_on + length(rng)) / 100.0, ClassLabel("Dog")}};
        c.expect(merge_gaps(pair, 0.15).size() == 2, "gap of exactly 0.150 s at " + num(first_end / 100.0) + " was merged");
        const std::vector<TimedEvent> closer = {pair[0], {pair[1].onset - 0.01, pair[1].offset, pair[1].label}};
        c.expect(merge_gaps(closer, 0.15).size() == 1, "gap of 0.140 s was not merged");
    }
    return c;
}

Check stats_conservation() {
    Check c;
    std::mt19937 rng(1001);
    for (int trial = 0; trial < 200; ++trial) {
        const auto events = sedkit::testing::random_events(rng, 6, {"Cat", "Dog", "Speech", "Dishes"});
        double durations = 0.0;
        for (const auto& e : events) {
            durations += e.duration();
        }
        double weighted = 0.0;
        for (const auto& s : polyphony(events).segments) {
            weighted += static_cast<double>(s.count) * (s.end - s.start);
        }
        c.expect(std::fabs(weighted - durations) <= 1e-9, "level-weighted time " + num(weighted) + " vs " + num(durations));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const auto set = random_corpus(rng, 10, 4, false);
        if (set.empty()) {
            continue;
        }
        const auto overlap = overlap_stats(set);
        const auto per_clip = classes_per_clip(set);
        for (const auto* p : {&overlap.time_proportion, &overlap.clip_proportion, &per_clip.proportion}) {
            c.expect(p->has_value() && std::fabs((**p)[0] + (**p)[1] + (**p)[2] - 1.0) <= 1e-9, "proportions do not sum to 1");
        }
    }
    return c;
}

Check parse_round_trip() {
    Check c;
    for (const char* name : {"strong_canonical.tsv", "stats_fixture.tsv"}) {
        const std::string text = sedkit::testing::read_file(sedkit::testing::data_path(name));
        c.expect(!text.empty() && serialize_strong(parse_strong(text)) == text, std::string(name) + " changed on round trip");
    }
    const std::string weak = sedkit::testing::read_file(sedkit::testing::data_path("weak_canonical.tsv"));
    c.expect(!weak.empty() && serialize_weak(parse_weak(weak)) == weak, "weak_canonical.tsv changed on round trip");
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"AC1 F1 arithmetic (class F1, macro mean, ten-class 14.06 %)", f1_arithmetic},
        {"AC2 maximum matching equals exhaustive oracle (>=1000 clips, <10 s)", matching_oracle},
        {"AC3 collar semantics fixtures", collar_fixtures},
        {"AC4 count identities, translation invariance, collar monotonicity", count_identities},
        {"AC5 decode round trip yields macro F1 = 1.0", decode_round_trip},
        {"AC6 median filter fixtures, length and alphabet", median_filter},
        {"AC7 merge_gaps idempotence and strict 150 ms boundary", normalization},
        {"AC8 polyphony conservation and proportions sum to 1", stats_conservation},
        {"AC9 canonical files round-trip byte for byte", parse_round_trip},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check result;
        try {
            result = run();
        } catch (const std::exception& e) {
            result.expect(false, std::string("exception: ") + e.what());
        }
        std::printf("[%s] %s (%s)%s%s\n", result.ok() ? "PASS" : "FAIL", name.c_str(), result.summary().c_str(),
                    result.notes().empty() ? "" : " -- ", result.notes().c_str());
        failed += result.ok() ? 0 : 1;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
