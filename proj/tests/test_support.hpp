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

// Generators and brute-force oracles shared by the unit and acceptance suites.
// The oracles deliberately avoid the library's algorithms: matching is
// exhaustive enumeration, polyphony is midpoint sampling of elementary
// intervals, the median filter sorts each window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sedkit/annot.hpp"

namespace sedkit::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

inline std::string data_path(const std::string& name) {
    return std::string(SEDKIT_TEST_DATA_DIR) + "/" + name;
}

inline TimedEvent ev(double onset, double offset, const std::string& label) {
    return {onset, offset, ClassLabel(label)};
}

// ---------------------------------------------------------------------------
// Generators

/// Events on a 10 ms grid inside a 10 s clip.
inline std::vector<TimedEvent> random_events(std::mt19937& rng, std::size_t max_per_class,
                                             const std::vector<std::string>& classes, int max_len_ms = 3000) {
    std::vector<TimedEvent> out;
    std::uniform_int_distribution<std::size_t> count(0, max_per_class);
    std::uniform_int_distribution<int> onset(0, 950);
    std::uniform_int_distribution<int> length(1, max_len_ms / 10);
    for (const auto& c : classes) {
        const std::size_t n = count(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const int on = onset(rng);
            const int off = std::min(1000, on + length(rng));
            out.push_back({on / 100.0, off / 100.0, ClassLabel(c)});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// System output that perturbs some reference events so that collar edges are exercised.
inline std::vector<TimedEvent> perturb(std::mt19937& rng, const std::vector<TimedEvent>& ref, std::size_t max_extra,
                                       const std::vector<std::string>& classes) {
    std::vector<TimedEvent> out;
    std::uniform_int_distribution<int> jitter(-30, 30);
    std::bernoulli_distribution keep(0.7);
    for (const auto& e : ref) {
        if (!keep(rng)) {
            continue;
        }
        const int on = std::max(0, static_cast<int>(std::lround(e.onset * 100)) + jitter(rng));
        const int off = std::max(on + 1, static_cast<int>(std::lround(e.offset * 100)) + jitter(rng));
        out.push_back({on / 100.0, off / 100.0, e.label});
    }
    std::uniform_int_distribution<std::size_t> extra(0, max_extra);
    auto noise = random_events(rng, 1, classes);
    noise.erase(noise.begin() + static_cast<std::ptrdiff_t>(std::min(noise.size(), extra(rng))), noise.end());
    out.insert(out.end(), noise.begin(), noise.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Oracles

/// Collar rule written out directly from its definition, with the same 1e-9 s slack.
inline bool oracle_matches(const TimedEvent& ref, const TimedEvent& sys, double onset_collar = 0.2,
                           double offset_collar = 0.2, double pct = 0.2) {
    if (ref.label.str() != sys.label.str()) {
        return false;
    }
    const double onset_dev = std::fabs(ref.onset - sys.onset);
    const double offset_dev = std::fabs(ref.offset - sys.offset);
    const double tol = std::max(offset_collar, pct * (ref.offset - ref.onset));
    return onset_dev <= onset_collar + 1e-9 && offset_dev <= tol + 1e-9;
}

namespace detail {

inline std::size_t enumerate_assignments(const std::vector<std::vector<bool>>& edge, std::size_t r,
                                         std::vector<bool>& used) {
    if (r == edge.size()) {
        return 0;
    }
    // leave reference r unmatched
    std::size_t best = enumerate_assignments(edge, r + 1, used);
    for (std::size_t s = 0; s < used.size(); ++s) {
        if (edge[r][s] && !used[s]) {
            used[s] = true;
            best = std::max(best, 1 + enumerate_assignments(edge, r + 1, used));
            used[s] = false;
        }
    }
    return best;
}

}  // namespace detail

/// Largest number of pairs over every one-to-one assignment of reference to
/// system events of one class.
template <typename Predicate>
std::size_t brute_force_max_matches(const std::vector<TimedEvent>& ref, const std::vector<TimedEvent>& sys, Predicate matches) {
    std::vector<std::vector<bool>> edge(ref.size(), std::vector<bool>(sys.size()));
    for (std::size_t r = 0; r < ref.size(); ++r) {
        for (std::size_t s = 0; s < sys.size(); ++s) {
            edge[r][s] = matches(ref[r], sys[s]);
        }
    }
    std::vector<bool> used(sys.size(), false);
    return detail::enumerate_assignments(edge, 0, used);
}

inline std::vector<TimedEvent> of_class(const std::vector<TimedEvent>& events, const std::string& label) {
    std::vector<TimedEvent> out;
    for (const auto& e : events) {
        if (e.label.str() == label) {
            out.push_back(e);
        }
    }
    return out;
}

/// Polyphony weighted time via elementary intervals: sum over consecutive
/// distinct boundaries of length * number of events covering the midpoint.
inline double oracle_weighted_time(const std::vector<TimedEvent>& events) {
    std::vector<double> points;
    for (const auto& e : events) {
        points.push_back(e.onset);
        points.push_back(e.offset);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double mid = 0.5 * (points[i] + points[i + 1]);
        std::size_t covering = 0;
        for (const auto& e : events) {
            covering += (e.onset < mid && mid < e.offset) ? 1 : 0;
        }
        total += static_cast<double>(covering) * (points[i + 1] - points[i]);
    }
    return total;
}

/// Median of the shrunk window by sorting; ties keep the centre value.
inline std::vector<std::uint8_t> oracle_median(const std::vector<std::uint8_t>& seq, int window) {
    const long n = static_cast<long>(seq.size());
    const long half = window / 2;
    std::vector<std::uint8_t> out(seq.size());
    for (long i = 0; i < n; ++i) {
        std::vector<std::uint8_t> w(seq.begin() + std::max(0L, i - half), seq.begin() + std::min(n, i + half + 1));
        std::sort(w.begin(), w.end());
        const std::size_t len = w.size();
        if (len % 2 == 1) {
            out[static_cast<std::size_t>(i)] = w[len / 2];
        } else {
            const std::uint8_t lo = w[len / 2 - 1];
            const std::uint8_t hi = w[len / 2];
            out[static_cast<std::size_t>(i)] = lo == hi ? lo : seq[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

}  // namespace sedkit::testing
