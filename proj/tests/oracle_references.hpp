#pragma once

// Naive references: a double-loop transcription of the complexity measure
// with its own interpolation code, and an exhaustive optimizer for the
// latent-allocation problem. Deliberately simple and slow.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ldcrf/complexity.hpp"
#include "ldcrf/types.hpp"

namespace oracle {

using Series = std::vector<std::vector<double>>;

inline Series naive_resample(const Series& series, std::size_t target) {
    if (series.size() == target) return series;
    Series out(target);
    if (series.size() == 1) {
        for (std::size_t i = 0; i < target; ++i) out[i] = series.front();
        return out;
    }
    if (target == 1) {
        out[0] = series.front();
        return out;
    }
    const double scale =
        static_cast<double>(series.size() - 1) / static_cast<double>(target - 1);
    for (std::size_t i = 0; i < target; ++i) {
        const double pos = static_cast<double>(i) * scale;
        std::size_t lo = static_cast<std::size_t>(pos);
        if (lo > series.size() - 2) lo = series.size() - 2;
        const double frac = pos - static_cast<double>(lo);
        std::vector<double> frame(series.front().size());
        for (std::size_t j = 0; j < frame.size(); ++j) {
            frame[j] = (1.0 - frac) * series[lo][j] + frac * series[lo + 1][j];
        }
        out[i] = frame;
    }
    return out;
}

inline double naive_series_distance(const Series& a, const Series& b) {
    double total = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        double sq = 0.0;
        for (std::size_t j = 0; j < a[t].size(); ++j) {
            const double diff = a[t][j] - b[t][j];
            sq += diff * diff;
        }
        total += std::sqrt(sq);
    }
    return total;
}

/// Mirrors the complexity measure step by step: cut each sample into maximal
/// constant-label runs, resample every run of a label to that label's longest
/// run, and sum pairwise frame-wise distances over unordered pairs.
inline ldcrf::ComplexityProfile naive_comp_measure(const ldcrf::Dataset& data) {
    std::vector<std::vector<Series>> instances(data.n_labels);
    for (const ldcrf::SequenceSample& sample : data.samples) {
        std::size_t start = 0;
        for (std::size_t t = 1; t <= sample.labels.size(); ++t) {
            if (t == sample.labels.size() || sample.labels[t] != sample.labels[start]) {
                Series run;
                for (std::size_t r = start; r < t; ++r) {
                    std::vector<double> frame(sample.features.cols());
                    for (std::size_t j = 0; j < frame.size(); ++j) {
                        frame[j] = sample.features(static_cast<int>(r), static_cast<int>(j));
                    }
                    run.push_back(frame);
                }
                instances[sample.labels[start]].push_back(run);
                start = t;
            }
        }
    }

    ldcrf::ComplexityProfile profile;
    profile.raw.assign(data.n_labels, 0.0);
    profile.pair_counts.assign(data.n_labels, 0);
    for (int y = 0; y < data.n_labels; ++y) {
        std::size_t longest = 0;
        for (const Series& run : instances[y]) longest = std::max(longest, run.size());
        std::vector<Series> aligned;
        for (const Series& run : instances[y]) aligned.push_back(naive_resample(run, longest));
        for (std::size_t a = 0; a < aligned.size(); ++a) {
            for (std::size_t b = a + 1; b < aligned.size(); ++b) {
                profile.raw[y] += naive_series_distance(aligned[a], aligned[b]);
                profile.pair_counts[y] += 1;
            }
        }
    }

    double total = 0.0;
    for (double r : profile.raw) total += r;
    profile.values.assign(data.n_labels, 0.0);
    if (total > 0.0) {
        for (int y = 0; y < data.n_labels; ++y) profile.values[y] = profile.raw[y] / total;
    } else {
        profile.uniform_fallback = true;
        for (int y = 0; y < data.n_labels; ++y) {
            profile.values[y] = 1.0 / static_cast<double>(data.n_labels);
        }
    }
    return profile;
}

struct BestAllocation {
    std::vector<int> counts;
    double l1_gap = std::numeric_limits<double>::infinity();
    bool feasible = false;
};

inline double allocation_l1(const std::vector<int>& counts, const std::vector<double>& profile,
                            int total) {
    double gap = 0.0;
    for (std::size_t y = 0; y < counts.size(); ++y) {
        gap += std::abs(static_cast<double>(counts[y]) / total - profile[y]);
    }
    return gap;
}

/// Exhaustive search over all compositions of `total` into positive buckets
/// respecting the cap; minimizes the L1 gap to the profile, breaking ties
/// lexicographically so the optimum is unique and comparable.
inline BestAllocation exhaustive_allocation(int total, const std::vector<double>& profile,
                                            double cap, bool strict_cap = false) {
    const int n = static_cast<int>(profile.size());
    BestAllocation best;
    std::vector<int> counts(n, 0);
    const double limit = cap * total;

    auto admissible = [&](int c) {
        return strict_cap ? static_cast<double>(c) < limit : static_cast<double>(c) <= limit;
    };

    std::function<void(int, int)> walk = [&](int label, int remaining) {
        if (label == n - 1) {
            if (remaining >= 1 && admissible(remaining)) {
                counts[label] = remaining;
                const double gap = allocation_l1(counts, profile, total);
                if (!best.feasible || gap < best.l1_gap - 1e-12 ||
                    (std::abs(gap - best.l1_gap) <= 1e-12 && counts < best.counts)) {
                    best.counts = counts;
                    best.l1_gap = gap;
                    best.feasible = true;
                }
            }
            return;
        }
        const int spare = remaining - (n - 1 - label);
        for (int c = 1; c <= spare && admissible(c); ++c) {
            counts[label] = c;
            walk(label + 1, remaining - c);
        }
    };
    if (total >= n) walk(0, total);
    return best;
}

}  // namespace oracle
