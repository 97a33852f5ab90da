#include "ldcrf/allocation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldcrf {
namespace {

std::vector<double> normalized_profile(const std::vector<double>& profile) {
    if (profile.empty()) {
        throw std::invalid_argument("allocation profile is empty");
    }
    double total = 0.0;
    for (double v : profile) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("allocation profile values must be finite and non-negative");
        }
        total += v;
    }
    if (total <= 0.0) {
        throw std::invalid_argument("allocation profile sums to zero");
    }
    std::vector<double> out(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out[i] = profile[i] / total;
    }
    return out;
}

// L1 distance between the bucket shares (normalized to their own sum) and
// the profile, with bucket `pick` already incremented.
double l1_after_increment(const std::vector<int>& buckets, std::size_t pick,
                          const std::vector<double>& profile) {
    double sum = 1.0;
    for (int b : buckets) sum += b;
    double gap = 0.0;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const double count = buckets[i] + (i == pick ? 1.0 : 0.0);
        gap += std::abs(count / sum - profile[i]);
    }
    return gap;
}

double literal_after_increment(const std::vector<int>& buckets, std::size_t pick,
                               const std::vector<double>& profile) {
    double sum = 1.0;
    for (int b : buckets) sum += b;
    return std::abs((buckets[pick] + 1.0) / sum - profile[pick]);
}

}  // namespace

LatentMap dist(const AllocationRequest& request, const AllocationOptions& options) {
    const std::vector<double> profile = normalized_profile(request.profile);
    const int n = static_cast<int>(profile.size());
    if (request.total < n) {
        throw std::invalid_argument("latent budget " + std::to_string(request.total) +
                                    " is smaller than the label count " + std::to_string(n));
    }
    if (!(request.cap > 0.0) || request.cap > 1.0) {
        throw std::invalid_argument("cap must lie in (0, 1]");
    }

    const auto within_cap = [&](int count) {
        const double share = static_cast<double>(count) / request.total;
        return options.strict_cap ? share < request.cap : share <= request.cap;
    };
    // Every label keeps at least one latent value, so 1/total is the smallest
    // share any allocation can give it.
    if (!within_cap(1)) {
        throw std::invalid_argument("cap " + std::to_string(request.cap) +
                                    " is infeasible: each of " + std::to_string(n) +
                                    " labels holds at least 1 of " + std::to_string(request.total));
    }

    std::vector<int> buckets(profile.size(), 1);
    int remaining = request.total - n;
    while (remaining > 0) {
        int best = -1;
        double best_score = 0.0;
        for (std::size_t i = 0; i < buckets.size(); ++i) {
            if (!within_cap(buckets[i] + 1)) continue;
            const double score = options.criterion == GreedyCriterion::kNormalizedL1
                                     ? l1_after_increment(buckets, i, profile)
                                     : literal_after_increment(buckets, i, profile);
            if (best < 0 || score < best_score) {
                best = static_cast<int>(i);
                best_score = score;
            }
        }
        if (best < 0) {
            throw std::invalid_argument("cap " + std::to_string(request.cap) + " is infeasible: " +
                                        std::to_string(remaining) +
                                        " latent values remain but every label is at its cap");
        }
        ++buckets[best];
        --remaining;
    }
    return LatentMap(buckets);
}

AllocationReport describe(const LatentMap& map, const AllocationRequest& request) {
    const std::vector<double> profile = normalized_profile(request.profile);
    if (static_cast<std::size_t>(map.n_labels()) != profile.size()) {
        throw std::invalid_argument("allocation profile length does not match the label count");
    }
    AllocationReport report;
    report.counts = map.counts();
    report.profile = profile;
    report.shares.resize(report.counts.size());
    const double total = map.total();
    for (std::size_t i = 0; i < report.counts.size(); ++i) {
        report.shares[i] = report.counts[i] / total;
        report.l1_gap += std::abs(report.shares[i] - profile[i]);
    }
    return report;
}

}  // namespace ldcrf
