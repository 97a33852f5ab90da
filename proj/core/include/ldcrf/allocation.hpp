#pragma once

#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

struct AllocationRequest {
    int total = 0;                // latent values to distribute, >= n_labels
    std::vector<double> profile;  // complexity values, sums to 1
    double cap = 1.0;             // max fraction of the budget per label, in (0, 1]
};

/// kNormalizedL1 increments the bucket whose post-increment normalized share
/// vector is closest (L1) to the profile. kLiteralPseudocode picks the bucket
/// minimizing |bucket_count - profile_value| over raw counts; it compares
/// counts against normalized targets and is kept only for replication.
enum class GreedyCriterion { kNormalizedL1, kLiteralPseudocode };

struct AllocationOptions {
    GreedyCriterion criterion = GreedyCriterion::kNormalizedL1;
    // Cap test on the incremented label's post-increment share. Inclusive by
    // default so that cap = 1 lets one label claim everything; the strict
    // variant rejects a share exactly equal to the cap.
    bool strict_cap = false;
};

/// Distributes `total` latent values over the labels: buckets start at one
/// each and the remaining budget is assigned greedily, ties toward the
/// lowest label index. Throws when the budget is below the label count or
/// when no increment can respect the cap while budget remains.
LatentMap dist(const AllocationRequest& request, const AllocationOptions& options = {});

struct AllocationReport {
    std::vector<int> counts;
    std::vector<double> shares;  // counts / total
    std::vector<double> profile;
    double l1_gap = 0.0;         // L1 distance between shares and profile
};

AllocationReport describe(const LatentMap& map, const AllocationRequest& request);

}  // namespace ldcrf
