#pragma once

#include <string>
#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// Binary grouping: original labels in group_a become label 0, those in
/// group_b become label 1. The two sets must be disjoint, non-empty, and
/// together cover every original label.
struct GroupingSpec {
    std::vector<int> group_a;
    std::vector<int> group_b;
};

/// Parses "0,1-2,3,4,5" into group_a={0,1}, group_b={2,3,4,5} and validates
/// the partition against n_labels.
GroupingSpec parse_grouping(const std::string& text, int n_labels);

/// "01-2345"-style tag built from the original label names.
std::string grouping_name(const GroupingSpec& spec, const std::vector<std::string>& names);

Dataset make_binary(const Dataset& dataset, const GroupingSpec& spec);

/// Concatenates shuffled samples into runs of `group_size`, producing longer
/// multi-gesture sequences. The shuffle is seeded; leftover samples that do
/// not fill a run are dropped. Sample count below group_size is an error.
Dataset concat_many(const Dataset& dataset, int group_size, unsigned long long seed);

/// Keeps every stride-th frame of each sample, starting at frame 0.
Dataset subsample_stride(const Dataset& dataset, int stride);

}  // namespace ldcrf
