#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// How sample pairs are iterated when summing distances. Unordered counts
/// each distinct pair once; ordered counts both (x, y) and (y, x), doubling
/// every raw value (a wash after normalization, exposed for replication).
enum class PairIteration { kUnordered, kOrdered };

/// Literal per-label sum of pair distances, or the mean per pair (removes
/// the weight that sample count puts on a label).
enum class PairAggregate { kSum, kMeanPerPair };

/// Frame-wise distance: sum over frames of the per-frame Euclidean norm
/// (default), or the flat Euclidean norm over all concatenated frames.
enum class PairDistance { kFramewiseSum, kFlatNorm };

struct ComplexityOptions {
    PairIteration pairs = PairIteration::kUnordered;
    PairAggregate aggregate = PairAggregate::kSum;
    PairDistance distance = PairDistance::kFramewiseSum;
};

/// Normalized per-label complexity profile.
struct ComplexityProfile {
    std::vector<double> values;           // sums to 1
    std::vector<double> raw;              // pre-normalization per-label sums
    std::vector<std::int64_t> pair_counts;
    bool uniform_fallback = false;        // set when every raw sum was zero
};

/// Linear interpolation of each feature dimension onto `target_length`
/// points evenly spaced over the original index range; endpoints are
/// preserved exactly and target_length == length is the identity.
Eigen::MatrixXd resample(const Eigen::MatrixXd& series, int target_length);

double pair_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     PairDistance kind = PairDistance::kFramewiseSum);

/// The instances of each label: maximal constant-label runs of every sample,
/// as standalone time-series. For a dataset whose samples each carry a single
/// label this is simply the per-label grouping of whole samples.
std::vector<std::vector<Eigen::MatrixXd>> label_instances(const Dataset& data);

/// Per-label complexity: each label's instances are resampled to that
/// label's maximum instance length, pairwise distances are summed, and the
/// per-label sums are normalized to total 1. An all-zero total falls back to
/// the uniform profile (flagged). Every label needs at least one instance.
ComplexityProfile comp_measure(const Dataset& data, const ComplexityOptions& options = {});

const char* variant_name(const ComplexityOptions& options);  // "literal-sum" | "mean-pair"

}  // namespace ldcrf
