#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// Fraction of frames predicted correctly, pooled over all sequences
/// (micro-averaged). Shapes must match exactly.
double frame_accuracy(const std::vector<std::vector<int>>& pred,
                      const std::vector<std::vector<int>>& truth);

/// Confusion counts: entry (i, j) is the number of frames with truth i
/// predicted j. With normalize, each non-empty row is divided by its sum;
/// rows of labels absent from the truth stay zero.
Eigen::MatrixXd confusion(const std::vector<std::vector<int>>& pred,
                          const std::vector<std::vector<int>>& truth, int n_labels,
                          bool normalize);

struct EvalResult {
    double accuracy = 0.0;
    std::int64_t correct = 0;
    std::int64_t total_frames = 0;
    Eigen::MatrixXd counts;      // raw confusion
    Eigen::MatrixXd normalized;  // row-normalized confusion
    std::vector<std::vector<int>> predictions;
};

EvalResult evaluate(const ModelParams& params, const LatentMap& map, const Dataset& data);

}  // namespace ldcrf
