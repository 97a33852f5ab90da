#pragma once

#include <cstdint>
#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

struct TrainConfig {
    double l2_strength = 1e-2;
    int max_iterations = 200;
    double gradient_tolerance = 1e-5;
    std::uint64_t seed = 0;
};

struct IterationRecord {
    int iteration = 0;
    double nll = 0.0;
    double grad_norm = 0.0;  // infinity norm
};

struct TrainResult {
    ModelParams params;
    double final_nll = 0.0;
    int iterations_used = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;  // iteration 0 is the starting point
};

struct NllGradient {
    double value = 0.0;
    ModelParams gradient;
};

/// Regularized negative log-likelihood of the latent-marginalized conditional
/// objective and its gradient. Per sample the value is log Z(x) minus the log
/// sum over label-consistent latent paths; the gradient is the gap between
/// free-chain and label-masked feature expectations. `threads` only changes
/// wall time: per-sample terms are reduced in a fixed order, so the result is
/// bit-stable for any worker count.
NllGradient nll_and_gradient(const ModelParams& params, const LatentMap& map,
                             const Dataset& data, double l2, int threads = 1);

/// Initial latent value per frame: the frames of each label, pooled across
/// samples, are partitioned by PCA-seeded k-means into that label's latent
/// range. Deterministic; `seed` is reserved (the procedure has no random
/// step). A label with fewer pooled frames than latent values is an error.
std::vector<std::vector<int>> init_latent_assignment(const Dataset& data, const LatentMap& map,
                                                     std::uint64_t seed);

/// Starting weights from a latent assignment: emission row h is the
/// epsilon-scaled centroid of its frames (bias epsilon); transitions are
/// epsilon times log add-one-smoothed latent bigram frequencies.
ModelParams warm_start_params(const Dataset& data, const LatentMap& map,
                              const std::vector<std::vector<int>>& assignment, double epsilon);

/// Full-batch training: k-means latent initialization, warm start, then
/// L-BFGS with backtracking line search on nll_and_gradient until the
/// gradient infinity-norm drops below tolerance or the iteration budget runs
/// out. Deterministic given data order and config.
TrainResult train(const Dataset& data, const LatentMap& map, const TrainConfig& config,
                  int threads = 1);

}  // namespace ldcrf
