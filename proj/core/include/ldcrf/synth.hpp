#pragma once

#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// Generator for prototype-mixture gesture data. Each label owns one or more
/// prototype trajectories (smoothed random walks around a random offset);
/// every sample picks one of its label's prototypes uniformly, stretches it
/// to a jittered length, and adds per-frame Gaussian noise. Labels with
/// several well-separated prototypes come out "complex": their samples
/// spread across distinct shapes.
struct SynthSpec {
    int n_labels = 2;
    std::vector<int> prototypes_per_label = {1};  // single value broadcasts to all labels
    int feature_dim = 3;
    int mean_length = 30;
    int length_jitter = 0;  // sampled length is mean_length ± jitter, uniformly
    double noise_sigma = 0.0;
    int samples_per_label = 20;
    unsigned long long seed = 0;
};

Dataset synth(const SynthSpec& spec);

}  // namespace ldcrf
