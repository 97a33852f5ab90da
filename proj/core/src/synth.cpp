#include "ldcrf/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ldcrf/complexity.hpp"
#include "ldcrf/rng.hpp"

namespace ldcrf {
namespace {

constexpr double kOffsetSigma = 2.0;  // separates prototypes from each other
constexpr double kStepSigma = 0.15;   // random-walk increment scale; prototypes stay compact
constexpr int kSmoothWindow = 5;      // centered moving average, clamped at edges

Eigen::MatrixXd prototype_walk(Rng& rng, int length, int dim) {
    Eigen::MatrixXd walk(length, dim);
    for (int j = 0; j < dim; ++j) walk(0, j) = kOffsetSigma * rng.normal();
    for (int t = 1; t < length; ++t) {
        for (int j = 0; j < dim; ++j) {
            walk(t, j) = walk(t - 1, j) + kStepSigma * rng.normal();
        }
    }
    Eigen::MatrixXd smooth(length, dim);
    const int half = kSmoothWindow / 2;
    for (int t = 0; t < length; ++t) {
        const int lo = std::max(0, t - half);
        const int hi = std::min(length - 1, t + half);
        smooth.row(t) = walk.middleRows(lo, hi - lo + 1).colwise().mean();
    }
    return smooth;
}

std::vector<int> broadcast_counts(const SynthSpec& spec) {
    std::vector<int> counts = spec.prototypes_per_label;
    if (counts.size() == 1) counts.assign(spec.n_labels, counts.front());
    if (static_cast<int>(counts.size()) != spec.n_labels) {
        throw std::invalid_argument("prototypes_per_label needs 1 or n_labels entries");
    }
    for (int c : counts) {
        if (c < 1) throw std::invalid_argument("prototype counts must be at least 1");
    }
    return counts;
}

}  // namespace

Dataset synth(const SynthSpec& spec) {
    if (spec.n_labels < 1 || spec.feature_dim < 1 || spec.mean_length < 2 ||
        spec.samples_per_label < 1) {
        throw std::invalid_argument("synth counts must be positive (mean_length at least 2)");
    }
    if (spec.length_jitter < 0 || spec.noise_sigma < 0.0) {
        throw std::invalid_argument("length_jitter and noise_sigma must be non-negative");
    }
    const std::vector<int> prototype_counts = broadcast_counts(spec);

    Rng rng(spec.seed);
    std::vector<std::vector<Eigen::MatrixXd>> prototypes(spec.n_labels);
    for (int y = 0; y < spec.n_labels; ++y) {
        for (int p = 0; p < prototype_counts[y]; ++p) {
            prototypes[y].push_back(prototype_walk(rng, spec.mean_length, spec.feature_dim));
        }
    }

    Dataset dataset;
    dataset.n_labels = spec.n_labels;
    dataset.feature_dim = spec.feature_dim;
    for (int y = 0; y < spec.n_labels; ++y) {
        dataset.label_names.push_back(std::to_string(y));
    }
    for (int y = 0; y < spec.n_labels; ++y) {
        for (int k = 0; k < spec.samples_per_label; ++k) {
            const int pick = static_cast<int>(rng.below(prototypes[y].size()));
            int length = spec.mean_length;
            if (spec.length_jitter > 0) {
                length += rng.uniform_int(-spec.length_jitter, spec.length_jitter);
            }
            length = std::max(length, 2);

            SequenceSample sample;
            sample.id = "synth-" + std::to_string(y) + "-" + std::to_string(k);
            sample.features = resample(prototypes[y][pick], length);
            if (spec.noise_sigma > 0.0) {
                for (Eigen::Index t = 0; t < sample.features.rows(); ++t) {
                    for (Eigen::Index j = 0; j < sample.features.cols(); ++j) {
                        sample.features(t, j) += spec.noise_sigma * rng.normal();
                    }
                }
            }
            sample.labels.assign(length, y);
            dataset.samples.push_back(std::move(sample));
        }
    }
    validate(dataset);
    return dataset;
}

}  // namespace ldcrf
