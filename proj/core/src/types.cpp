#include "ldcrf/types.hpp"

#include <stdexcept>
#include <string>

namespace ldcrf {

void validate(const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("dataset has no samples");
    if (data.n_labels < 1) throw std::invalid_argument("dataset needs n_labels >= 1");
    if (data.feature_dim < 1) throw std::invalid_argument("dataset needs feature_dim >= 1");
    if (!data.label_names.empty() &&
        static_cast<int>(data.label_names.size()) != data.n_labels) {
        throw std::invalid_argument("label_names must be empty or have one entry per label");
    }

    std::vector<bool> seen(data.n_labels, false);
    for (const SequenceSample& s : data.samples) {
        if (s.length() < 1) {
            throw std::invalid_argument("sample '" + s.id + "' is empty");
        }
        if (s.dim() != data.feature_dim) {
            throw std::invalid_argument("sample '" + s.id + "' has feature dimension " +
                                        std::to_string(s.dim()) + ", expected " +
                                        std::to_string(data.feature_dim));
        }
        if (static_cast<int>(s.labels.size()) != s.length()) {
            throw std::invalid_argument("sample '" + s.id + "' has " +
                                        std::to_string(s.labels.size()) + " labels for " +
                                        std::to_string(s.length()) + " frames");
        }
        for (int y : s.labels) {
            if (y < 0 || y >= data.n_labels) {
                throw std::invalid_argument("sample '" + s.id + "' uses label " +
                                            std::to_string(y) + " outside [0, " +
                                            std::to_string(data.n_labels) + ")");
            }
            seen[y] = true;
        }
    }
    for (int y = 0; y < data.n_labels; ++y) {
        if (!seen[y]) {
            throw std::invalid_argument("label " + std::to_string(y) +
                                        " never occurs in any sample");
        }
    }
}

LatentMap::LatentMap(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw std::invalid_argument("latent map needs at least one label");
    offsets_.resize(counts_.size() + 1);
    offsets_[0] = 0;
    for (std::size_t y = 0; y < counts_.size(); ++y) {
        if (counts_[y] < 1) {
            throw std::invalid_argument("label " + std::to_string(y) +
                                        " must own at least one latent value");
        }
        offsets_[y + 1] = offsets_[y] + counts_[y];
    }
    total_ = offsets_.back();
    label_of_.resize(total_);
    for (std::size_t y = 0; y < counts_.size(); ++y) {
        for (int h = offsets_[y]; h < offsets_[y + 1]; ++h) {
            label_of_[h] = static_cast<int>(y);
        }
    }
}

int LatentMap::label_of(int h) const {
    if (h < 0 || h >= total_) {
        throw std::invalid_argument("latent index " + std::to_string(h) + " outside [0, " +
                                    std::to_string(total_) + ")");
    }
    return label_of_[h];
}

LatentMap uniform_latent_map(int n_labels, int total) {
    if (n_labels < 1) throw std::invalid_argument("need n_labels >= 1");
    if (total < n_labels) {
        throw std::invalid_argument("total " + std::to_string(total) +
                                    " smaller than label count " + std::to_string(n_labels));
    }
    if (total % n_labels != 0) {
        throw std::invalid_argument("total " + std::to_string(total) +
                                    " not divisible by label count " +
                                    std::to_string(n_labels));
    }
    return LatentMap(std::vector<int>(n_labels, total / n_labels));
}

ModelParams zero_params(int n_latent, int feature_dim) {
    ModelParams p;
    p.emission = Eigen::MatrixXd::Zero(n_latent, feature_dim + 1);
    p.transition = Eigen::MatrixXd::Zero(n_latent, n_latent);
    return p;
}

}  // namespace ldcrf
