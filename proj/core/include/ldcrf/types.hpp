#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace ldcrf {

/// One gesture recording: a T x d feature matrix (one frame per row) and a
/// per-frame label series of the same length.
struct SequenceSample {
    std::string id;
    Eigen::MatrixXd features;  // T x d
    std::vector<int> labels;   // length T, values in [0, n_labels)

    int length() const { return static_cast<int>(features.rows()); }
    int dim() const { return static_cast<int>(features.cols()); }
};

struct Dataset {
    std::vector<SequenceSample> samples;
    int n_labels = 0;
    int feature_dim = 0;
    std::vector<std::string> label_names;  // empty, or one name per label
};

/// Checks the Dataset invariants: at least one sample, consistent feature
/// dimension, labels inside [0, n_labels) with every label occurring at
/// least once, and matching feature/label lengths.
/// Throws std::invalid_argument on the first violation found.
void validate(const Dataset& data);

/// Assignment of disjoint latent-value ranges to label values. Latent values
/// are indexed contiguously by label: label y owns [offset(y), offset(y) +
/// count(y)). The range layout makes label lookup O(1) and lets inference
/// mask a frame to a label by an index-range test.
class LatentMap {
 public:
    LatentMap() = default;
    explicit LatentMap(std::vector<int> counts);

    int n_labels() const { return static_cast<int>(counts_.size()); }
    int total() const { return total_; }
    int count(int y) const { return counts_[y]; }
    int offset(int y) const { return offsets_[y]; }
    const std::vector<int>& counts() const { return counts_; }

    /// The unique label owning latent value h.
    int label_of(int h) const;

 private:
    std::vector<int> counts_;
    std::vector<int> offsets_;   // size n_labels + 1, offsets_[n_labels] == total_
    std::vector<int> label_of_;  // size total_
    int total_ = 0;
};

/// Equal split of `total` latent values over `n_labels` labels. Requires
/// total >= n_labels and total divisible by n_labels.
LatentMap uniform_latent_map(int n_labels, int total);

/// Linear-chain weights. Emission row h scores latent value h against a
/// bias-augmented frame (the last column multiplies an implicit constant-1
/// feature); transition(a, b) scores latent value a at frame t-1 followed by
/// b at frame t, shared across positions.
struct ModelParams {
    Eigen::MatrixXd emission;    // |H| x (d + 1)
    Eigen::MatrixXd transition;  // |H| x |H|

    int n_latent() const { return static_cast<int>(emission.rows()); }
    int feature_dim() const { return static_cast<int>(emission.cols()) - 1; }
};

/// Zero-initialized parameters for the given shape.
ModelParams zero_params(int n_latent, int feature_dim);

}  // namespace ldcrf
