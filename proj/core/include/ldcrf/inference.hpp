#pragma once

#include <Eigen/Core>

#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// log(sum_i exp(v_i)), max-shifted. -inf entries are transparent; an
/// all--inf input yields -inf. Overflowed (+inf) or poisoned (NaN) scores
/// propagate as non-finite results instead of faking impossibility.
double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Log-potentials of one latent chain. node_scores(t, h) is the emission
/// score of latent value h at frame t; edge_scores(a, b) is the stationary
/// transition score. Scores produced by potentials() are finite; a masked
/// chain (apply_label_mask) carries -inf at excluded node entries.
struct ChainPotentials {
    Eigen::MatrixXd node_scores;  // T x |H|
    Eigen::MatrixXd edge_scores;  // |H| x |H|

    int length() const { return static_cast<int>(node_scores.rows()); }
    int n_latent() const { return static_cast<int>(node_scores.cols()); }
};

/// Exact posteriors of a latent chain.
struct PosteriorTables {
    double log_partition = 0.0;
    Eigen::MatrixXd node_marginals;               // T x |H|, rows sum to 1
    std::vector<Eigen::MatrixXd> edge_marginals;  // T-1 slices, each |H| x |H| summing to 1
};

/// Emission scores of a sample under the model: node_scores(t, h) is the dot
/// product of emission row h with the bias-augmented frame t.
ChainPotentials potentials(const ModelParams& params, const SequenceSample& sample);

/// Restricts frame t to the latent range of labels[t] by setting every other
/// node score to -inf.
ChainPotentials apply_label_mask(ChainPotentials pot, const LatentMap& map,
                                 const std::vector<int>& labels);

/// Sum-product forward-backward in the log domain.
PosteriorTables forward_backward(const ChainPotentials& pot);

/// log of the summed weight of all latent paths consistent with the label
/// series: a forward pass with per-frame masking to each label's range.
double masked_log_sum(const ChainPotentials& pot, const LatentMap& map,
                      const std::vector<int>& labels);

/// T x n_labels matrix of per-frame label posteriors: each label's probability
/// is the sum of its latent values' node marginals.
Eigen::MatrixXd label_posteriors(const PosteriorTables& tables, const LatentMap& map);

/// Per-frame marginal decoding: argmax label posterior, ties broken toward
/// the lowest label index.
std::vector<int> predict(const ModelParams& params, const LatentMap& map,
                         const SequenceSample& sample);

}  // namespace ldcrf
