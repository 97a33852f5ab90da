#include "ldcrf/evaluation.hpp"

#include <stdexcept>

#include "ldcrf/inference.hpp"

namespace ldcrf {

double frame_accuracy(const std::vector<std::vector<int>>& pred,
                      const std::vector<std::vector<int>>& truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("prediction and truth have different sequence counts");
    }
    std::int64_t correct = 0;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i].size() != truth[i].size()) {
            throw std::invalid_argument("sequence " + std::to_string(i) +
                                        " has mismatched lengths");
        }
        for (std::size_t t = 0; t < pred[i].size(); ++t) {
            correct += pred[i][t] == truth[i][t];
        }
        total += static_cast<std::int64_t>(pred[i].size());
    }
    if (total == 0) throw std::invalid_argument("no frames to score");
    return static_cast<double>(correct) / static_cast<double>(total);
}

Eigen::MatrixXd confusion(const std::vector<std::vector<int>>& pred,
                          const std::vector<std::vector<int>>& truth, int n_labels,
                          bool normalize) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("prediction and truth have different sequence counts");
    }
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n_labels, n_labels);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i].size() != truth[i].size()) {
            throw std::invalid_argument("sequence " + std::to_string(i) +
                                        " has mismatched lengths");
        }
        for (std::size_t t = 0; t < pred[i].size(); ++t) {
            counts(truth[i][t], pred[i][t]) += 1.0;
        }
    }
    if (!normalize) return counts;
    for (Eigen::Index y = 0; y < counts.rows(); ++y) {
        const double row_sum = counts.row(y).sum();
        if (row_sum > 0.0) counts.row(y) /= row_sum;
    }
    return counts;
}

EvalResult evaluate(const ModelParams& params, const LatentMap& map, const Dataset& data) {
    EvalResult result;
    std::vector<std::vector<int>> truth;
    for (const SequenceSample& sample : data.samples) {
        result.predictions.push_back(predict(params, map, sample));
        truth.push_back(sample.labels);
    }
    result.accuracy = frame_accuracy(result.predictions, truth);
    result.counts = confusion(result.predictions, truth, map.n_labels(), false);
    result.normalized = confusion(result.predictions, truth, map.n_labels(), true);
    result.total_frames = static_cast<std::int64_t>(result.counts.sum());
    result.correct = static_cast<std::int64_t>(result.counts.trace());
    return result;
}

}  // namespace ldcrf
