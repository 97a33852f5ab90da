#include "ldcrf/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ldcrf {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double m = v.maxCoeff();
    if (std::isnan(m)) return m;  // poisoned scores must not fake impossibility
    if (!(m > kNegInf)) return kNegInf;  // empty mask or all -inf
    if (m == -kNegInf) return m;  // overflowed scores dominate the sum
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += std::exp(v[i] - m);
    }
    return m + std::log(s);
}

ChainPotentials potentials(const ModelParams& params, const SequenceSample& sample) {
    if (sample.dim() != params.feature_dim()) {
        throw std::invalid_argument("sample feature dimension " + std::to_string(sample.dim()) +
                                    " does not match model dimension " +
                                    std::to_string(params.feature_dim()));
    }
    const int T = sample.length();
    const int H = params.n_latent();
    const int d = sample.dim();

    ChainPotentials pot;
    pot.node_scores.resize(T, H);
    // emission = [weights | bias]; the bias column multiplies an implicit 1.
    pot.node_scores.noalias() = sample.features * params.emission.leftCols(d).transpose();
    pot.node_scores.rowwise() += params.emission.col(d).transpose();
    pot.edge_scores = params.transition;
    return pot;
}

ChainPotentials apply_label_mask(ChainPotentials pot, const LatentMap& map,
                                 const std::vector<int>& labels) {
    const int T = pot.length();
    if (static_cast<int>(labels.size()) != T) {
        throw std::invalid_argument("label series length " + std::to_string(labels.size()) +
                                    " does not match chain length " + std::to_string(T));
    }
    if (map.total() != pot.n_latent()) {
        throw std::invalid_argument("latent map size does not match potentials");
    }
    for (int t = 0; t < T; ++t) {
        const int y = labels[t];
        if (y < 0 || y >= map.n_labels()) {
            throw std::invalid_argument("label " + std::to_string(y) + " at frame " +
                                        std::to_string(t) + " outside [0, " +
                                        std::to_string(map.n_labels()) + ")");
        }
        const int lo = map.offset(y);
        const int hi = lo + map.count(y);
        for (int h = 0; h < pot.n_latent(); ++h) {
            if (h < lo || h >= hi) pot.node_scores(t, h) = kNegInf;
        }
    }
    return pot;
}

PosteriorTables forward_backward(const ChainPotentials& pot) {
    const int T = pot.length();
    const int H = pot.n_latent();
    if (T < 1 || H < 1) throw std::invalid_argument("potentials must cover T >= 1, |H| >= 1");

    // alpha(t, h) = log sum over prefixes ending in h; beta(t, h) the suffix dual.
    Eigen::MatrixXd alpha(T, H), beta(T, H);
    Eigen::VectorXd work(H);

    alpha.row(0) = pot.node_scores.row(0);
    for (int t = 1; t < T; ++t) {
        for (int b = 0; b < H; ++b) {
            work = alpha.row(t - 1).transpose() + pot.edge_scores.col(b);
            alpha(t, b) = pot.node_scores(t, b) + log_sum_exp(work);
        }
    }

    beta.row(T - 1).setZero();
    for (int t = T - 2; t >= 0; --t) {
        for (int a = 0; a < H; ++a) {
            work = pot.edge_scores.row(a).transpose() + pot.node_scores.row(t + 1).transpose() +
                   beta.row(t + 1).transpose();
            beta(t, a) = log_sum_exp(work);
        }
    }

    PosteriorTables tables;
    tables.log_partition = log_sum_exp(alpha.row(T - 1).transpose());
    if (tables.log_partition == kNegInf) {
        throw std::invalid_argument("chain admits no path with finite score");
    }

    tables.node_marginals.resize(T, H);
    for (int t = 0; t < T; ++t) {
        for (int h = 0; h < H; ++h) {
            tables.node_marginals(t, h) =
                std::exp(alpha(t, h) + beta(t, h) - tables.log_partition);
        }
    }

    tables.edge_marginals.reserve(T > 1 ? T - 1 : 0);
    for (int t = 1; t < T; ++t) {
        Eigen::MatrixXd slice(H, H);
        for (int a = 0; a < H; ++a) {
            for (int b = 0; b < H; ++b) {
                slice(a, b) = std::exp(alpha(t - 1, a) + pot.edge_scores(a, b) +
                                       pot.node_scores(t, b) + beta(t, b) -
                                       tables.log_partition);
            }
        }
        tables.edge_marginals.push_back(std::move(slice));
    }
    return tables;
}

double masked_log_sum(const ChainPotentials& pot, const LatentMap& map,
                      const std::vector<int>& labels) {
    const ChainPotentials masked = apply_label_mask(pot, map, labels);
    const int T = masked.length();
    const int H = masked.n_latent();

    Eigen::VectorXd alpha = masked.node_scores.row(0).transpose();
    Eigen::VectorXd next(H), work(H);
    for (int t = 1; t < T; ++t) {
        for (int b = 0; b < H; ++b) {
            if (masked.node_scores(t, b) == kNegInf) {
                next[b] = kNegInf;
                continue;
            }
            work = alpha + masked.edge_scores.col(b);
            next[b] = masked.node_scores(t, b) + log_sum_exp(work);
        }
        alpha.swap(next);
    }
    return log_sum_exp(alpha);
}

Eigen::MatrixXd label_posteriors(const PosteriorTables& tables, const LatentMap& map) {
    const int T = static_cast<int>(tables.node_marginals.rows());
    if (map.total() != static_cast<int>(tables.node_marginals.cols())) {
        throw std::invalid_argument("latent map size does not match posterior tables");
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T, map.n_labels());
    for (int t = 0; t < T; ++t) {
        for (int y = 0; y < map.n_labels(); ++y) {
            out(t, y) =
                tables.node_marginals.row(t).segment(map.offset(y), map.count(y)).sum();
        }
    }
    return out;
}

std::vector<int> predict(const ModelParams& params, const LatentMap& map,
                         const SequenceSample& sample) {
    const Eigen::MatrixXd post = label_posteriors(forward_backward(potentials(params, sample)), map);
    std::vector<int> out(post.rows());
    for (Eigen::Index t = 0; t < post.rows(); ++t) {
        int best = 0;
        for (int y = 1; y < map.n_labels(); ++y) {
            if (post(t, y) > post(t, best)) best = y;
        }
        out[t] = best;
    }
    return out;
}

}  // namespace ldcrf
