#pragma once

// Independent plain linear-chain CRF over the labels themselves: no latent
// layer, probability-domain forward-backward with per-frame scaling (a
// different numeric route than the library's log-domain recursions), and a
// plain backtracking gradient-descent optimizer. Used to pin down the
// degenerate one-latent-per-label case.

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "ldcrf/types.hpp"

namespace oracle {

struct PlainCrf {
    Eigen::MatrixXd emission;    // n_labels x (feature_dim + 1), last column bias
    Eigen::MatrixXd transition;  // n_labels x n_labels

    static PlainCrf zeros(int n_labels, int feature_dim) {
        PlainCrf model;
        model.emission = Eigen::MatrixXd::Zero(n_labels, feature_dim + 1);
        model.transition = Eigen::MatrixXd::Zero(n_labels, n_labels);
        return model;
    }
};

struct ScaledTables {
    Eigen::MatrixXd alpha;  // T x L, scaled forward
    Eigen::MatrixXd beta;   // T x L, scaled backward
    std::vector<double> scale;
    double log_partition = 0.0;
};

inline Eigen::MatrixXd unary_weights(const PlainCrf& model, const ldcrf::SequenceSample& sample) {
    const int frames = sample.length();
    const int n_labels = static_cast<int>(model.emission.rows());
    const int dim = static_cast<int>(model.emission.cols()) - 1;
    Eigen::MatrixXd weights(frames, n_labels);
    for (int t = 0; t < frames; ++t) {
        for (int y = 0; y < n_labels; ++y) {
            double score = model.emission(y, dim);
            for (int j = 0; j < dim; ++j) score += model.emission(y, j) * sample.features(t, j);
            weights(t, y) = std::exp(score);
        }
    }
    return weights;
}

inline ScaledTables scaled_forward_backward(const PlainCrf& model,
                                            const ldcrf::SequenceSample& sample) {
    const Eigen::MatrixXd psi = unary_weights(model, sample);
    const Eigen::MatrixXd trans = model.transition.array().exp();
    const int frames = static_cast<int>(psi.rows());

    ScaledTables tables;
    tables.alpha.resizeLike(psi);
    tables.beta.resizeLike(psi);
    tables.scale.resize(frames);

    tables.alpha.row(0) = psi.row(0);
    tables.scale[0] = tables.alpha.row(0).sum();
    tables.alpha.row(0) /= tables.scale[0];
    for (int t = 1; t < frames; ++t) {
        tables.alpha.row(t) = (tables.alpha.row(t - 1) * trans).cwiseProduct(psi.row(t));
        tables.scale[t] = tables.alpha.row(t).sum();
        tables.alpha.row(t) /= tables.scale[t];
    }

    tables.beta.row(frames - 1).setOnes();
    for (int t = frames - 2; t >= 0; --t) {
        tables.beta.row(t) =
            (trans * tables.beta.row(t + 1).cwiseProduct(psi.row(t + 1)).transpose()).transpose() /
            tables.scale[t + 1];
    }

    tables.log_partition = 0.0;
    for (double s : tables.scale) tables.log_partition += std::log(s);
    return tables;
}

/// NLL of the labeled paths plus gradient with respect to (emission, transition).
inline double plain_nll_and_gradient(const PlainCrf& model, const ldcrf::Dataset& data, double l2,
                                     PlainCrf& grad) {
    const int n_labels = static_cast<int>(model.emission.rows());
    const int dim = static_cast<int>(model.emission.cols()) - 1;
    grad = PlainCrf::zeros(n_labels, dim);

    double nll = 0.0;
    for (const ldcrf::SequenceSample& sample : data.samples) {
        const int frames = sample.length();
        const ScaledTables tables = scaled_forward_backward(model, sample);
        const Eigen::MatrixXd psi = unary_weights(model, sample);
        const Eigen::MatrixXd trans = model.transition.array().exp();

        double path_score = 0.0;
        for (int t = 0; t < frames; ++t) {
            const int y = sample.labels[t];
            path_score += model.emission(y, dim);
            for (int j = 0; j < dim; ++j) path_score += model.emission(y, j) * sample.features(t, j);
            if (t > 0) path_score += model.transition(sample.labels[t - 1], y);
        }
        nll += tables.log_partition - path_score;

        for (int t = 0; t < frames; ++t) {
            Eigen::VectorXd marginal =
                tables.alpha.row(t).cwiseProduct(tables.beta.row(t)).transpose();
            marginal /= marginal.sum();
            for (int y = 0; y < n_labels; ++y) {
                const double diff = marginal(y) - (sample.labels[t] == y ? 1.0 : 0.0);
                for (int j = 0; j < dim; ++j) grad.emission(y, j) += diff * sample.features(t, j);
                grad.emission(y, dim) += diff;
            }
        }
        for (int t = 1; t < frames; ++t) {
            Eigen::MatrixXd pair =
                (tables.alpha.row(t - 1).transpose() * tables.beta.row(t).cwiseProduct(psi.row(t)))
                    .cwiseProduct(trans) /
                tables.scale[t];
            pair /= pair.sum();
            grad.transition += pair;
            grad.transition(sample.labels[t - 1], sample.labels[t]) -= 1.0;
        }
    }

    nll += 0.5 * l2 * (model.emission.squaredNorm() + model.transition.squaredNorm());
    grad.emission += l2 * model.emission;
    grad.transition += l2 * model.transition;
    return nll;
}

/// Backtracking gradient descent from zeros; the regularized objective is
/// convex, so this lands on the same optimum as any other solver.
inline PlainCrf plain_train(const ldcrf::Dataset& data, double l2, int max_iterations = 50000,
                            double grad_tol = 1e-9) {
    PlainCrf model = PlainCrf::zeros(data.n_labels, data.feature_dim);
    PlainCrf grad = PlainCrf::zeros(data.n_labels, data.feature_dim);
    double nll = plain_nll_and_gradient(model, data, l2, grad);
    double step = 1.0;
    for (int it = 0; it < max_iterations; ++it) {
        const double grad_sq = grad.emission.squaredNorm() + grad.transition.squaredNorm();
        if (std::sqrt(grad_sq) < grad_tol) break;
        PlainCrf next = model;
        PlainCrf next_grad = grad;
        double next_nll = nll;
        step *= 2.0;
        while (true) {
            next.emission = model.emission - step * grad.emission;
            next.transition = model.transition - step * grad.transition;
            next_nll = plain_nll_and_gradient(next, data, l2, next_grad);
            if (std::isfinite(next_nll) && next_nll <= nll - 1e-4 * step * grad_sq) break;
            step *= 0.5;
            if (step < 1e-18) return model;
        }
        model = next;
        grad = next_grad;
        nll = next_nll;
    }
    return model;
}

inline double plain_nll(const PlainCrf& model, const ldcrf::Dataset& data, double l2) {
    PlainCrf scratch;
    return plain_nll_and_gradient(model, data, l2, scratch);
}

inline std::vector<int> plain_predict(const PlainCrf& model, const ldcrf::SequenceSample& sample) {
    const ScaledTables tables = scaled_forward_backward(model, sample);
    std::vector<int> out(sample.length());
    for (int t = 0; t < sample.length(); ++t) {
        Eigen::VectorXd marginal = tables.alpha.row(t).cwiseProduct(tables.beta.row(t)).transpose();
        int best = 0;
        for (int y = 1; y < marginal.size(); ++y) {
            if (marginal(y) > marginal(best)) best = y;
        }
        out[t] = best;
    }
    return out;
}

}  // namespace oracle
