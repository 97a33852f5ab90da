#include "ldcrf/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "ldcrf/inference.hpp"
#include "ldcrf/kmeans.hpp"

namespace ldcrf {

namespace {

constexpr double kWarmStartEpsilon = 0.1;

struct SampleTerm {
    double nll = 0.0;
    Eigen::MatrixXd grad_emission;
    Eigen::MatrixXd grad_transition;
};

SampleTerm sample_term(const ModelParams& params, const LatentMap& map,
                       const SequenceSample& sample) {
    const int T = sample.length();
    const int H = params.n_latent();
    const int d = sample.dim();

    const ChainPotentials pot = potentials(params, sample);
    const PosteriorTables free = forward_backward(pot);
    const PosteriorTables clamped =
        forward_backward(apply_label_mask(pot, map, sample.labels));

    SampleTerm term;
    term.nll = free.log_partition - clamped.log_partition;

    Eigen::MatrixXd augmented(T, d + 1);
    augmented.leftCols(d) = sample.features;
    augmented.col(d).setOnes();

    const Eigen::MatrixXd coeff = free.node_marginals - clamped.node_marginals;  // T x H
    term.grad_emission.noalias() = coeff.transpose() * augmented;

    term.grad_transition = Eigen::MatrixXd::Zero(H, H);
    for (int t = 0; t + 1 < T; ++t) {
        term.grad_transition += free.edge_marginals[t] - clamped.edge_marginals[t];
    }
    return term;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots; the caller reduces them in index order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> cursor{0};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

NllGradient nll_and_gradient(const ModelParams& params, const LatentMap& map,
                             const Dataset& data, double l2, int threads) {
    if (map.total() != params.n_latent()) {
        throw std::invalid_argument("latent map size does not match parameters");
    }
    const int n = static_cast<int>(data.samples.size());
    std::vector<SampleTerm> terms(n);
    parallel_for(n, threads,
                 [&](int i) { terms[i] = sample_term(params, map, data.samples[i]); });

    NllGradient out;
    out.gradient = zero_params(params.n_latent(), params.feature_dim());
    for (const SampleTerm& term : terms) {  // fixed reduction order
        out.value += term.nll;
        out.gradient.emission += term.grad_emission;
        out.gradient.transition += term.grad_transition;
    }
    out.value += 0.5 * l2 *
                 (params.emission.squaredNorm() + params.transition.squaredNorm());
    out.gradient.emission += l2 * params.emission;
    out.gradient.transition += l2 * params.transition;
    return out;
}

std::vector<std::vector<int>> init_latent_assignment(const Dataset& data, const LatentMap& map,
                                                     std::uint64_t /*seed*/) {
    if (map.n_labels() != data.n_labels) {
        throw std::invalid_argument("latent map label count does not match dataset");
    }

    // Pool frame coordinates per label, in sample then frame order.
    std::vector<std::vector<std::pair<int, int>>> pooled(data.n_labels);
    for (int s = 0; s < static_cast<int>(data.samples.size()); ++s) {
        const SequenceSample& sample = data.samples[s];
        for (int t = 0; t < sample.length(); ++t) {
            pooled[sample.labels[t]].push_back({s, t});
        }
    }

    std::vector<std::vector<int>> assignment(data.samples.size());
    for (std::size_t s = 0; s < data.samples.size(); ++s) {
        assignment[s].assign(data.samples[s].length(), -1);
    }

    for (int y = 0; y < data.n_labels; ++y) {
        const int k = map.count(y);
        const int m = static_cast<int>(pooled[y].size());
        if (m < k) {
            throw std::invalid_argument("label " + std::to_string(y) + " has " +
                                        std::to_string(m) + " frames for " + std::to_string(k) +
                                        " latent values");
        }
        if (k == 1) {
            for (const auto& [s, t] : pooled[y]) assignment[s][t] = map.offset(y);
            continue;
        }
        Eigen::MatrixXd rows(m, data.feature_dim);
        for (int i = 0; i < m; ++i) {
            rows.row(i) = data.samples[pooled[y][i].first].features.row(pooled[y][i].second);
        }
        const KMeansResult clusters = kmeans_pca(rows, k);
        for (int i = 0; i < m; ++i) {
            const auto& [s, t] = pooled[y][i];
            assignment[s][t] = map.offset(y) + clusters.assignment[i];
        }
    }
    return assignment;
}

ModelParams warm_start_params(const Dataset& data, const LatentMap& map,
                              const std::vector<std::vector<int>>& assignment, double epsilon) {
    if (assignment.size() != data.samples.size()) {
        throw std::invalid_argument("assignment does not cover the dataset");
    }
    const int H = map.total();
    const int d = data.feature_dim;

    ModelParams params = zero_params(H, d);
    Eigen::MatrixXd centroid_sum = Eigen::MatrixXd::Zero(H, d);
    Eigen::VectorXd centroid_count = Eigen::VectorXd::Zero(H);
    Eigen::MatrixXd bigram = Eigen::MatrixXd::Zero(H, H);

    for (std::size_t s = 0; s < data.samples.size(); ++s) {
        const SequenceSample& sample = data.samples[s];
        const std::vector<int>& latents = assignment[s];
        if (static_cast<int>(latents.size()) != sample.length()) {
            throw std::invalid_argument("assignment length mismatch for sample '" + sample.id +
                                        "'");
        }
        for (int t = 0; t < sample.length(); ++t) {
            const int h = latents[t];
            if (h < 0 || h >= H) {
                throw std::invalid_argument("latent index out of range in assignment");
            }
            centroid_sum.row(h) += sample.features.row(t);
            centroid_count[h] += 1.0;
            if (t > 0) bigram(latents[t - 1], h) += 1.0;
        }
    }

    for (int h = 0; h < H; ++h) {
        if (centroid_count[h] > 0.0) {
            params.emission.row(h).head(d) = epsilon * centroid_sum.row(h) / centroid_count[h];
        }
        params.emission(h, d) = epsilon;
    }
    for (int a = 0; a < H; ++a) {
        const double row_total = bigram.row(a).sum() + H;  // add-one smoothing
        for (int b = 0; b < H; ++b) {
            params.transition(a, b) = epsilon * std::log((bigram(a, b) + 1.0) / row_total);
        }
    }
    return params;
}

namespace {

// Flat parameter vector: emission rows first, then transition rows.
Eigen::VectorXd pack(const ModelParams& p) {
    Eigen::VectorXd x(p.emission.size() + p.transition.size());
    int pos = 0;
    for (int i = 0; i < p.emission.rows(); ++i) {
        for (int j = 0; j < p.emission.cols(); ++j) x[pos++] = p.emission(i, j);
    }
    for (int i = 0; i < p.transition.rows(); ++i) {
        for (int j = 0; j < p.transition.cols(); ++j) x[pos++] = p.transition(i, j);
    }
    return x;
}

ModelParams unpack(const Eigen::VectorXd& x, int H, int d) {
    ModelParams p = zero_params(H, d);
    int pos = 0;
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < d + 1; ++j) p.emission(i, j) = x[pos++];
    }
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < H; ++j) p.transition(i, j) = x[pos++];
    }
    return p;
}

struct LbfgsPair {
    Eigen::VectorXd s, y;
    double rho = 0.0;
};

// Two-loop recursion; returns the descent direction -B^{-1} g.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& grad,
                                const std::deque<LbfgsPair>& history) {
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(history.size());
    for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
        alpha[i] = history[i].rho * history[i].s.dot(q);
        q -= alpha[i] * history[i].y;
    }
    if (!history.empty()) {
        const LbfgsPair& last = history.back();
        q *= last.s.dot(last.y) / last.y.dot(last.y);
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
        const double beta = history[i].rho * history[i].y.dot(q);
        q += (alpha[i] - beta) * history[i].s;
    }
    return -q;
}

}  // namespace

TrainResult train(const Dataset& data, const LatentMap& map, const TrainConfig& config,
                  int threads) {
    if (data.samples.empty()) throw std::invalid_argument("cannot train on an empty dataset");
    if (config.max_iterations < 1) throw std::invalid_argument("need max_iterations >= 1");
    if (config.gradient_tolerance <= 0.0) throw std::invalid_argument("need tolerance > 0");
    if (config.l2_strength < 0.0) throw std::invalid_argument("need l2_strength >= 0");

    const int H = map.total();
    const int d = data.feature_dim;
    const auto assignment = init_latent_assignment(data, map, config.seed);
    const ModelParams start = warm_start_params(data, map, assignment, kWarmStartEpsilon);

    const auto eval = [&](const Eigen::VectorXd& x) {
        const NllGradient ng = nll_and_gradient(unpack(x, H, d), map, data,
                                                config.l2_strength, threads);
        return std::make_pair(ng.value, pack(ng.gradient));
    };

    Eigen::VectorXd x = pack(start);
    auto [f, g] = eval(x);
    if (!std::isfinite(f)) {
        throw std::runtime_error("non-finite NLL at iteration 0");
    }

    TrainResult result;
    result.trace.push_back({0, f, g.lpNorm<Eigen::Infinity>()});

    double best_f = f;
    Eigen::VectorXd best_x = x;
    std::deque<LbfgsPair> history;
    constexpr int kHistory = 8;
    bool converged = false;
    int accepted = 0;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const double gnorm = g.lpNorm<Eigen::Infinity>();
        if (gnorm <= config.gradient_tolerance) {
            converged = true;
            break;
        }

        Eigen::VectorXd dir = lbfgs_direction(g, history);
        double slope = dir.dot(g);
        if (!(slope < 0.0)) {  // not a descent direction; fall back to steepest descent
            history.clear();
            dir = -g;
            slope = dir.dot(g);
        }

        // Backtracking Armijo line search.
        double step = history.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1.0)) : 1.0;
        bool found = false;
        double f_new = f;
        Eigen::VectorXd x_new, g_new;
        for (int bt = 0; bt < 60; ++bt) {
            x_new = x + step * dir;
            auto [fc, gc] = eval(x_new);
            if (std::isfinite(fc) && fc <= f + 1e-4 * step * slope) {
                f_new = fc;
                g_new = std::move(gc);
                found = true;
                break;
            }
            step *= 0.5;
        }
        if (!found) break;  // no acceptable step remains

        LbfgsPair pair;
        pair.s = x_new - x;
        pair.y = g_new - g;
        const double sy = pair.s.dot(pair.y);
        if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > kHistory) history.pop_front();
        }

        x = std::move(x_new);
        f = f_new;
        g = std::move(g_new);
        if (!std::isfinite(f)) {
            throw std::runtime_error("non-finite NLL at iteration " + std::to_string(iter));
        }
        ++accepted;
        result.trace.push_back({accepted, f, g.lpNorm<Eigen::Infinity>()});
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        if (g.lpNorm<Eigen::Infinity>() <= config.gradient_tolerance) {
            converged = true;
            break;
        }
    }

    result.params = unpack(best_x, H, d);
    result.final_nll = best_f;
    result.iterations_used = accepted;
    result.converged = converged;
    return result;
}

}  // namespace ldcrf
