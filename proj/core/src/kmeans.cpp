#include "ldcrf/kmeans.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ldcrf {

Eigen::VectorXd first_principal_component(const Eigen::MatrixXd& rows) {
    if (rows.rows() < 1 || rows.cols() < 1) {
        throw std::invalid_argument("need a nonempty data matrix");
    }
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const Eigen::MatrixXd centered = rows.rowwise() - mean;
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(rows.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    Eigen::VectorXd pc = solver.eigenvectors().col(rows.cols() - 1);  // largest eigenvalue

    // Fix the sign: largest-magnitude entry positive.
    int arg = 0;
    for (int i = 1; i < pc.size(); ++i) {
        if (std::abs(pc[i]) > std::abs(pc[arg])) arg = i;
    }
    if (pc[arg] < 0.0) pc = -pc;
    return pc;
}

namespace {

// Moves the farthest member of the largest cluster into each empty cluster.
void repair_empty_clusters(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& centroids,
                           std::vector<int>& assignment, std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    for (int empty = 0; empty < k; ++empty) {
        if (sizes[empty] > 0) continue;
        int donor = -1;
        for (int c = 0; c < k; ++c) {
            if (sizes[c] >= 2 && (donor < 0 || sizes[c] > sizes[donor])) donor = c;
        }
        if (donor < 0) continue;  // fewer distinct rows than clusters; nothing to split
        int farthest = -1;
        double far_dist = -1.0;
        for (int i = 0; i < static_cast<int>(assignment.size()); ++i) {
            if (assignment[i] != donor) continue;
            const double dist = (rows.row(i) - centroids.row(donor)).squaredNorm();
            if (dist > far_dist) {
                far_dist = dist;
                farthest = i;
            }
        }
        assignment[farthest] = empty;
        --sizes[donor];
        ++sizes[empty];
    }
}

}  // namespace

KMeansResult kmeans_pca(const Eigen::MatrixXd& rows, int k, int max_iterations) {
    const int m = static_cast<int>(rows.rows());
    const int d = static_cast<int>(rows.cols());
    if (k < 1) throw std::invalid_argument("need k >= 1");
    if (m < k) throw std::invalid_argument("fewer rows than clusters");

    KMeansResult result;
    result.centroids.resize(k, d);
    result.assignment.assign(m, 0);
    if (k == 1) {
        result.centroids.row(0) = rows.colwise().mean();
        return result;
    }

    // Seed centroids from equal-frequency bins along the first principal
    // component; stable sort keeps duplicate scores in input order.
    const Eigen::VectorXd pc = first_principal_component(rows);
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    Eigen::VectorXd scores(m);
    for (int i = 0; i < m; ++i) scores[i] = (rows.row(i) - mean).dot(pc);

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] < scores[b]; });

    for (int j = 0; j < k; ++j) {
        const int lo = (j * m) / k;
        const int hi = ((j + 1) * m) / k;
        Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(d);
        for (int r = lo; r < hi; ++r) centroid += rows.row(order[r]);
        result.centroids.row(j) = centroid / static_cast<double>(hi - lo);
    }

    std::vector<int> assignment(m, -1);
    std::vector<int> sizes(k, 0);
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::vector<int> next(m);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int i = 0; i < m; ++i) {
            int best = 0;
            double best_dist = (rows.row(i) - result.centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double dist = (rows.row(i) - result.centroids.row(c)).squaredNorm();
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            next[i] = best;
            ++sizes[best];
        }
        repair_empty_clusters(rows, result.centroids, next, sizes);

        result.iterations = iter + 1;
        const bool stable = (next == assignment);
        assignment.swap(next);

        for (int c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(d);
            for (int i = 0; i < m; ++i) {
                if (assignment[i] == c) centroid += rows.row(i);
            }
            result.centroids.row(c) = centroid / static_cast<double>(sizes[c]);
        }
        if (stable) break;
    }
    result.assignment = std::move(assignment);
    return result;
}

}  // namespace ldcrf
