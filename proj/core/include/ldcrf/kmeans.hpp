#pragma once

#include <Eigen/Core>

#include <vector>

namespace ldcrf {

/// Top principal component of row-vector data, sign-fixed so the entry of
/// largest magnitude is positive. Deterministic.
Eigen::VectorXd first_principal_component(const Eigen::MatrixXd& rows);

struct KMeansResult {
    std::vector<int> assignment;  // one cluster index per input row
    Eigen::MatrixXd centroids;    // k x d
    int iterations = 0;
};

/// Deterministic Lloyd k-means. Initial centroid j is the mean of the rows
/// whose first-principal-component score falls in the j-th of k
/// equal-frequency bins; distance ties go to the lowest cluster index, and a
/// cluster that empties is repaired by moving the largest cluster's farthest
/// member into it. Requires 1 <= k <= rows.
KMeansResult kmeans_pca(const Eigen::MatrixXd& rows, int k, int max_iterations = 100);

}  // namespace ldcrf
