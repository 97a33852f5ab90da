#include "ldcrf/complexity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldcrf {

Eigen::MatrixXd resample(const Eigen::MatrixXd& series, int target_length) {
    const int T = static_cast<int>(series.rows());
    if (T < 1) throw std::invalid_argument("cannot resample an empty series");
    if (target_length < 1) throw std::invalid_argument("need target_length >= 1");
    if (target_length == T) return series;

    Eigen::MatrixXd out(target_length, series.cols());
    if (T == 1) {
        out.rowwise() = series.row(0);
        return out;
    }
    if (target_length == 1) {
        out.row(0) = series.row(0);
        return out;
    }
    const double scale = static_cast<double>(T - 1) / static_cast<double>(target_length - 1);
    for (int i = 0; i < target_length; ++i) {
        const double pos = i * scale;
        int lo = static_cast<int>(pos);
        if (lo > T - 2) lo = T - 2;
        const double frac = pos - lo;
        out.row(i) = (1.0 - frac) * series.row(lo) + frac * series.row(lo + 1);
    }
    return out;
}

double pair_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, PairDistance kind) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("pair_distance needs series of equal shape");
    }
    // Scalar accumulation in fixed (row, column) order: vectorized reductions
    // can reassociate the sums, and profile values must reproduce exactly.
    if (kind == PairDistance::kFlatNorm) {
        double sq = 0.0;
        for (Eigen::Index t = 0; t < a.rows(); ++t) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                const double diff = a(t, j) - b(t, j);
                sq += diff * diff;
            }
        }
        return std::sqrt(sq);
    }
    double sum = 0.0;
    for (Eigen::Index t = 0; t < a.rows(); ++t) {
        double sq = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double diff = a(t, j) - b(t, j);
            sq += diff * diff;
        }
        sum += std::sqrt(sq);
    }
    return sum;
}

std::vector<std::vector<Eigen::MatrixXd>> label_instances(const Dataset& data) {
    std::vector<std::vector<Eigen::MatrixXd>> instances(data.n_labels);
    for (const SequenceSample& sample : data.samples) {
        int start = 0;
        for (int t = 1; t <= sample.length(); ++t) {
            if (t == sample.length() || sample.labels[t] != sample.labels[start]) {
                instances[sample.labels[start]].push_back(
                    sample.features.middleRows(start, t - start));
                start = t;
            }
        }
    }
    return instances;
}

ComplexityProfile comp_measure(const Dataset& data, const ComplexityOptions& options) {
    const auto instances = label_instances(data);
    const int n = data.n_labels;
    for (int l = 0; l < n; ++l) {
        if (instances[l].empty()) {
            throw std::invalid_argument("label " + std::to_string(l) + " has no instances");
        }
    }

    ComplexityProfile profile;
    profile.raw.assign(n, 0.0);
    profile.pair_counts.assign(n, 0);

    for (int l = 0; l < n; ++l) {
        int max_length = 0;
        for (const Eigen::MatrixXd& inst : instances[l]) {
            max_length = std::max(max_length, static_cast<int>(inst.rows()));
        }
        std::vector<Eigen::MatrixXd> aligned;
        aligned.reserve(instances[l].size());
        for (const Eigen::MatrixXd& inst : instances[l]) {
            aligned.push_back(resample(inst, max_length));
        }

        const int m = static_cast<int>(aligned.size());
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const double dist = pair_distance(aligned[i], aligned[j], options.distance);
                profile.raw[l] += dist;
                ++profile.pair_counts[l];
                if (options.pairs == PairIteration::kOrdered) {
                    profile.raw[l] += dist;  // (j, i) counted as well
                    ++profile.pair_counts[l];
                }
            }
        }
        if (options.aggregate == PairAggregate::kMeanPerPair && profile.pair_counts[l] > 0) {
            profile.raw[l] /= static_cast<double>(profile.pair_counts[l]);
        }
    }

    double total = 0.0;
    for (double r : profile.raw) total += r;
    profile.values.assign(n, 0.0);
    if (total > 0.0) {
        for (int l = 0; l < n; ++l) profile.values[l] = profile.raw[l] / total;
    } else {
        // Every label is internally homogeneous; normalization would divide
        // by zero, so fall back to the uniform profile.
        profile.uniform_fallback = true;
        for (int l = 0; l < n; ++l) profile.values[l] = 1.0 / n;
    }
    return profile;
}

const char* variant_name(const ComplexityOptions& options) {
    return options.aggregate == PairAggregate::kMeanPerPair ? "mean-pair" : "literal-sum";
}

}  // namespace ldcrf
