#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "ldcrf/allocation.hpp"
#include "ldcrf/complexity.hpp"
#include "ldcrf/training.hpp"
#include "ldcrf/types.hpp"

namespace ldcrf {

/// One nested-CV run: inner folds pick each strategy's latent total from the
/// grid, outer folds estimate accuracy of the selected configuration.
struct ExperimentConfig {
    std::string dataset_path;  // provenance only; nested_cv takes the Dataset
    std::vector<int> latent_totals;
    std::vector<double> caps = {1.0};  // complexity strategy runs once per cap
    std::vector<std::string> strategies = {"complexity", "uniform"};
    std::vector<std::vector<int>> explicit_counts;  // candidates of the explicit strategy
    int outer_folds = 3;
    int inner_folds = 5;
    std::uint64_t seed = 0;
    TrainConfig train;
    ComplexityOptions complexity;
    AllocationOptions allocation;
};

void validate(const ExperimentConfig& config);

/// A grid entry dropped for one strategy (infeasible total, or a fold whose
/// training portion cannot support the candidate).
struct SkipRecord {
    int total = 0;
    int outer_fold = -1;  // -1: skipped everywhere (grid-level infeasibility)
    std::string reason;
};

struct StrategyOutcome {
    std::string name;  // "uniform", "complexity@0.75", "explicit"
    std::string kind;  // "uniform" | "complexity" | "explicit"
    double cap = 1.0;  // meaningful for the complexity kind only

    std::vector<int> selected_totals;              // per outer fold
    std::vector<std::vector<int>> selected_counts; // per outer fold
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // population std over outer folds
    std::vector<Eigen::MatrixXd> fold_confusions;            // row-normalized
    std::vector<std::vector<double>> fold_profiles;          // complexity kind only
    std::vector<SkipRecord> skipped;

    // kept in memory for leakage checks; never serialized
    std::vector<ModelParams> fold_params;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string config_hash;  // FNV-1a over the canonical config JSON
    int n_samples = 0;
    std::vector<std::vector<int>> outer_fold_indices;  // sample indices per outer fold
    std::vector<StrategyOutcome> strategies;
};

/// The fold partition is a function of the sample count and seed alone, so
/// every strategy sees identical splits and test folds cannot influence
/// training-side statistics.
std::vector<std::vector<int>> fold_split(int n_samples, int n_folds, std::uint64_t seed);

ExperimentReport nested_cv(const Dataset& data, const ExperimentConfig& config, int threads = 1);

struct SensitivityEntry {
    std::vector<int> counts;
    double accuracy = 0.0;
    Eigen::MatrixXd confusion;  // row-normalized
    ModelParams params;         // in-memory only
};

struct SensitivityReport {
    std::uint64_t seed = 0;
    int n_train = 0;
    int n_test = 0;
    std::vector<SensitivityEntry> entries;
};

/// Trains one model per explicit latent-count assignment on a seeded
/// 2/3 - 1/3 split and reports per-assignment accuracy and confusion.
SensitivityReport sensitivity_study(const Dataset& data,
                                    const std::vector<std::vector<int>>& assignments,
                                    const TrainConfig& train_config, std::uint64_t split_seed,
                                    int threads = 1);

}  // namespace ldcrf
