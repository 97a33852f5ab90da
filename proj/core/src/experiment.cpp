#include "ldcrf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ldcrf/evaluation.hpp"
#include "ldcrf/experiment_io.hpp"
#include "ldcrf/rng.hpp"

namespace ldcrf {
namespace {

constexpr std::uint64_t kFoldSeedStride = 0x9e3779b97f4a7c15ULL;

Dataset subset(const Dataset& data, const std::vector<int>& indices) {
    // Folds may lack some label entirely; that surfaces later as a training
    // error (handled as a skip), so no phantom-label validation here.
    Dataset out;
    out.n_labels = data.n_labels;
    out.feature_dim = data.feature_dim;
    out.label_names = data.label_names;
    out.samples.reserve(indices.size());
    for (int i : indices) out.samples.push_back(data.samples[i]);
    return out;
}

struct Candidate {
    int total = 0;
    std::vector<int> counts;  // explicit kind only; empty otherwise
};

struct StrategyPlan {
    std::string name;
    std::string kind;
    double cap = 1.0;
    std::vector<Candidate> candidates;
    std::vector<SkipRecord> grid_skips;
};

std::string format_cap(double cap) { return nlohmann::json(cap).dump(); }

std::vector<int> sorted_unique_totals(const std::vector<int>& totals) {
    std::vector<int> out = totals;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<StrategyPlan> build_plans(const ExperimentConfig& config, int n_labels) {
    const std::vector<int> totals = sorted_unique_totals(config.latent_totals);
    std::vector<StrategyPlan> plans;
    for (const std::string& strategy : config.strategies) {
        if (strategy == "uniform") {
            StrategyPlan plan{"uniform", "uniform", 1.0, {}, {}};
            for (int total : totals) {
                if (total < n_labels) {
                    plan.grid_skips.push_back({total, -1, "budget smaller than label count"});
                } else if (total % n_labels != 0) {
                    plan.grid_skips.push_back({total, -1, "not divisible by the label count"});
                } else {
                    plan.candidates.push_back({total, {}});
                }
            }
            plans.push_back(std::move(plan));
        } else if (strategy == "complexity") {
            for (double cap : config.caps) {
                StrategyPlan plan{"complexity@" + format_cap(cap), "complexity", cap, {}, {}};
                const std::vector<double> uniform_profile(n_labels, 1.0 / n_labels);
                for (int total : totals) {
                    // Feasibility of dist depends on (total, n_labels, cap)
                    // alone, so probing with a flat profile settles it.
                    try {
                        dist({total, uniform_profile, cap}, config.allocation);
                        plan.candidates.push_back({total, {}});
                    } catch (const std::exception& err) {
                        plan.grid_skips.push_back({total, -1, err.what()});
                    }
                }
                plans.push_back(std::move(plan));
            }
        } else {  // "explicit" — validated beforehand
            StrategyPlan plan{"explicit", "explicit", 1.0, {}, {}};
            for (const std::vector<int>& counts : config.explicit_counts) {
                int total = 0;
                for (int c : counts) total += c;
                plan.candidates.push_back({total, counts});
            }
            std::stable_sort(plan.candidates.begin(), plan.candidates.end(),
                             [](const Candidate& a, const Candidate& b) {
                                 return a.total < b.total;
                             });
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

LatentMap candidate_map(const StrategyPlan& plan, const Candidate& candidate,
                        const std::vector<double>& profile, int n_labels,
                        const AllocationOptions& allocation) {
    if (plan.kind == "uniform") return uniform_latent_map(n_labels, candidate.total);
    if (plan.kind == "complexity") return dist({candidate.total, profile, plan.cap}, allocation);
    return LatentMap(candidate.counts);
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v, double mean) {
    double sum = 0.0;
    for (double x : v) sum += (x - mean) * (x - mean);
    return std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

void validate(const ExperimentConfig& config) {
    if (config.latent_totals.empty()) throw std::invalid_argument("latent_totals is empty");
    for (int total : config.latent_totals) {
        if (total < 1) throw std::invalid_argument("latent totals must be positive");
    }
    if (config.outer_folds < 2 || config.inner_folds < 2) {
        throw std::invalid_argument("outer_folds and inner_folds must be at least 2");
    }
    if (config.strategies.empty()) throw std::invalid_argument("no strategies selected");
    for (const std::string& strategy : config.strategies) {
        if (strategy != "complexity" && strategy != "uniform" && strategy != "explicit") {
            throw std::invalid_argument("unknown strategy \"" + strategy + "\"");
        }
        if (std::count(config.strategies.begin(), config.strategies.end(), strategy) > 1) {
            throw std::invalid_argument("strategy \"" + strategy + "\" listed twice");
        }
        if (strategy == "explicit" && config.explicit_counts.empty()) {
            throw std::invalid_argument("explicit strategy needs explicit_counts");
        }
    }
    if (config.caps.empty()) throw std::invalid_argument("caps is empty");
    for (double cap : config.caps) {
        if (!(cap > 0.0) || cap > 1.0) throw std::invalid_argument("caps must lie in (0, 1]");
    }
    for (const std::vector<int>& counts : config.explicit_counts) {
        if (counts.empty()) throw std::invalid_argument("explicit assignment is empty");
        for (int c : counts) {
            if (c < 1) throw std::invalid_argument("explicit counts must be at least 1");
        }
    }
    if (config.train.l2_strength < 0.0 || config.train.max_iterations < 1 ||
        !(config.train.gradient_tolerance > 0.0)) {
        throw std::invalid_argument("invalid train config");
    }
}

std::vector<std::vector<int>> fold_split(int n_samples, int n_folds, std::uint64_t seed) {
    if (n_folds < 2) throw std::invalid_argument("need at least 2 folds");
    if (n_samples < n_folds) {
        throw std::invalid_argument("cannot split " + std::to_string(n_samples) +
                                    " samples into " + std::to_string(n_folds) + " folds");
    }
    Rng rng(seed);
    const std::vector<int> order = rng.permutation(n_samples);
    std::vector<std::vector<int>> folds(n_folds);
    for (int i = 0; i < n_samples; ++i) {
        folds[i % n_folds].push_back(order[i]);
    }
    return folds;
}

ExperimentReport nested_cv(const Dataset& data, const ExperimentConfig& config, int threads) {
    validate(config);
    for (const std::vector<int>& counts : config.explicit_counts) {
        if (static_cast<int>(counts.size()) != data.n_labels) {
            throw std::invalid_argument("explicit assignment length does not match label count");
        }
    }

    const int n = static_cast<int>(data.samples.size());
    ExperimentReport report;
    report.config = config;
    report.config_hash = config_hash(config);
    report.n_samples = n;
    report.outer_fold_indices = fold_split(n, config.outer_folds, config.seed);

    const std::vector<StrategyPlan> plans = build_plans(config, data.n_labels);
    for (const StrategyPlan& plan : plans) {
        if (plan.candidates.empty()) {
            throw std::invalid_argument("strategy " + plan.name +
                                        " has no feasible grid entry");
        }
    }

    std::vector<StrategyOutcome> outcomes;
    for (const StrategyPlan& plan : plans) {
        StrategyOutcome outcome;
        outcome.name = plan.name;
        outcome.kind = plan.kind;
        outcome.cap = plan.cap;
        outcome.skipped = plan.grid_skips;
        outcomes.push_back(std::move(outcome));
    }

    for (int f = 0; f < config.outer_folds; ++f) {
        std::vector<int> train_idx;
        for (int g = 0; g < config.outer_folds; ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), report.outer_fold_indices[g].begin(),
                             report.outer_fold_indices[g].end());
        }
        const int n_train = static_cast<int>(train_idx.size());
        if (n_train < config.inner_folds) {
            throw std::invalid_argument("outer fold " + std::to_string(f) + " leaves " +
                                        std::to_string(n_train) + " training samples for " +
                                        std::to_string(config.inner_folds) + " inner folds");
        }

        const std::uint64_t inner_seed =
            config.seed ^ (kFoldSeedStride * static_cast<std::uint64_t>(f + 1));
        const std::vector<std::vector<int>> inner_positions =
            fold_split(n_train, config.inner_folds, inner_seed);

        // Inner train/validation index lists (into the full dataset), plus
        // one complexity profile per inner split, shared by all plans.
        std::vector<std::vector<int>> inner_train(config.inner_folds);
        std::vector<std::vector<int>> inner_val(config.inner_folds);
        for (int g = 0; g < config.inner_folds; ++g) {
            for (int h = 0; h < config.inner_folds; ++h) {
                for (int pos : inner_positions[h]) {
                    (h == g ? inner_val : inner_train)[g].push_back(train_idx[pos]);
                }
            }
        }
        std::vector<std::vector<double>> inner_profiles(config.inner_folds);
        const bool wants_complexity =
            std::any_of(plans.begin(), plans.end(),
                        [](const StrategyPlan& p) { return p.kind == "complexity"; });
        if (wants_complexity) {
            for (int g = 0; g < config.inner_folds; ++g) {
                inner_profiles[g] =
                    comp_measure(subset(data, inner_train[g]), config.complexity).values;
            }
        }

        const Dataset outer_train = subset(data, train_idx);
        const std::vector<double> outer_profile =
            wants_complexity ? comp_measure(outer_train, config.complexity).values
                             : std::vector<double>();

        for (std::size_t p = 0; p < plans.size(); ++p) {
            const StrategyPlan& plan = plans[p];
            StrategyOutcome& outcome = outcomes[p];

            const Candidate* best = nullptr;
            double best_accuracy = 0.0;
            for (const Candidate& candidate : plan.candidates) {
                std::vector<double> fold_scores;
                bool failed = false;
                for (int g = 0; g < config.inner_folds && !failed; ++g) {
                    try {
                        const LatentMap map = candidate_map(plan, candidate, inner_profiles[g],
                                                            data.n_labels, config.allocation);
                        const TrainResult fit =
                            train(subset(data, inner_train[g]), map, config.train, threads);
                        const EvalResult eval =
                            evaluate(fit.params, map, subset(data, inner_val[g]));
                        fold_scores.push_back(eval.accuracy);
                    } catch (const std::exception& err) {
                        outcome.skipped.push_back({candidate.total, f, err.what()});
                        failed = true;
                    }
                }
                if (failed) continue;
                const double score = mean_of(fold_scores);
                // Strict improvement only: candidates come in ascending total
                // order, so ties resolve toward the smaller total.
                if (best == nullptr || score > best_accuracy) {
                    best = &candidate;
                    best_accuracy = score;
                }
            }
            if (best == nullptr) {
                throw std::runtime_error("strategy " + plan.name + " has no usable candidate on outer fold " +
                                         std::to_string(f));
            }

            const LatentMap map =
                candidate_map(plan, *best, outer_profile, data.n_labels, config.allocation);
            const TrainResult fit = train(outer_train, map, config.train, threads);
            const EvalResult eval =
                evaluate(fit.params, map, subset(data, report.outer_fold_indices[f]));

            outcome.selected_totals.push_back(best->total);
            outcome.selected_counts.push_back(map.counts());
            outcome.fold_accuracies.push_back(eval.accuracy);
            outcome.fold_confusions.push_back(eval.normalized);
            if (plan.kind == "complexity") outcome.fold_profiles.push_back(outer_profile);
            outcome.fold_params.push_back(fit.params);
        }
    }

    for (StrategyOutcome& outcome : outcomes) {
        outcome.mean_accuracy = mean_of(outcome.fold_accuracies);
        outcome.std_accuracy = population_std(outcome.fold_accuracies, outcome.mean_accuracy);
    }
    report.strategies = std::move(outcomes);
    return report;
}

SensitivityReport sensitivity_study(const Dataset& data,
                                    const std::vector<std::vector<int>>& assignments,
                                    const TrainConfig& train_config, std::uint64_t split_seed,
                                    int threads) {
    if (assignments.empty()) throw std::invalid_argument("no assignments given");
    for (const std::vector<int>& counts : assignments) {
        if (static_cast<int>(counts.size()) != data.n_labels) {
            throw std::invalid_argument("assignment length does not match label count");
        }
    }

    const int n = static_cast<int>(data.samples.size());
    const int n_train = (2 * n) / 3;
    if (n_train < 1 || n_train >= n) {
        throw std::invalid_argument("dataset too small for a 2/3 - 1/3 split");
    }
    Rng rng(split_seed);
    const std::vector<int> order = rng.permutation(n);
    const std::vector<int> train_idx(order.begin(), order.begin() + n_train);
    const std::vector<int> test_idx(order.begin() + n_train, order.end());

    SensitivityReport report;
    report.seed = split_seed;
    report.n_train = n_train;
    report.n_test = n - n_train;
    const Dataset train_set = subset(data, train_idx);
    const Dataset test_set = subset(data, test_idx);
    for (const std::vector<int>& counts : assignments) {
        const LatentMap map(counts);
        const TrainResult fit = train(train_set, map, train_config, threads);
        const EvalResult eval = evaluate(fit.params, map, test_set);
        SensitivityEntry entry;
        entry.counts = counts;
        entry.accuracy = eval.accuracy;
        entry.confusion = eval.normalized;
        entry.params = fit.params;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace ldcrf
