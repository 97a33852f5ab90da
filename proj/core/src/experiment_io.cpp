#include "ldcrf/experiment_io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ldcrf {
namespace {

using ordered_json = nlohmann::ordered_json;

// Numbers in CSV go through the JSON serializer: shortest decimal form that
// parses back to the identical double, same as the JSON reports.
std::string number(double x) { return nlohmann::json(x).dump(); }

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* pairs_name(PairIteration pairs) {
    return pairs == PairIteration::kUnordered ? "unordered" : "ordered";
}
const char* aggregate_name(PairAggregate aggregate) {
    return aggregate == PairAggregate::kSum ? "sum" : "mean-pair";
}
const char* distance_name(PairDistance distance) {
    return distance == PairDistance::kFramewiseSum ? "framewise" : "flat";
}
const char* criterion_name(GreedyCriterion criterion) {
    return criterion == GreedyCriterion::kNormalizedL1 ? "normalized-l1" : "literal";
}

PairIteration pairs_from(const std::string& name) {
    if (name == "unordered") return PairIteration::kUnordered;
    if (name == "ordered") return PairIteration::kOrdered;
    throw std::invalid_argument("unknown pair iteration \"" + name + "\"");
}
PairAggregate aggregate_from(const std::string& name) {
    if (name == "sum") return PairAggregate::kSum;
    if (name == "mean-pair") return PairAggregate::kMeanPerPair;
    throw std::invalid_argument("unknown pair aggregate \"" + name + "\"");
}
PairDistance distance_from(const std::string& name) {
    if (name == "framewise") return PairDistance::kFramewiseSum;
    if (name == "flat") return PairDistance::kFlatNorm;
    throw std::invalid_argument("unknown pair distance \"" + name + "\"");
}
GreedyCriterion criterion_from(const std::string& name) {
    if (name == "normalized-l1") return GreedyCriterion::kNormalizedL1;
    if (name == "literal") return GreedyCriterion::kLiteralPseudocode;
    throw std::invalid_argument("unknown allocation criterion \"" + name + "\"");
}

ordered_json config_doc(const ExperimentConfig& config) {
    ordered_json doc;
    doc["dataset"] = config.dataset_path;
    doc["latent_totals"] = config.latent_totals;
    doc["caps"] = config.caps;
    doc["strategies"] = config.strategies;
    doc["explicit_counts"] = config.explicit_counts;
    doc["outer_folds"] = config.outer_folds;
    doc["inner_folds"] = config.inner_folds;
    doc["seed"] = config.seed;
    doc["train"] = {{"l2_strength", config.train.l2_strength},
                    {"max_iterations", config.train.max_iterations},
                    {"gradient_tolerance", config.train.gradient_tolerance},
                    {"seed", config.train.seed}};
    doc["complexity_options"] = {{"pairs", pairs_name(config.complexity.pairs)},
                                 {"aggregate", aggregate_name(config.complexity.aggregate)},
                                 {"distance", distance_name(config.complexity.distance)}};
    doc["allocation_options"] = {{"criterion", criterion_name(config.allocation.criterion)},
                                 {"strict_cap", config.allocation.strict_cap}};
    return doc;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
    return config_doc(config).dump(2) + "\n";
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(std::string("invalid experiment config: ") + err.what());
    }
    ExperimentConfig config;
    if (doc.contains("dataset")) config.dataset_path = doc["dataset"].get<std::string>();
    if (!doc.contains("latent_totals")) {
        throw std::runtime_error("experiment config needs \"latent_totals\"");
    }
    config.latent_totals = doc["latent_totals"].get<std::vector<int>>();
    if (doc.contains("caps")) config.caps = doc["caps"].get<std::vector<double>>();
    if (doc.contains("strategies")) {
        config.strategies = doc["strategies"].get<std::vector<std::string>>();
    }
    if (doc.contains("explicit_counts")) {
        config.explicit_counts = doc["explicit_counts"].get<std::vector<std::vector<int>>>();
    }
    if (doc.contains("outer_folds")) config.outer_folds = doc["outer_folds"].get<int>();
    if (doc.contains("inner_folds")) config.inner_folds = doc["inner_folds"].get<int>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("train")) {
        const auto& train = doc["train"];
        if (train.contains("l2_strength")) {
            config.train.l2_strength = train["l2_strength"].get<double>();
        }
        if (train.contains("max_iterations")) {
            config.train.max_iterations = train["max_iterations"].get<int>();
        }
        if (train.contains("gradient_tolerance")) {
            config.train.gradient_tolerance = train["gradient_tolerance"].get<double>();
        }
        if (train.contains("seed")) config.train.seed = train["seed"].get<std::uint64_t>();
    }
    if (doc.contains("complexity_options")) {
        const auto& options = doc["complexity_options"];
        if (options.contains("pairs")) {
            config.complexity.pairs = pairs_from(options["pairs"].get<std::string>());
        }
        if (options.contains("aggregate")) {
            config.complexity.aggregate = aggregate_from(options["aggregate"].get<std::string>());
        }
        if (options.contains("distance")) {
            config.complexity.distance = distance_from(options["distance"].get<std::string>());
        }
    }
    if (doc.contains("allocation_options")) {
        const auto& options = doc["allocation_options"];
        if (options.contains("criterion")) {
            config.allocation.criterion = criterion_from(options["criterion"].get<std::string>());
        }
        if (options.contains("strict_cap")) {
            config.allocation.strict_cap = options["strict_cap"].get<bool>();
        }
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(read_file(path));
}

std::string config_hash(const ExperimentConfig& config) {
    const std::uint64_t hash = fnv1a(config_doc(config).dump());
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << hash;
    return hex.str();
}

std::string report_to_json(const ExperimentReport& report) {
    ordered_json doc;
    doc["config"] = config_doc(report.config);
    doc["config_hash"] = report.config_hash;
    doc["n_samples"] = report.n_samples;
    doc["outer_folds"] = report.outer_fold_indices;
    ordered_json strategies = ordered_json::array();
    for (const StrategyOutcome& outcome : report.strategies) {
        ordered_json entry;
        entry["name"] = outcome.name;
        entry["kind"] = outcome.kind;
        if (outcome.kind == "complexity") entry["cap"] = outcome.cap;
        entry["selected_totals"] = outcome.selected_totals;
        entry["selected_counts"] = outcome.selected_counts;
        entry["fold_accuracies"] = outcome.fold_accuracies;
        entry["mean_accuracy"] = outcome.mean_accuracy;
        entry["std_accuracy"] = outcome.std_accuracy;
        ordered_json confusions = ordered_json::array();
        for (const Eigen::MatrixXd& confusion : outcome.fold_confusions) {
            confusions.push_back(matrix_to_json(confusion));
        }
        entry["fold_confusions"] = std::move(confusions);
        if (outcome.kind == "complexity") entry["fold_profiles"] = outcome.fold_profiles;
        ordered_json skipped = ordered_json::array();
        for (const SkipRecord& skip : outcome.skipped) {
            skipped.push_back({{"total", skip.total},
                               {"outer_fold", skip.outer_fold},
                               {"reason", skip.reason}});
        }
        entry["skipped"] = std::move(skipped);
        strategies.push_back(std::move(entry));
    }
    doc["strategies"] = std::move(strategies);
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "strategy,kind,cap,outer_fold,selected_total,selected_counts,accuracy,"
           "mean_accuracy,std_accuracy\n";
    for (const StrategyOutcome& outcome : report.strategies) {
        for (std::size_t f = 0; f < outcome.fold_accuracies.size(); ++f) {
            out << outcome.name << ',' << outcome.kind << ',' << number(outcome.cap) << ',' << f
                << ',' << outcome.selected_totals[f] << ',';
            const std::vector<int>& counts = outcome.selected_counts[f];
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (i) out << '+';
                out << counts[i];
            }
            out << ',' << number(outcome.fold_accuracies[f]) << ','
                << number(outcome.mean_accuracy) << ',' << number(outcome.std_accuracy) << '\n';
        }
    }
    return out.str();
}

std::string sensitivity_to_json(const SensitivityReport& report) {
    ordered_json doc;
    doc["seed"] = report.seed;
    doc["n_train"] = report.n_train;
    doc["n_test"] = report.n_test;
    ordered_json entries = ordered_json::array();
    for (const SensitivityEntry& entry : report.entries) {
        entries.push_back({{"counts", entry.counts},
                           {"accuracy", entry.accuracy},
                           {"confusion", matrix_to_json(entry.confusion)}});
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

std::string sensitivity_to_csv(const SensitivityReport& report) {
    std::ostringstream out;
    out << "assignment,accuracy";
    if (!report.entries.empty()) {
        const Eigen::MatrixXd& confusion = report.entries.front().confusion;
        for (Eigen::Index i = 0; i < confusion.rows(); ++i) {
            for (Eigen::Index j = 0; j < confusion.cols(); ++j) {
                out << ",conf_" << i << '_' << j;
            }
        }
    }
    out << '\n';
    for (const SensitivityEntry& entry : report.entries) {
        for (std::size_t i = 0; i < entry.counts.size(); ++i) {
            if (i) out << '+';
            out << entry.counts[i];
        }
        out << ',' << number(entry.accuracy);
        for (Eigen::Index i = 0; i < entry.confusion.rows(); ++i) {
            for (Eigen::Index j = 0; j < entry.confusion.cols(); ++j) {
                out << ',' << number(entry.confusion(i, j));
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string profile_to_json(const ComplexityProfile& profile, const ComplexityOptions& options) {
    ordered_json doc;
    doc["values"] = profile.values;
    doc["raw"] = profile.raw;
    doc["pair_counts"] = profile.pair_counts;
    doc["variant"] = variant_name(options);
    if (profile.uniform_fallback) doc["uniform_fallback"] = true;
    return doc.dump(2) + "\n";
}

std::vector<double> parse_profile_values(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(std::string("invalid profile JSON: ") + err.what());
    }
    if (!doc.contains("values") || !doc["values"].is_array()) {
        throw std::runtime_error("profile JSON needs a \"values\" array");
    }
    return doc["values"].get<std::vector<double>>();
}

std::string allocation_to_json(const LatentMap& map, const AllocationReport& report) {
    ordered_json doc;
    doc["counts"] = report.counts;
    doc["total"] = map.total();
    doc["shares"] = report.shares;
    doc["profile"] = report.profile;
    doc["l1_gap"] = report.l1_gap;
    return doc.dump(2) + "\n";
}

std::string eval_to_json(const EvalResult& result, const std::vector<std::string>& label_names) {
    ordered_json doc;
    doc["accuracy"] = result.accuracy;
    doc["correct_frames"] = result.correct;
    doc["total_frames"] = result.total_frames;
    doc["label_names"] = label_names;
    doc["confusion_counts"] = matrix_to_json(result.counts);
    doc["confusion_normalized"] = matrix_to_json(result.normalized);
    return doc.dump(2) + "\n";
}

std::string trace_to_csv(const TrainResult& result) {
    std::ostringstream out;
    out << "iteration,nll,grad_norm\n";
    for (const IterationRecord& record : result.trace) {
        out << record.iteration << ',' << number(record.nll) << ',' << number(record.grad_norm)
            << '\n';
    }
    return out.str();
}

}  // namespace ldcrf
