// ldcrf — train, evaluate, and run allocation experiments for latent-dynamic
// CRF sequence labelers. Subcommands cover the synthetic data pipeline
// (synth/group/concat/subsample/import), the complexity -> allocation chain,
// and the nested-CV experiment harness. Every output file is deterministic
// given identical inputs, flags, and seeds.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ldcrf/allocation.hpp"
#include "ldcrf/complexity.hpp"
#include "ldcrf/dataset_io.hpp"
#include "ldcrf/evaluation.hpp"
#include "ldcrf/experiment.hpp"
#include "ldcrf/experiment_io.hpp"
#include "ldcrf/model_io.hpp"
#include "ldcrf/synth.hpp"
#include "ldcrf/training.hpp"
#include "ldcrf/transforms.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text, char separator) {
    std::vector<int> values;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, separator)) {
        std::size_t used = 0;
        values.push_back(std::stoi(item, &used));
        if (used != item.size()) {
            throw std::invalid_argument("'" + item + "' is not an integer");
        }
    }
    if (values.empty()) throw std::invalid_argument("empty integer list");
    return values;
}

std::vector<std::vector<int>> parse_assignments(const std::string& text) {
    std::vector<std::vector<int>> assignments;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        assignments.push_back(parse_int_list(group, ','));
    }
    if (assignments.empty()) throw std::invalid_argument("empty assignment list");
    return assignments;
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

void add_train_flags(CLI::App* cmd, ldcrf::TrainConfig& config) {
    cmd->add_option("--l2", config.l2_strength, "L2 regularization strength")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iter", config.max_iterations, "optimizer iteration budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", config.gradient_tolerance, "gradient infinity-norm stop threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "training seed");
}

ldcrf::ComplexityOptions complexity_options(bool ordered, bool mean_per_pair, bool flat_norm) {
    ldcrf::ComplexityOptions options;
    if (ordered) options.pairs = ldcrf::PairIteration::kOrdered;
    if (mean_per_pair) options.aggregate = ldcrf::PairAggregate::kMeanPerPair;
    if (flat_norm) options.distance = ldcrf::PairDistance::kFlatNorm;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latent-dynamic CRF sequence labeling toolkit"};
    app.require_subcommand(1);

    // ---- synth ----------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate prototype-mixture gesture data");
    ldcrf::SynthSpec synth_spec;
    std::string synth_prototypes = "1";
    std::string synth_out;
    unsigned long long synth_seed = 0;
    synth_cmd->add_option("--labels", synth_spec.n_labels, "number of labels")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--prototypes", synth_prototypes,
                          "per-label prototype counts, e.g. \"3,1\" (single value broadcasts)");
    synth_cmd->add_option("--dim", synth_spec.feature_dim, "feature dimension")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--mean-length", synth_spec.mean_length, "mean frames per sample")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--length-jitter", synth_spec.length_jitter,
                          "max +/- frames around the mean length")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--noise", synth_spec.noise_sigma, "per-frame Gaussian noise sigma")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--samples-per-label", synth_spec.samples_per_label,
                          "sequences generated per label")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output dataset (JSON lines)")->required();

    // ---- import ---------------------------------------------------------
    auto* import_cmd = app.add_subcommand("import", "convert frame-table CSV to a dataset");
    std::string import_in, import_out;
    import_cmd->add_option("csv", import_in, "CSV with columns sequence_id,t,f1..fd,label")
        ->required()
        ->check(CLI::ExistingFile);
    import_cmd->add_option("--out", import_out, "output dataset (JSON lines)")->required();

    // ---- group ----------------------------------------------------------
    auto* group_cmd = app.add_subcommand("group", "collapse labels into a binary dataset");
    std::string group_in, group_spec_text, group_out;
    group_cmd->add_option("data", group_in, "input dataset")->required()->check(CLI::ExistingFile);
    group_cmd->add_option("--groups", group_spec_text, "label partition, e.g. \"0,1-2,3,4,5\"")
        ->required();
    group_cmd->add_option("--out", group_out, "output dataset")->required();

    // ---- concat ---------------------------------------------------------
    auto* concat_cmd = app.add_subcommand("concat", "build many-gestures sequences");
    std::string concat_in, concat_out;
    int concat_group_size = 3;
    unsigned long long concat_seed = 0;
    concat_cmd->add_option("data", concat_in, "input dataset")
        ->required()
        ->check(CLI::ExistingFile);
    concat_cmd->add_option("--group-size", concat_group_size, "samples joined per output sequence")
        ->check(CLI::PositiveNumber);
    concat_cmd->add_option("--seed", concat_seed, "shuffle seed");
    concat_cmd->add_option("--out", concat_out, "output dataset")->required();

    // ---- subsample ------------------------------------------------------
    auto* subsample_cmd = app.add_subcommand("subsample", "keep every stride-th frame");
    std::string subsample_in, subsample_out;
    int subsample_stride_n = 2;
    subsample_cmd->add_option("data", subsample_in, "input dataset")
        ->required()
        ->check(CLI::ExistingFile);
    subsample_cmd->add_option("--stride", subsample_stride_n, "frame stride")
        ->check(CLI::PositiveNumber);
    subsample_cmd->add_option("--out", subsample_out, "output dataset")->required();

    // ---- complexity -----------------------------------------------------
    auto* complexity_cmd = app.add_subcommand("complexity", "per-label complexity profile");
    std::string complexity_in, complexity_out;
    bool opt_ordered = false, opt_mean_pair = false, opt_flat = false;
    complexity_cmd->add_option("data", complexity_in, "input dataset")
        ->required()
        ->check(CLI::ExistingFile);
    complexity_cmd->add_flag("--ordered", opt_ordered, "count each sample pair twice");
    complexity_cmd->add_flag("--mean-per-pair", opt_mean_pair,
                             "average distances per pair instead of summing");
    complexity_cmd->add_flag("--flat-norm", opt_flat,
                             "flat Euclidean norm over concatenated frames");
    complexity_cmd->add_option("--out", complexity_out, "profile JSON (default stdout)");

    // ---- allocate -------------------------------------------------------
    auto* allocate_cmd = app.add_subcommand("allocate", "distribute latent values over labels");
    std::string allocate_profile, allocate_out;
    int allocate_total = 0;
    double allocate_cap = 1.0;
    bool opt_strict_cap = false, opt_literal = false;
    allocate_cmd->add_option("profile", allocate_profile, "profile JSON from `complexity`")
        ->required()
        ->check(CLI::ExistingFile);
    allocate_cmd->add_option("--total", allocate_total, "latent budget")
        ->required()
        ->check(CLI::PositiveNumber);
    allocate_cmd->add_option("--cap", allocate_cap, "max share of the budget per label");
    allocate_cmd->add_flag("--strict-cap", opt_strict_cap, "reject shares exactly at the cap");
    allocate_cmd->add_flag("--literal", opt_literal,
                           "replicate the single-coordinate greedy criterion");
    allocate_cmd->add_option("--out", allocate_out, "latent map JSON (default stdout)");

    // ---- train ----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "fit a model");
    std::string train_in, train_map_path, train_counts_text, train_out, train_trace;
    ldcrf::TrainConfig train_flags;
    int train_threads = 1;
    train_cmd->add_option("data", train_in, "training dataset")
        ->required()
        ->check(CLI::ExistingFile);
    auto* map_group = train_cmd->add_option_group("latent-map", "latent value assignment");
    map_group->add_option("--map", train_map_path, "latent map JSON from `allocate`")
        ->check(CLI::ExistingFile);
    map_group->add_option("--counts", train_counts_text, "explicit counts, e.g. \"2,1\"");
    map_group->require_option(1);
    add_train_flags(train_cmd, train_flags);
    train_cmd->add_option("--threads", train_threads, "gradient worker threads")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--trace", train_trace, "per-iteration NLL trace CSV");
    train_cmd->add_option("--out", train_out, "model JSON")->required();

    // ---- eval -----------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "score a model on a dataset");
    std::string eval_in, eval_model, eval_out;
    eval_cmd->add_option("data", eval_in, "evaluation dataset")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--model", eval_model, "model JSON")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval_out, "evaluation report JSON (default stdout)");

    // ---- experiment -----------------------------------------------------
    auto* experiment_cmd = app.add_subcommand("experiment", "nested-CV allocation comparison");
    std::string experiment_config_path, experiment_out, experiment_csv;
    int experiment_threads = 1;
    experiment_cmd->add_option("--config", experiment_config_path, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    experiment_cmd->add_option("--threads", experiment_threads, "gradient worker threads")
        ->check(CLI::PositiveNumber);
    experiment_cmd->add_option("--out", experiment_out, "report JSON (default stdout)");
    experiment_cmd->add_option("--csv", experiment_csv, "also write the per-fold table as CSV");

    // ---- sensitivity ----------------------------------------------------
    auto* sensitivity_cmd =
        app.add_subcommand("sensitivity", "compare explicit latent assignments on one split");
    std::string sensitivity_in, sensitivity_assignments, sensitivity_out, sensitivity_csv;
    ldcrf::TrainConfig sensitivity_flags;
    unsigned long long sensitivity_split_seed = 0;
    int sensitivity_threads = 1;
    sensitivity_cmd->add_option("data", sensitivity_in, "input dataset")
        ->required()
        ->check(CLI::ExistingFile);
    sensitivity_cmd
        ->add_option("--assignments", sensitivity_assignments,
                     "semicolon-separated count vectors, e.g. \"1,2;2,1;1,1;2,2\"")
        ->required();
    sensitivity_cmd->add_option("--split-seed", sensitivity_split_seed, "2/3 - 1/3 split seed");
    add_train_flags(sensitivity_cmd, sensitivity_flags);
    sensitivity_cmd->add_option("--threads", sensitivity_threads, "gradient worker threads")
        ->check(CLI::PositiveNumber);
    sensitivity_cmd->add_option("--out", sensitivity_out, "report JSON (default stdout)");
    sensitivity_cmd->add_option("--csv", sensitivity_csv, "also write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            synth_spec.prototypes_per_label = parse_int_list(synth_prototypes, ',');
            synth_spec.seed = synth_seed;
            ldcrf::save_jsonl(ldcrf::synth(synth_spec), synth_out);
        } else if (*import_cmd) {
            ldcrf::save_jsonl(ldcrf::import_csv(import_in), import_out);
        } else if (*group_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(group_in);
            const ldcrf::GroupingSpec spec = ldcrf::parse_grouping(group_spec_text, data.n_labels);
            ldcrf::save_jsonl(ldcrf::make_binary(data, spec), group_out);
            std::cout << "grouping " << ldcrf::grouping_name(spec, data.label_names) << "\n";
        } else if (*concat_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(concat_in);
            ldcrf::save_jsonl(ldcrf::concat_many(data, concat_group_size, concat_seed),
                              concat_out);
        } else if (*subsample_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(subsample_in);
            ldcrf::save_jsonl(ldcrf::subsample_stride(data, subsample_stride_n), subsample_out);
        } else if (*complexity_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(complexity_in);
            const ldcrf::ComplexityOptions options =
                complexity_options(opt_ordered, opt_mean_pair, opt_flat);
            const ldcrf::ComplexityProfile profile = ldcrf::comp_measure(data, options);
            write_text(ldcrf::profile_to_json(profile, options), complexity_out);
        } else if (*allocate_cmd) {
            std::ifstream in(allocate_profile);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            ldcrf::AllocationRequest request;
            request.total = allocate_total;
            request.profile = ldcrf::parse_profile_values(buffer.str());
            request.cap = allocate_cap;
            ldcrf::AllocationOptions options;
            options.strict_cap = opt_strict_cap;
            if (opt_literal) options.criterion = ldcrf::GreedyCriterion::kLiteralPseudocode;
            const ldcrf::LatentMap map = ldcrf::dist(request, options);
            write_text(ldcrf::allocation_to_json(map, ldcrf::describe(map, request)),
                       allocate_out);
        } else if (*train_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(train_in);
            const ldcrf::LatentMap map = train_map_path.empty()
                                             ? ldcrf::LatentMap(parse_int_list(train_counts_text, ','))
                                             : ldcrf::load_latent_map(train_map_path);
            if (map.n_labels() != data.n_labels) {
                throw std::runtime_error("latent map has " + std::to_string(map.n_labels()) +
                                         " labels but the dataset has " +
                                         std::to_string(data.n_labels));
            }
            const ldcrf::TrainResult result =
                ldcrf::train(data, map, train_flags, train_threads);
            ldcrf::Model model{map, result.params, data.label_names};
            ldcrf::save_model(model, train_out);
            if (!train_trace.empty()) write_text(ldcrf::trace_to_csv(result), train_trace);
        } else if (*eval_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(eval_in);
            const ldcrf::Model model = ldcrf::load_model(eval_model);
            if (data.feature_dim != model.params.feature_dim()) {
                throw std::runtime_error("dataset feature dimension " +
                                         std::to_string(data.feature_dim) +
                                         " does not match the model's " +
                                         std::to_string(model.params.feature_dim()));
            }
            if (data.n_labels > model.map.n_labels()) {
                throw std::runtime_error("dataset uses more labels than the model knows");
            }
            const ldcrf::EvalResult result = ldcrf::evaluate(model.params, model.map, data);
            write_text(ldcrf::eval_to_json(result, model.label_names), eval_out);
        } else if (*experiment_cmd) {
            const ldcrf::ExperimentConfig config =
                ldcrf::load_experiment_config(experiment_config_path);
            const ldcrf::Dataset data = ldcrf::load_jsonl(config.dataset_path);
            const ldcrf::ExperimentReport report =
                ldcrf::nested_cv(data, config, experiment_threads);
            write_text(ldcrf::report_to_json(report), experiment_out);
            if (!experiment_csv.empty()) {
                write_text(ldcrf::report_to_csv(report), experiment_csv);
            }
        } else if (*sensitivity_cmd) {
            const ldcrf::Dataset data = ldcrf::load_jsonl(sensitivity_in);
            const ldcrf::SensitivityReport report = ldcrf::sensitivity_study(
                data, parse_assignments(sensitivity_assignments), sensitivity_flags,
                sensitivity_split_seed, sensitivity_threads);
            write_text(ldcrf::sensitivity_to_json(report), sensitivity_out);
            if (!sensitivity_csv.empty()) {
                write_text(ldcrf::sensitivity_to_csv(report), sensitivity_csv);
            }
        }
    } catch (const std::exception& err) {
        std::cerr << "ldcrf: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
