#pragma once

#include <string>
#include <vector>

#include "ldcrf/complexity.hpp"
#include "ldcrf/evaluation.hpp"
#include "ldcrf/experiment.hpp"
#include "ldcrf/training.hpp"

namespace ldcrf {

/// Canonical JSON form of a config: every field spelled out, fixed key
/// order. Hashing this form gives the provenance tag in reports.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string config_hash(const ExperimentConfig& config);  // FNV-1a 64, hex

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

std::string sensitivity_to_json(const SensitivityReport& report);
std::string sensitivity_to_csv(const SensitivityReport& report);

std::string profile_to_json(const ComplexityProfile& profile, const ComplexityOptions& options);
/// Reads the "values" vector back from a profile document.
std::vector<double> parse_profile_values(const std::string& text);

std::string allocation_to_json(const LatentMap& map, const AllocationReport& report);

std::string eval_to_json(const EvalResult& result, const std::vector<std::string>& label_names);

std::string trace_to_csv(const TrainResult& result);  // iteration,nll,grad_norm

}  // namespace ldcrf
