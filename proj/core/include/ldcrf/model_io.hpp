#pragma once

#include <string>
#include <vector>

#include "ldcrf/types.hpp"

namespace ldcrf {

struct Model {
    LatentMap map{std::vector<int>{1}};
    ModelParams params;
    std::vector<std::string> label_names;
};

/// Model files are one JSON document: {"n_labels", "feature_dim",
/// "latent_counts", "emission", "transition", "label_names"}. Weights are
/// written in the shortest decimal form that parses back to the identical
/// double, so save/load round-trips are exact.
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

/// Latent map files carry at least {"counts": [...]}; the allocate command
/// adds its report fields alongside, which load ignores.
LatentMap load_latent_map(const std::string& path);
void save_latent_map(const LatentMap& map, const std::string& path);

}  // namespace ldcrf
