#include "ldcrf/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ldcrf {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& rows, Eigen::Index n_rows,
                                 Eigen::Index n_cols, const std::string& what) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows) {
        throw std::runtime_error("model " + what + " must have " + std::to_string(n_rows) +
                                 " rows");
    }
    Eigen::MatrixXd m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw std::runtime_error("model " + what + " row " + std::to_string(i) +
                                     " must have " + std::to_string(n_cols) + " entries");
        }
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            if (!row[static_cast<std::size_t>(j)].is_number()) {
                throw std::runtime_error("model " + what + " entries must be numbers");
            }
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
        }
    }
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

std::string model_to_json(const Model& model) {
    ordered_json doc;
    doc["n_labels"] = model.map.n_labels();
    doc["feature_dim"] = model.params.feature_dim();
    doc["latent_counts"] = model.map.counts();
    doc["emission"] = matrix_to_json(model.params.emission);
    doc["transition"] = matrix_to_json(model.params.transition);
    doc["label_names"] = model.label_names;
    return doc.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(std::string("invalid model JSON: ") + err.what());
    }
    for (const char* key :
         {"n_labels", "feature_dim", "latent_counts", "emission", "transition", "label_names"}) {
        if (!doc.contains(key)) {
            throw std::runtime_error(std::string("model JSON is missing \"") + key + "\"");
        }
    }

    const int n_labels = doc["n_labels"].get<int>();
    const int feature_dim = doc["feature_dim"].get<int>();
    const std::vector<int> counts = doc["latent_counts"].get<std::vector<int>>();
    if (static_cast<int>(counts.size()) != n_labels) {
        throw std::runtime_error("latent_counts length does not match n_labels");
    }
    if (feature_dim < 1) throw std::runtime_error("feature_dim must be positive");

    Model model;
    model.map = LatentMap(counts);
    const Eigen::Index total = model.map.total();
    model.params.emission = matrix_from_json(doc["emission"], total, feature_dim + 1, "emission");
    model.params.transition = matrix_from_json(doc["transition"], total, total, "transition");
    model.label_names = doc["label_names"].get<std::vector<std::string>>();
    if (static_cast<int>(model.label_names.size()) != n_labels) {
        throw std::runtime_error("label_names length does not match n_labels");
    }
    return model;
}

void save_model(const Model& model, const std::string& path) {
    write_file(model_to_json(model), path);
}

Model load_model(const std::string& path) { return model_from_json(read_file(path)); }

LatentMap load_latent_map(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(std::string("invalid latent map JSON: ") + err.what());
    }
    if (!doc.contains("counts") || !doc["counts"].is_array()) {
        throw std::runtime_error("latent map JSON needs a \"counts\" array");
    }
    return LatentMap(doc["counts"].get<std::vector<int>>());
}

void save_latent_map(const LatentMap& map, const std::string& path) {
    ordered_json doc;
    doc["counts"] = map.counts();
    doc["total"] = map.total();
    write_file(doc.dump(2) + "\n", path);
}

}  // namespace ldcrf
