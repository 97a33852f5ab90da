#include "ldcrf/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace ldcrf {
namespace {

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

void finalize(Dataset& dataset, const std::string& origin) {
    if (dataset.samples.empty()) {
        throw std::runtime_error(origin + ": no sequences found");
    }
    dataset.feature_dim = static_cast<int>(dataset.samples.front().features.cols());
    int max_label = 0;
    for (const SequenceSample& sample : dataset.samples) {
        for (int y : sample.labels) max_label = std::max(max_label, y);
    }
    dataset.n_labels = max_label + 1;
    dataset.label_names.resize(dataset.n_labels);
    for (int y = 0; y < dataset.n_labels; ++y) {
        dataset.label_names[y] = std::to_string(y);
    }
    try {
        validate(dataset);
    } catch (const std::invalid_argument& err) {
        // Whole-dataset violations (label gaps, ragged dimensions) have no
        // single line to point at, but still name the file.
        throw std::runtime_error(origin + ": " + err.what());
    }
}

}  // namespace

Dataset read_jsonl(std::istream& in, const std::string& origin) {
    Dataset dataset;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& err) {
            fail_at(origin, line_no, std::string("invalid JSON: ") + err.what());
        }
        if (!record.is_object() || !record.contains("id") || !record.contains("features") ||
            !record.contains("labels")) {
            fail_at(origin, line_no, "expected an object with id, features and labels");
        }
        if (!record["id"].is_string()) fail_at(origin, line_no, "id must be a string");
        const auto& features = record["features"];
        const auto& labels = record["labels"];
        if (!features.is_array() || features.empty()) {
            fail_at(origin, line_no, "features must be a non-empty array of frames");
        }
        if (!labels.is_array() || labels.size() != features.size()) {
            fail_at(origin, line_no, "labels must have one entry per frame");
        }

        SequenceSample sample;
        sample.id = record["id"].get<std::string>();
        const std::size_t dim = features[0].is_array() ? features[0].size() : 0;
        if (dim == 0) fail_at(origin, line_no, "each frame must be a non-empty number array");
        sample.features.resize(static_cast<Eigen::Index>(features.size()),
                               static_cast<Eigen::Index>(dim));
        for (std::size_t t = 0; t < features.size(); ++t) {
            const auto& frame = features[t];
            if (!frame.is_array() || frame.size() != dim) {
                fail_at(origin, line_no,
                        "frame " + std::to_string(t) + " does not have " + std::to_string(dim) +
                            " features");
            }
            for (std::size_t j = 0; j < dim; ++j) {
                if (!frame[j].is_number()) {
                    fail_at(origin, line_no, "feature values must be numbers");
                }
                sample.features(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                    frame[j].get<double>();
            }
            if (!labels[t].is_number_integer()) {
                fail_at(origin, line_no, "labels must be integers");
            }
            const int y = labels[t].get<int>();
            if (y < 0) fail_at(origin, line_no, "labels must be non-negative");
            sample.labels.push_back(y);
        }
        dataset.samples.push_back(std::move(sample));
    }
    finalize(dataset, origin);
    return dataset;
}

Dataset load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_jsonl(in, path);
}

void write_jsonl(const Dataset& dataset, std::ostream& out) {
    for (const SequenceSample& sample : dataset.samples) {
        nlohmann::ordered_json record;
        record["id"] = sample.id;
        nlohmann::ordered_json frames = nlohmann::ordered_json::array();
        for (Eigen::Index t = 0; t < sample.features.rows(); ++t) {
            nlohmann::ordered_json frame = nlohmann::ordered_json::array();
            for (Eigen::Index j = 0; j < sample.features.cols(); ++j) {
                frame.push_back(sample.features(t, j));
            }
            frames.push_back(std::move(frame));
        }
        record["features"] = std::move(frames);
        record["labels"] = sample.labels;
        out << record.dump() << '\n';
    }
}

void save_jsonl(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_jsonl(dataset, out);
    if (!out) throw std::runtime_error("failed writing " + path);
}

Dataset import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    struct Frame {
        int t;
        std::vector<double> features;
        int label;
    };
    std::vector<std::string> order;                   // sequence ids, first appearance
    std::map<std::string, std::vector<Frame>> frames; // id -> frames

    std::string line;
    int line_no = 0;
    std::size_t n_fields = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::vector<std::string> fields;
        std::stringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");

        if (fields.size() < 4) {
            fail_at(path, line_no, "expected sequence_id,t,f1..fd,label");
        }
        if (n_fields == 0) {
            // Header detection: the frame index column is numeric in data rows.
            try {
                std::stoi(fields[1]);
            } catch (const std::exception&) {
                n_fields = fields.size();
                continue;
            }
            n_fields = fields.size();
        } else if (fields.size() != n_fields) {
            fail_at(path, line_no,
                    "row has " + std::to_string(fields.size()) + " columns, expected " +
                        std::to_string(n_fields));
        }

        Frame frame;
        try {
            std::size_t used = 0;
            frame.t = std::stoi(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
            for (std::size_t j = 2; j + 1 < fields.size(); ++j) {
                frame.features.push_back(std::stod(fields[j], &used));
                if (used != fields[j].size()) throw std::invalid_argument(fields[j]);
            }
            frame.label = std::stoi(fields.back(), &used);
            if (used != fields.back().size()) throw std::invalid_argument(fields.back());
        } catch (const std::exception&) {
            fail_at(path, line_no, "non-numeric value in a data row");
        }
        if (frame.label < 0) fail_at(path, line_no, "labels must be non-negative");

        if (frames.find(fields[0]) == frames.end()) order.push_back(fields[0]);
        frames[fields[0]].push_back(std::move(frame));
    }

    Dataset dataset;
    for (const std::string& id : order) {
        std::vector<Frame>& seq = frames[id];
        std::sort(seq.begin(), seq.end(), [](const Frame& a, const Frame& b) { return a.t < b.t; });
        for (std::size_t t = 1; t < seq.size(); ++t) {
            if (seq[t].t == seq[t - 1].t) {
                throw std::runtime_error(path + ": sequence " + id + " repeats frame index " +
                                         std::to_string(seq[t].t));
            }
        }
        SequenceSample sample;
        sample.id = id;
        sample.features.resize(static_cast<Eigen::Index>(seq.size()),
                               static_cast<Eigen::Index>(seq.front().features.size()));
        for (std::size_t t = 0; t < seq.size(); ++t) {
            if (seq[t].features.size() != static_cast<std::size_t>(sample.features.cols())) {
                throw std::runtime_error(path + ": sequence " + id +
                                         " mixes feature dimensions");
            }
            for (std::size_t j = 0; j < seq[t].features.size(); ++j) {
                sample.features(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                    seq[t].features[j];
            }
            sample.labels.push_back(seq[t].label);
        }
        dataset.samples.push_back(std::move(sample));
    }
    finalize(dataset, path);
    return dataset;
}

}  // namespace ldcrf
