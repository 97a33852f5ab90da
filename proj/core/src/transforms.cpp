#include "ldcrf/transforms.hpp"

#include <sstream>
#include <stdexcept>

#include "ldcrf/rng.hpp"

namespace ldcrf {
namespace {

void check_partition(const GroupingSpec& spec, int n_labels) {
    if (spec.group_a.empty() || spec.group_b.empty()) {
        throw std::invalid_argument("both label groups must be non-empty");
    }
    std::vector<int> seen(n_labels, 0);
    for (const std::vector<int>* group : {&spec.group_a, &spec.group_b}) {
        for (int y : *group) {
            if (y < 0 || y >= n_labels) {
                throw std::invalid_argument("grouping references label " + std::to_string(y) +
                                            " outside 0.." + std::to_string(n_labels - 1));
            }
            if (seen[y]++) {
                throw std::invalid_argument("grouping lists label " + std::to_string(y) +
                                            " more than once");
            }
        }
    }
    for (int y = 0; y < n_labels; ++y) {
        if (!seen[y]) {
            throw std::invalid_argument("grouping does not place label " + std::to_string(y));
        }
    }
}

std::vector<int> parse_members(const std::string& text) {
    std::vector<int> members;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        try {
            std::size_t used = 0;
            members.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("grouping token '" + item + "' is not a label index");
        }
    }
    return members;
}

}  // namespace

GroupingSpec parse_grouping(const std::string& text, int n_labels) {
    const std::size_t split = text.find('-');
    if (split == std::string::npos) {
        throw std::invalid_argument("grouping must look like \"0,1-2,3,4,5\"");
    }
    GroupingSpec spec;
    spec.group_a = parse_members(text.substr(0, split));
    spec.group_b = parse_members(text.substr(split + 1));
    check_partition(spec, n_labels);
    return spec;
}

std::string grouping_name(const GroupingSpec& spec, const std::vector<std::string>& names) {
    std::string tag;
    for (int y : spec.group_a) tag += names[y];
    tag += '-';
    for (int y : spec.group_b) tag += names[y];
    return tag;
}

Dataset make_binary(const Dataset& dataset, const GroupingSpec& spec) {
    check_partition(spec, dataset.n_labels);
    std::vector<int> mapping(dataset.n_labels, 1);
    for (int y : spec.group_a) mapping[y] = 0;

    Dataset out;
    out.n_labels = 2;
    out.feature_dim = dataset.feature_dim;
    std::string name_a, name_b;
    for (int y : spec.group_a) name_a += dataset.label_names[y];
    for (int y : spec.group_b) name_b += dataset.label_names[y];
    out.label_names = {name_a, name_b};
    out.samples = dataset.samples;
    for (SequenceSample& sample : out.samples) {
        for (int& y : sample.labels) y = mapping[y];
    }
    validate(out);
    return out;
}

Dataset concat_many(const Dataset& dataset, int group_size, unsigned long long seed) {
    if (group_size < 1) throw std::invalid_argument("concat group size must be at least 1");
    const int n = static_cast<int>(dataset.samples.size());
    if (n < group_size) {
        throw std::invalid_argument("cannot concatenate runs of " + std::to_string(group_size) +
                                    " from " + std::to_string(n) + " samples");
    }

    Rng rng(seed);
    const std::vector<int> order = rng.permutation(n);

    Dataset out;
    out.n_labels = dataset.n_labels;
    out.feature_dim = dataset.feature_dim;
    out.label_names = dataset.label_names;
    for (int start = 0; start + group_size <= n; start += group_size) {
        Eigen::Index total_rows = 0;
        for (int k = 0; k < group_size; ++k) {
            total_rows += dataset.samples[order[start + k]].features.rows();
        }
        SequenceSample joined;
        joined.features.resize(total_rows, dataset.feature_dim);
        Eigen::Index row = 0;
        for (int k = 0; k < group_size; ++k) {
            const SequenceSample& part = dataset.samples[order[start + k]];
            if (k) joined.id += '+';
            joined.id += part.id;
            joined.features.middleRows(row, part.features.rows()) = part.features;
            joined.labels.insert(joined.labels.end(), part.labels.begin(), part.labels.end());
            row += part.features.rows();
        }
        out.samples.push_back(std::move(joined));
    }
    validate(out);
    return out;
}

Dataset subsample_stride(const Dataset& dataset, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be at least 1");
    Dataset out;
    out.n_labels = dataset.n_labels;
    out.feature_dim = dataset.feature_dim;
    out.label_names = dataset.label_names;
    for (const SequenceSample& sample : dataset.samples) {
        SequenceSample thinned;
        thinned.id = sample.id;
        const Eigen::Index kept = (sample.features.rows() + stride - 1) / stride;
        thinned.features.resize(kept, sample.features.cols());
        for (Eigen::Index i = 0; i < kept; ++i) {
            thinned.features.row(i) = sample.features.row(i * stride);
            thinned.labels.push_back(sample.labels[static_cast<std::size_t>(i) * stride]);
        }
        out.samples.push_back(std::move(thinned));
    }
    validate(out);
    return out;
}

}  // namespace ldcrf
