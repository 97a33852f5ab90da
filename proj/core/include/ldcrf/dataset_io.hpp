#pragma once

#include <iosfwd>
#include <string>

#include "ldcrf/types.hpp"

namespace ldcrf {

/// Reads a dataset from JSON-lines: one object per line with keys "id"
/// (string), "features" (array of per-frame feature arrays) and "labels"
/// (array of ints, one per frame). Blank lines are skipped. Errors carry
/// "path:line:" prefixes. Label count and feature dimension are inferred,
/// and the labels must cover a contiguous range starting at 0.
Dataset load_jsonl(const std::string& path);
Dataset read_jsonl(std::istream& in, const std::string& origin);

void save_jsonl(const Dataset& dataset, const std::string& path);
void write_jsonl(const Dataset& dataset, std::ostream& out);

/// Reads frame-per-row CSV with columns sequence_id,t,f1..fd,label. A header
/// row is detected by a non-numeric second column. Frames are grouped by
/// sequence_id (keeping first-appearance order) and sorted by t within each
/// sequence; duplicate frame indices are an error.
Dataset import_csv(const std::string& path);

}  // namespace ldcrf
