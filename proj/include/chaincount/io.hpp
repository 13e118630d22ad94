#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chaincount/geometry.hpp"

namespace chaincount {

/// Line-delimited dataset format: one self-contained JSON object per
/// line, {id, width, height, predictions: [{cx,cy,w,h,score}],
/// ground_truth: [{cx,cy,w,h}]}. Numbers serialize with the shortest
/// round-trip representation.

struct ParseOptions {
  bool strict = true;  // unknown fields are errors; lenient mode warns on stderr instead
};

/// Parses one JSON object. Throws std::runtime_error on malformed input,
/// non-finite numbers, scores outside [0,1], or (in strict mode) unknown
/// fields.
ImageRecord parse_record(const std::string& json_line, const ParseOptions& opts = {});

std::string serialize_record(const ImageRecord& record);

/// Reads a whole dataset stream; errors carry the 1-based line number.
std::vector<ImageRecord> read_dataset(std::istream& in, const ParseOptions& opts = {});
std::vector<ImageRecord> read_dataset_file(const std::string& path, const ParseOptions& opts = {});

void write_dataset(std::ostream& out, const std::vector<ImageRecord>& records);
void write_dataset_file(const std::string& path, const std::vector<ImageRecord>& records);

}  // namespace chaincount
