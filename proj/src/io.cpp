#include "chaincount/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chaincount {

namespace {

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw std::runtime_error(std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw std::runtime_error(std::string(what) + " is not finite");
  return v;
}

const json& required(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw std::runtime_error(std::string("missing field '") + key + "'");
  return *it;
}

void check_fields(const json& obj, std::initializer_list<const char*> known,
                  const ParseOptions& opts, const char* context) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      const std::string msg = std::string("unknown field '") + key + "' in " + context;
      if (opts.strict) throw std::runtime_error(msg);
      std::cerr << "warning: " << msg << " (ignored)\n";
    }
  }
}

BBox parse_box(const json& j, const ParseOptions& opts, bool with_score, double* score) {
  if (!j.is_object()) throw std::runtime_error("box entry is not an object");
  if (with_score) {
    check_fields(j, {"cx", "cy", "w", "h", "score"}, opts, "prediction");
  } else {
    check_fields(j, {"cx", "cy", "w", "h"}, opts, "ground_truth box");
  }
  BBox b;
  b.cx = finite_number(required(j, "cx"), "cx");
  b.cy = finite_number(required(j, "cy"), "cy");
  b.w = finite_number(required(j, "w"), "w");
  b.h = finite_number(required(j, "h"), "h");
  if (b.w <= 0.0 || b.h <= 0.0) throw std::runtime_error("box size must be positive");
  if (with_score) {
    *score = finite_number(required(j, "score"), "score");
    if (*score < 0.0 || *score > 1.0) throw std::runtime_error("score outside [0,1]");
  }
  return b;
}

json box_json(const BBox& b) {
  return json{{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}};
}

}  // namespace

ImageRecord parse_record(const std::string& json_line, const ParseOptions& opts) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("record is not a JSON object");
  check_fields(j, {"id", "width", "height", "predictions", "ground_truth"}, opts, "record");

  ImageRecord rec;
  rec.id = required(j, "id").get<std::string>();
  rec.width = finite_number(required(j, "width"), "width");
  rec.height = finite_number(required(j, "height"), "height");
  if (rec.width <= 0.0 || rec.height <= 0.0) {
    throw std::runtime_error("image dimensions must be positive");
  }
  for (const auto& p : required(j, "predictions")) {
    double score = 0.0;
    const BBox b = parse_box(p, opts, true, &score);
    rec.predictions.push_back({b, score});
  }
  for (const auto& g : required(j, "ground_truth")) {
    rec.ground_truth.push_back(parse_box(g, opts, false, nullptr));
  }
  for (const auto& d : rec.predictions) {
    if (d.box.cx < 0 || d.box.cx > rec.width || d.box.cy < 0 || d.box.cy > rec.height) {
      throw std::runtime_error("prediction center outside image bounds");
    }
  }
  for (const auto& b : rec.ground_truth) {
    if (b.cx < 0 || b.cx > rec.width || b.cy < 0 || b.cy > rec.height) {
      throw std::runtime_error("ground-truth center outside image bounds");
    }
  }
  return rec;
}

std::string serialize_record(const ImageRecord& record) {
  json preds = json::array();
  for (const auto& d : record.predictions) {
    json p = box_json(d.box);
    p["score"] = d.score;
    preds.push_back(std::move(p));
  }
  json gts = json::array();
  for (const auto& b : record.ground_truth) gts.push_back(box_json(b));
  const json j{{"id", record.id},
               {"width", record.width},
               {"height", record.height},
               {"predictions", std::move(preds)},
               {"ground_truth", std::move(gts)}};
  return j.dump();
}

std::vector<ImageRecord> read_dataset(std::istream& in, const ParseOptions& opts) {
  std::vector<ImageRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(parse_record(line, opts));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ImageRecord> read_dataset_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return read_dataset(in, opts);
}

void write_dataset(std::ostream& out, const std::vector<ImageRecord>& records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

void write_dataset_file(const std::string& path, const std::vector<ImageRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_dataset(out, records);
}

}  // namespace chaincount
