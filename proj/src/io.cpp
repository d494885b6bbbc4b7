#include "crcond/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <nlohmann/json.hpp>

namespace crcond {

namespace {

constexpr const char* kModelFormat = "crcond-model/1";

[[noreturn]] void fail_at(const std::string& source, std::size_t line,
                          const std::string& reason) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + reason);
}

bool parse_full_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_full_int64(const std::string& text, long long& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

struct RawCsv {
  Matrix features;
  std::vector<std::string> labels;     // one per row, original text
  std::vector<std::size_t> row_lines;  // 1-based source line of each row
};

RawCsv parse_raw_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) fail_at(source, 1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "label") {
    fail_at(source, line_no, "header must be x0,...,x{D-1},label");
  }
  const std::size_t dims = header.size() - 1;
  for (std::size_t j = 0; j < dims; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      fail_at(source, line_no, "header must be x0,...,x{D-1},label");
    }
  }

  std::vector<double> values;
  RawCsv raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      fail_at(source, line_no, "empty row");
    }
    const auto fields = split_fields(line);
    if (fields.size() != dims + 1) {
      fail_at(source, line_no,
              "expected " + std::to_string(dims + 1) + " fields, got " +
                  std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < dims; ++j) {
      double v = 0.0;
      if (!parse_full_double(fields[j], v)) {
        fail_at(source, line_no, "non-numeric feature '" + fields[j] + "'");
      }
      if (!std::isfinite(v)) {
        fail_at(source, line_no, "non-finite feature '" + fields[j] + "'");
      }
      values.push_back(v);
    }
    if (fields.back().empty()) fail_at(source, line_no, "empty label");
    raw.labels.push_back(fields.back());
    raw.row_lines.push_back(line_no);
  }

  const auto rows = static_cast<Index>(raw.labels.size());
  raw.features.resize(rows, static_cast<Index>(dims));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < static_cast<Index>(dims); ++j) {
      raw.features(i, j) = values[static_cast<std::size_t>(i) * dims +
                                  static_cast<std::size_t>(j)];
    }
  }
  return raw;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string csv_to_string(const Dataset& ds) {
  std::string out;
  for (Index j = 0; j < ds.instances.cols(); ++j) {
    out += "x" + std::to_string(j) + ",";
  }
  out += "label\n";
  for (Index i = 0; i < ds.instances.rows(); ++i) {
    for (Index j = 0; j < ds.instances.cols(); ++j) {
      out += format_double(ds.instances(i, j));
      out += ',';
    }
    out += std::to_string(ds.labels[i]);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const Dataset& ds) {
  write_text_file(path, csv_to_string(ds));
}

LoadedDataset parse_csv(std::istream& in, const std::string& source) {
  RawCsv raw = parse_raw_csv(in, source);
  if (raw.labels.empty()) {
    LoadedDataset out;
    out.data.instances = std::move(raw.features);
    out.data.labels.resize(0);
    return out;
  }

  // Dense class ids: numeric order when every label is an integer,
  // lexicographic otherwise.
  std::vector<std::string> names;
  names.reserve(raw.labels.size());
  for (const auto& s : raw.labels) names.push_back(s);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  bool all_integer = true;
  std::vector<long long> as_int(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!parse_full_int64(names[i], as_int[i])) {
      all_integer = false;
      break;
    }
  }
  if (all_integer) {
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return as_int[a] != as_int[b] ? as_int[a] < as_int[b] : names[a] < names[b];
    });
    std::vector<std::string> sorted;
    sorted.reserve(names.size());
    for (const auto i : order) sorted.push_back(names[i]);
    names = std::move(sorted);
  }

  std::map<std::string, int> id_of;
  for (std::size_t i = 0; i < names.size(); ++i) {
    id_of[names[i]] = static_cast<int>(i);
  }

  IntVector labels(static_cast<Index>(raw.labels.size()));
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    labels[static_cast<Index>(i)] = id_of.at(raw.labels[i]);
  }

  LoadedDataset out;
  out.data = make_dataset(std::move(raw.features), std::move(labels));
  out.label_names = std::move(names);
  return out;
}

LoadedDataset read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return parse_csv(in, path);
}

LoadedDataset read_csv_with_mapping(const std::string& path,
                                    const std::vector<std::string>& label_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  RawCsv raw = parse_raw_csv(in, path);

  std::map<std::string, int> id_of;
  for (std::size_t i = 0; i < label_names.size(); ++i) {
    id_of[label_names[i]] = static_cast<int>(i);
  }

  IntVector labels(static_cast<Index>(raw.labels.size()));
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    const auto it = id_of.find(raw.labels[i]);
    if (it == id_of.end()) {
      fail_at(path, raw.row_lines[i],
              "unknown label '" + raw.labels[i] + "'");
    }
    labels[static_cast<Index>(i)] = it->second;
  }

  LoadedDataset out;
  if (raw.labels.empty()) {
    out.data.instances = std::move(raw.features);
    out.data.labels.resize(0);
  } else {
    out.data = make_dataset(std::move(raw.features), std::move(labels));
  }
  // The mapping is authoritative: classes absent from this file still exist.
  out.data.n_classes = static_cast<int>(label_names.size());
  out.label_names = label_names;
  return out;
}

std::string model_to_string(const ModelFile& mf) {
  nlohmann::json doc;
  doc["format"] = kModelFormat;
  doc["n_features"] = mf.model.centers.cols();
  doc["n_centers"] = mf.model.centers.rows();
  doc["n_classes"] = mf.n_classes;

  nlohmann::json centers = nlohmann::json::array();
  for (Index i = 0; i < mf.model.centers.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < mf.model.centers.cols(); ++j) {
      row.push_back(mf.model.centers(i, j));
    }
    centers.push_back(std::move(row));
  }
  doc["centers"] = std::move(centers);

  nlohmann::json labels = nlohmann::json::array();
  for (Index i = 0; i < mf.model.center_labels.size(); ++i) {
    labels.push_back(mf.model.center_labels[i]);
  }
  doc["center_labels"] = std::move(labels);

  nlohmann::json kpc = nlohmann::json::array();
  for (Index i = 0; i < mf.model.k_per_class.size(); ++i) {
    kpc.push_back(mf.model.k_per_class[i]);
  }
  doc["k_per_class"] = std::move(kpc);

  doc["label_names"] = mf.label_names;
  doc["config"] = {{"step_scale", mf.config.step_scale},
                   {"patience", mf.config.patience},
                   {"max_iter", mf.config.max_iter},
                   {"seed", mf.config.seed}};
  doc["best_purity"] = mf.best_purity;
  doc["best_iteration"] = mf.best_iteration;
  return doc.dump(2) + "\n";
}

void write_model(const std::string& path, const ModelFile& mf) {
  write_text_file(path, model_to_string(mf));
}

ModelFile read_model(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model file " + path + ": " + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw std::runtime_error("unsupported format tag");
    }
    ModelFile mf;
    const auto m = doc.at("n_centers").get<Index>();
    const auto d = doc.at("n_features").get<Index>();
    mf.n_classes = doc.at("n_classes").get<int>();
    if (m < 1 || d < 1 || mf.n_classes < 1) {
      throw std::runtime_error("non-positive dimensions");
    }
    const auto& centers = doc.at("centers");
    const auto& labels = doc.at("center_labels");
    if (static_cast<Index>(centers.size()) != m ||
        static_cast<Index>(labels.size()) != m) {
      throw std::runtime_error("center count mismatch");
    }
    mf.model.centers.resize(m, d);
    for (Index i = 0; i < m; ++i) {
      const auto& row = centers.at(static_cast<std::size_t>(i));
      if (static_cast<Index>(row.size()) != d) {
        throw std::runtime_error("center row " + std::to_string(i) +
                                 " has wrong arity");
      }
      for (Index j = 0; j < d; ++j) {
        mf.model.centers(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
      }
    }
    mf.model.center_labels.resize(m);
    for (Index i = 0; i < m; ++i) {
      const int label = labels.at(static_cast<std::size_t>(i)).get<int>();
      if (label < 0 || label >= mf.n_classes) {
        throw std::runtime_error("center label out of range");
      }
      mf.model.center_labels[i] = label;
    }
    const auto& kpc = doc.at("k_per_class");
    mf.model.k_per_class.resize(static_cast<Index>(kpc.size()));
    for (Index i = 0; i < mf.model.k_per_class.size(); ++i) {
      mf.model.k_per_class[i] = kpc.at(static_cast<std::size_t>(i)).get<int>();
    }
    mf.label_names = doc.at("label_names").get<std::vector<std::string>>();
    if (static_cast<int>(mf.label_names.size()) != mf.n_classes) {
      throw std::runtime_error("label_names size mismatch");
    }
    const auto& cfg = doc.at("config");
    mf.config.step_scale = cfg.at("step_scale").get<double>();
    mf.config.patience = cfg.at("patience").get<int>();
    mf.config.max_iter = cfg.at("max_iter").get<int>();
    mf.config.seed = cfg.at("seed").get<std::uint64_t>();
    mf.config.k_per_class = mf.model.k_per_class;
    mf.best_purity = doc.at("best_purity").get<double>();
    mf.best_iteration = doc.at("best_iteration").get<int>();
    return mf;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model file " + path + ": " + e.what());
  }
}

std::string trace_to_string(const RefinementHistory& history) {
  std::string out = "iteration,overall_purity\n";
  for (std::size_t i = 0; i < history.purity_trace.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(history.purity_trace[i]);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const RefinementHistory& history) {
  write_text_file(path, trace_to_string(history));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::runtime_error("read failed: " + path);
  }
  return std::move(buf).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace crcond
