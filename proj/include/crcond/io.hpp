#pragma once

#include "crcond/condenser.hpp"
#include "crcond/dataset.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace crcond {

/// Shortest decimal representation that parses back to the identical double.
std::string format_double(double v);

/// A dataset plus the ingestion label mapping: label_names[c] is the original
/// label string of class c.
struct LoadedDataset {
  Dataset data;
  std::vector<std::string> label_names;
};

/// CSV format: header "x0,...,x{D-1},label", features as shortest round-trip
/// decimals, labels as dense integers, UTF-8 with LF line endings.
std::string csv_to_string(const Dataset& ds);
void write_csv(const std::string& path, const Dataset& ds);

/// Parses the CSV format above. Arbitrary label strings are accepted and
/// remapped to dense class ids: numerically sorted when every label parses as
/// an integer, lexicographically otherwise. Malformed rows are rejected with
/// "<source>:<line>: <reason>".
LoadedDataset parse_csv(std::istream& in, const std::string& source);
LoadedDataset read_csv(const std::string& path);

/// Remaps labels through an existing mapping (e.g. the one stored in a model
/// file); a label absent from the mapping is an error naming the line.
LoadedDataset read_csv_with_mapping(const std::string& path,
                                    const std::vector<std::string>& label_names);

/// Model file: a single JSON document with format version, dimensions,
/// centers row-major, labels, label mapping, config echo, and the best purity
/// reached. Round-trips doubles exactly.
struct ModelFile {
  CondensedModel model;
  int n_classes = 0;
  std::vector<std::string> label_names;
  CondenseConfig config;
  double best_purity = 0.0;
  int best_iteration = 0;
};

std::string model_to_string(const ModelFile& mf);
void write_model(const std::string& path, const ModelFile& mf);
ModelFile read_model(const std::string& path);

/// Trace CSV: header "iteration,overall_purity", one row per iteration.
std::string trace_to_string(const RefinementHistory& history);
void write_trace_csv(const std::string& path, const RefinementHistory& history);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace crcond
