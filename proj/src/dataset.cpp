#include "crcond/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace crcond {

Dataset make_dataset(Matrix instances, IntVector labels) {
  if (instances.rows() != labels.size()) {
    throw std::invalid_argument(
        "dataset: instance rows (" + std::to_string(instances.rows()) +
        ") do not match label count (" + std::to_string(labels.size()) + ")");
  }
  if (instances.cols() < 1) {
    throw std::invalid_argument("dataset: dimension must be at least 1");
  }
  if (!instances.allFinite()) {
    throw std::invalid_argument("dataset: non-finite feature value");
  }
  int max_label = -1;
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw std::invalid_argument("dataset: negative label at row " +
                                  std::to_string(i));
    }
    max_label = std::max(max_label, labels[i]);
  }
  Dataset ds;
  ds.instances = std::move(instances);
  ds.labels = std::move(labels);
  ds.n_classes = max_label + 1;
  return ds;
}

std::vector<std::vector<Index>> class_partition(const Dataset& ds) {
  std::vector<std::vector<Index>> parts(static_cast<std::size_t>(ds.n_classes));
  for (Index i = 0; i < ds.labels.size(); ++i) {
    parts[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  }
  return parts;
}

}  // namespace crcond
