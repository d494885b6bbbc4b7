#pragma once

#include "crcond/types.hpp"

#include <vector>

namespace crcond {

/// A labeled point set. Labels are dense integers in [0, n_classes) and
/// n_classes is always 1 + max(labels) (0 for an empty set). Instances with
/// arbitrary label strings are remapped to this form at ingestion (see io).
struct Dataset {
  Matrix instances;   // N x D
  IntVector labels;   // N
  int n_classes = 0;
};

/// Validates invariants (matching row counts, finite features, non-negative
/// labels, D >= 1) and derives n_classes. Throws std::invalid_argument.
Dataset make_dataset(Matrix instances, IntVector labels);

/// Index sets per class, in class order. Sets are disjoint and cover 0..N-1;
/// classes absent from the data yield empty sets.
std::vector<std::vector<Index>> class_partition(const Dataset& ds);

}  // namespace crcond
