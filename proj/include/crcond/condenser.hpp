#pragma once

#include "crcond/dataset.hpp"

#include <cstdint>
#include <vector>

namespace crcond {

/// The condensation output: a small set of labeled centers. Classifies by
/// nearest center, so the decision boundary is piecewise linear (facets of
/// the centers' Voronoi tessellation).
struct CondensedModel {
  Matrix centers;           // M x D
  IntVector center_labels;  // M
  IntVector k_per_class;    // per-class k used at initialization
};

/// Two-nearest soft assignment of every instance, with per-head correctness
/// and the activity flag that gates refinement.
struct SoftAssignment {
  IntVector first_id;
  IntVector second_id;
  Vector first_weight;   // in [0.5, 1]
  Vector second_weight;  // in [0, 0.5]; first + second == 1
  Flags first_correct;
  Flags second_correct;
  Flags active;  // first_correct XOR second_correct
};

struct RefinementHistory {
  std::vector<double> purity_trace;  // index 0 is the post-initialization purity
  int best_iteration = 0;            // smallest index attaining best_purity
  double best_purity = 0.0;
};

struct PurityReport {
  Vector per_center;     // M; empty centers carry purity 0
  IntVector population;  // M; sums to N
  double overall = 0.0;  // sum of plurality counts / N
};

struct CondenseConfig {
  IntVector k_per_class;
  double step_scale = 1.0;  // multiplier on advancement vectors
  int patience = 3;         // consecutive non-improving iterations tolerated
  int max_iter = 100;
  std::uint64_t seed = 0;
};

struct PopulationCounts {
  IntVector ids;     // ascending, only centers with at least one instance
  IntVector counts;
};

struct CondenseResult {
  CondensedModel model;
  RefinementHistory history;
};

/// Per-class k-means centers stacked in class order, then relabeled by
/// plurality vote over the full dataset (a center stranded in another class's
/// mass flips its label). Throws, naming the class, when a class has fewer
/// instances than its k.
CondensedModel initialize(const Dataset& ds, const CondenseConfig& cfg);

/// Plurality vote over the instances assigned to each center; ties go to the
/// lowest class index. A center with no assigned instances takes the class of
/// the single instance nearest to it.
IntVector label_centers(const Dataset& ds, const Matrix& centers);

/// Per-center purity (plurality count / population) plus the population-
/// weighted overall purity.
PurityReport purities(const Dataset& ds, const CondensedModel& model);

double overall_purity(const Dataset& ds, const CondensedModel& model);

/// Instance counts per center id, ascending, zero-population centers omitted.
PopulationCounts population_counts(const Dataset& ds, const Matrix& centers);

/// Two nearest centers per point with complementary squared-distance weights
/// w1 = 1 - d1^2/(d1^2 + d2^2), w2 = 1 - d2^2/(d1^2 + d2^2). Equal distances
/// give (0.5, 0.5), including the coincident d1 = d2 = 0 limit. Requires at
/// least two centers. Correctness and activity flags are left unset.
SoftAssignment soft_assign(const Matrix& points, const Matrix& centers);

/// Fills the per-head correctness flags: does the assigned center's label
/// match the instance label.
SoftAssignment correctness(const IntVector& center_labels, SoftAssignment soft,
                           const IntVector& y);

/// Fills `active`: exactly one of the two correctness flags is true. Both
/// true means properly covered; both false means outlier. Neither drives
/// refinement.
SoftAssignment activity_mask(SoftAssignment soft);

/// Mean of weighted displacement contributions per center. Every active
/// instance holding a center as first or second nearest contributes
/// s * w * (x - c) with s = +1 for a correct assignment (attraction) and
/// s = -1 for an incorrect one (repulsion). Centers without contributions get
/// a zero vector.
Matrix advancement_vectors(const Dataset& ds, const Matrix& centers,
                           const SoftAssignment& soft);

/// Accepts a center's candidate position only when the overall purity of the
/// configuration with that single center moved strictly exceeds the purity of
/// the unmodified configuration. All decisions are evaluated against the
/// pre-step configuration, independently per center, then applied together
/// and the result relabeled.
CondensedModel select_advance(const Dataset& ds, const CondensedModel& model,
                              const Matrix& candidates);

/// One refinement iteration: soft assignment, correctness, activity, then
/// gated advancement by cfg.step_scale times the advancement vectors.
/// Requires at least two centers. The input model is not modified.
CondensedModel refine_step(const Dataset& ds, const CondensedModel& model,
                           const CondenseConfig& cfg);

/// Full pipeline: initialize, then refine while the overall purity keeps
/// improving. Stops at purity 1.0, after cfg.patience consecutive iterations
/// without strict improvement, or at cfg.max_iter. Returns the snapshot with
/// the highest purity (earliest on ties) with zero-population centers
/// dropped, plus the per-iteration purity trace.
CondenseResult condense(const Dataset& ds, const CondenseConfig& cfg);

}  // namespace crcond
