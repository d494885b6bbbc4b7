#include "crcond/condenser.hpp"

#include "crcond/kmeans.hpp"
#include "crcond/parallel.hpp"
#include "crcond/rng.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crcond {

namespace {

struct TwoNearest {
  IntVector first_id;
  IntVector second_id;
  Vector first_d2;
  Vector second_d2;
};

// Squared distances to the two nearest centers; ties go to the lowest index
// for both slots. Requires at least two centers.
TwoNearest two_nearest(const Matrix& points, const Matrix& centers) {
  const Index n = points.rows();
  const Index m = centers.rows();
  TwoNearest out;
  out.first_id.resize(n);
  out.second_id.resize(n);
  out.first_d2.resize(n);
  out.second_d2.resize(n);
  parallel_for_each(n, [&](std::ptrdiff_t i) {
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    Index i1 = 0;
    Index i2 = 0;
    for (Index j = 0; j < m; ++j) {
      const double d = (points.row(i) - centers.row(j)).squaredNorm();
      if (d < d1) {
        d2 = d1;
        i2 = i1;
        d1 = d;
        i1 = j;
      } else if (d < d2) {
        d2 = d;
        i2 = j;
      }
    }
    out.first_id[i] = static_cast<int>(i1);
    out.second_id[i] = static_cast<int>(i2);
    out.first_d2[i] = d1;
    out.second_d2[i] = d2;
  });
  return out;
}

// Class histogram per center under nearest-center assignment.
std::vector<IntVector> class_histograms(const Dataset& ds, const IntVector& assign,
                                        Index m) {
  std::vector<IntVector> hist(static_cast<std::size_t>(m),
                              IntVector::Zero(std::max(ds.n_classes, 1)));
  for (Index i = 0; i < ds.labels.size(); ++i) {
    hist[static_cast<std::size_t>(assign[i])][ds.labels[i]] += 1;
  }
  return hist;
}

long plurality_total(const std::vector<IntVector>& hist) {
  long total = 0;
  for (const auto& h : hist) total += h.size() > 0 ? h.maxCoeff() : 0;
  return total;
}

void check_model(const CondensedModel& model) {
  if (model.centers.rows() < 1) {
    throw std::invalid_argument("model must have at least one center");
  }
  if (model.centers.rows() != model.center_labels.size()) {
    throw std::invalid_argument("model: center/label count mismatch");
  }
}

void check_dataset_nonempty(const Dataset& ds) {
  if (ds.instances.rows() < 1) {
    throw std::invalid_argument("dataset must be non-empty");
  }
}

}  // namespace

CondensedModel initialize(const Dataset& ds, const CondenseConfig& cfg) {
  check_dataset_nonempty(ds);
  if (cfg.k_per_class.size() != ds.n_classes) {
    throw std::invalid_argument(
        "initialize: k_per_class has " + std::to_string(cfg.k_per_class.size()) +
        " entries but the dataset has " + std::to_string(ds.n_classes) +
        " classes");
  }
  if (!(cfg.step_scale > 0.0) || !std::isfinite(cfg.step_scale)) {
    throw std::invalid_argument("initialize: step_scale must be finite and positive");
  }
  const auto parts = class_partition(ds);
  Index total_k = 0;
  for (int c = 0; c < ds.n_classes; ++c) {
    const int k = cfg.k_per_class[c];
    if (k < 1) {
      throw std::invalid_argument("initialize: k for class " + std::to_string(c) +
                                  " must be >= 1");
    }
    const auto count = static_cast<Index>(parts[static_cast<std::size_t>(c)].size());
    if (count < k) {
      throw std::invalid_argument(
          "initialize: class " + std::to_string(c) + " has " +
          std::to_string(count) + " instances, fewer than its k = " +
          std::to_string(k));
    }
    total_k += k;
  }

  CondensedModel model;
  model.centers.resize(total_k, ds.instances.cols());
  model.k_per_class = cfg.k_per_class;
  Index row = 0;
  for (int c = 0; c < ds.n_classes; ++c) {
    const auto& idx = parts[static_cast<std::size_t>(c)];
    Matrix class_points(static_cast<Index>(idx.size()), ds.instances.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      class_points.row(static_cast<Index>(i)) = ds.instances.row(idx[i]);
    }
    KMeansConfig km;
    km.k = cfg.k_per_class[c];
    km.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
    const Matrix centers = kmeans_fit(class_points, km);
    model.centers.middleRows(row, km.k) = centers;
    row += km.k;
  }
  model.center_labels = label_centers(ds, model.centers);
  return model;
}

IntVector label_centers(const Dataset& ds, const Matrix& centers) {
  check_dataset_nonempty(ds);
  const Index m = centers.rows();
  const IntVector assign = assign_nearest(ds.instances, centers);
  const auto hist = class_histograms(ds, assign, m);
  IntVector labels(m);
  for (Index j = 0; j < m; ++j) {
    const auto& h = hist[static_cast<std::size_t>(j)];
    if (h.sum() > 0) {
      int best_class = 0;
      int best_count = -1;
      for (int c = 0; c < h.size(); ++c) {
        if (h[c] > best_count) {
          best_count = h[c];
          best_class = c;
        }
      }
      labels[j] = best_class;
    } else {
      // Unpopulated center: take the class of the instance nearest to it.
      Index nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < ds.instances.rows(); ++i) {
        const double d = (ds.instances.row(i) - centers.row(j)).squaredNorm();
        if (d < best) {
          best = d;
          nearest = i;
        }
      }
      labels[j] = ds.labels[nearest];
    }
  }
  return labels;
}

PurityReport purities(const Dataset& ds, const CondensedModel& model) {
  check_model(model);
  check_dataset_nonempty(ds);
  const Index m = model.centers.rows();
  const IntVector assign = assign_nearest(ds.instances, model.centers);
  const auto hist = class_histograms(ds, assign, m);
  PurityReport report;
  report.per_center.resize(m);
  report.population.resize(m);
  long total = 0;
  for (Index j = 0; j < m; ++j) {
    const auto& h = hist[static_cast<std::size_t>(j)];
    const int pop = h.sum();
    const int top = h.maxCoeff();
    report.population[j] = pop;
    report.per_center[j] = pop > 0 ? static_cast<double>(top) / pop : 0.0;
    if (pop > 0) total += top;
  }
  report.overall =
      static_cast<double>(total) / static_cast<double>(ds.instances.rows());
  return report;
}

double overall_purity(const Dataset& ds, const CondensedModel& model) {
  return purities(ds, model).overall;
}

PopulationCounts population_counts(const Dataset& ds, const Matrix& centers) {
  if (centers.rows() < 1) {
    throw std::invalid_argument("population_counts: centers must be non-empty");
  }
  PopulationCounts out;
  if (ds.instances.rows() == 0) {
    out.ids.resize(0);
    out.counts.resize(0);
    return out;
  }
  const IntVector assign = assign_nearest(ds.instances, centers);
  IntVector counts = IntVector::Zero(centers.rows());
  for (Index i = 0; i < assign.size(); ++i) counts[assign[i]] += 1;
  Index present = 0;
  for (Index j = 0; j < counts.size(); ++j) present += counts[j] > 0 ? 1 : 0;
  out.ids.resize(present);
  out.counts.resize(present);
  Index at = 0;
  for (Index j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) {
      out.ids[at] = static_cast<int>(j);
      out.counts[at] = counts[j];
      ++at;
    }
  }
  return out;
}

SoftAssignment soft_assign(const Matrix& points, const Matrix& centers) {
  if (centers.rows() < 2) {
    throw std::invalid_argument(
        "soft_assign: at least two centers required, got " +
        std::to_string(centers.rows()));
  }
  if (points.cols() != centers.cols()) {
    throw std::invalid_argument("soft_assign: dimension mismatch");
  }
  const TwoNearest nn = two_nearest(points, centers);
  const Index n = points.rows();
  SoftAssignment soft;
  soft.first_id = nn.first_id;
  soft.second_id = nn.second_id;
  soft.first_weight.resize(n);
  soft.second_weight.resize(n);
  soft.first_correct.assign(static_cast<std::size_t>(n), 0);
  soft.second_correct.assign(static_cast<std::size_t>(n), 0);
  soft.active.assign(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    const double s = nn.first_d2[i] + nn.second_d2[i];
    if (s > 0.0) {
      soft.first_weight[i] = 1.0 - nn.first_d2[i] / s;
      soft.second_weight[i] = 1.0 - nn.second_d2[i] / s;
    } else {
      // Coincident with both centers: the equal-distance limit.
      soft.first_weight[i] = 0.5;
      soft.second_weight[i] = 0.5;
    }
  }
  return soft;
}

SoftAssignment correctness(const IntVector& center_labels, SoftAssignment soft,
                           const IntVector& y) {
  const Index n = y.size();
  if (soft.first_id.size() != n || soft.second_id.size() != n) {
    throw std::invalid_argument("correctness: assignment/label length mismatch");
  }
  for (Index i = 0; i < n; ++i) {
    if (soft.first_id[i] < 0 || soft.first_id[i] >= center_labels.size() ||
        soft.second_id[i] < 0 || soft.second_id[i] >= center_labels.size()) {
      throw std::invalid_argument("correctness: center id out of range at row " +
                                  std::to_string(i));
    }
    soft.first_correct[static_cast<std::size_t>(i)] =
        center_labels[soft.first_id[i]] == y[i] ? 1 : 0;
    soft.second_correct[static_cast<std::size_t>(i)] =
        center_labels[soft.second_id[i]] == y[i] ? 1 : 0;
  }
  return soft;
}

SoftAssignment activity_mask(SoftAssignment soft) {
  for (std::size_t i = 0; i < soft.active.size(); ++i) {
    soft.active[i] = soft.first_correct[i] != soft.second_correct[i] ? 1 : 0;
  }
  return soft;
}

Matrix advancement_vectors(const Dataset& ds, const Matrix& centers,
                           const SoftAssignment& soft) {
  const Index n = ds.instances.rows();
  const Index m = centers.rows();
  Matrix sums = Matrix::Zero(m, centers.cols());
  IntVector counts = IntVector::Zero(m);
  for (Index i = 0; i < n; ++i) {
    if (!soft.active[static_cast<std::size_t>(i)]) continue;
    const int f = soft.first_id[i];
    const double sf = soft.first_correct[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
    sums.row(f) += sf * soft.first_weight[i] * (ds.instances.row(i) - centers.row(f));
    counts[f] += 1;
    const int g = soft.second_id[i];
    const double sg = soft.second_correct[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
    sums.row(g) += sg * soft.second_weight[i] * (ds.instances.row(i) - centers.row(g));
    counts[g] += 1;
  }
  for (Index j = 0; j < m; ++j) {
    if (counts[j] > 0) sums.row(j) /= counts[j];
  }
  return sums;
}

CondensedModel select_advance(const Dataset& ds, const CondensedModel& model,
                              const Matrix& candidates) {
  check_model(model);
  check_dataset_nonempty(ds);
  if (candidates.rows() != model.centers.rows() ||
      candidates.cols() != model.centers.cols()) {
    throw std::invalid_argument("select_advance: candidate shape mismatch");
  }
  const Index m = model.centers.rows();
  CondensedModel next = model;
  if (m < 2) {
    // A lone center owns every instance; moving it cannot change purity.
    next.center_labels = label_centers(ds, next.centers);
    return next;
  }

  const Index n = ds.instances.rows();
  const TwoNearest nn = two_nearest(ds.instances, model.centers);
  const auto base_hist = class_histograms(ds, nn.first_id, m);
  const long base_total = plurality_total(base_hist);

  std::vector<char> accept(static_cast<std::size_t>(m), 0);
  parallel_for_each(m, [&](std::ptrdiff_t j) {
    // Purity of the configuration with only center j at its candidate,
    // every other center untouched.
    auto hist = base_hist;
    for (Index i = 0; i < n; ++i) {
      const bool was_first = nn.first_id[i] == static_cast<int>(j);
      const double base_d = was_first ? nn.second_d2[i] : nn.first_d2[i];
      const int base_id = was_first ? nn.second_id[i] : nn.first_id[i];
      const double cand_d =
          (ds.instances.row(i) - candidates.row(j)).squaredNorm();
      const int new_id = (cand_d < base_d ||
                          (cand_d == base_d && static_cast<int>(j) < base_id))
                             ? static_cast<int>(j)
                             : base_id;
      const int old_id = nn.first_id[i];
      if (new_id != old_id) {
        hist[static_cast<std::size_t>(old_id)][ds.labels[i]] -= 1;
        hist[static_cast<std::size_t>(new_id)][ds.labels[i]] += 1;
      }
    }
    accept[static_cast<std::size_t>(j)] = plurality_total(hist) > base_total;
  });

  for (Index j = 0; j < m; ++j) {
    if (accept[static_cast<std::size_t>(j)]) next.centers.row(j) = candidates.row(j);
  }
  next.center_labels = label_centers(ds, next.centers);
  return next;
}

CondensedModel refine_step(const Dataset& ds, const CondensedModel& model,
                           const CondenseConfig& cfg) {
  check_model(model);
  if (model.centers.rows() < 2) {
    throw std::invalid_argument("refine_step: at least two centers required");
  }
  SoftAssignment soft = soft_assign(ds.instances, model.centers);
  soft = correctness(model.center_labels, std::move(soft), ds.labels);
  soft = activity_mask(std::move(soft));
  const Matrix advance = advancement_vectors(ds, model.centers, soft);
  const Matrix candidates = model.centers + cfg.step_scale * advance;
  return select_advance(ds, model, candidates);
}

CondenseResult condense(const Dataset& ds, const CondenseConfig& cfg) {
  if (cfg.patience < 0) throw std::invalid_argument("condense: patience must be >= 0");
  if (cfg.max_iter < 0) throw std::invalid_argument("condense: max_iter must be >= 0");

  CondensedModel model = initialize(ds, cfg);
  CondenseResult result;
  result.model = model;
  result.history.purity_trace.push_back(overall_purity(ds, model));
  result.history.best_purity = result.history.purity_trace[0];
  result.history.best_iteration = 0;

  // patience == 0 tolerates nothing: the first non-improving iteration stops
  // the loop, exactly as patience == 1 does.
  const int stop_after = std::max(cfg.patience, 1);
  if (result.history.best_purity < 1.0 && model.centers.rows() >= 2) {
    int non_improving = 0;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
      model = refine_step(ds, model, cfg);
      const double purity = overall_purity(ds, model);
      result.history.purity_trace.push_back(purity);
      if (purity > result.history.best_purity) {
        result.history.best_purity = purity;
        result.history.best_iteration = iter;
        result.model = model;
        non_improving = 0;
      } else {
        ++non_improving;
        if (non_improving >= stop_after) break;
      }
      if (result.history.best_purity >= 1.0) break;
    }
  }

  // Centers still unpopulated at convergence are dropped; no instance has one
  // as its nearest, so assignments and purity are unchanged.
  const IntVector assign = assign_nearest(ds.instances, result.model.centers);
  IntVector pop = IntVector::Zero(result.model.centers.rows());
  for (Index i = 0; i < assign.size(); ++i) pop[assign[i]] += 1;
  const Index kept = (pop.array() > 0).count();
  if (kept < result.model.centers.rows()) {
    Matrix centers(kept, result.model.centers.cols());
    IntVector labels(kept);
    Index at = 0;
    for (Index j = 0; j < pop.size(); ++j) {
      if (pop[j] > 0) {
        centers.row(at) = result.model.centers.row(j);
        labels[at] = result.model.center_labels[j];
        ++at;
      }
    }
    result.model.centers = std::move(centers);
    result.model.center_labels = std::move(labels);
  }
  return result;
}

}  // namespace crcond
