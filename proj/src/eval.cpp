#include "crcond/eval.hpp"

#include "crcond/kmeans.hpp"
#include "crcond/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace crcond {

namespace {

Matrix standardize(const MLPModel& model, const Matrix& points) {
  Matrix out = points;
  out.rowwise() -= model.feat_mean.transpose();
  out.array().rowwise() /= model.feat_std.transpose().array();
  return out;
}

// Row-wise softmax with the max subtracted for stability.
Matrix softmax_rows(Matrix logits) {
  for (Index i = 0; i < logits.rows(); ++i) {
    logits.row(i).array() -= logits.row(i).maxCoeff();
    logits.row(i) = logits.row(i).array().exp();
    logits.row(i) /= logits.row(i).sum();
  }
  return logits;
}

Matrix forward_hidden(const MLPModel& model, const Matrix& normed) {
  Matrix h = normed * model.w1.transpose();
  h.rowwise() += model.b1.transpose();
  return h.array().tanh();
}

Matrix glorot_uniform(Index rows, Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      w(i, j) = (2.0 * rng.uniform() - 1.0) * limit;
    }
  }
  return w;
}

void check_train_config(const TrainConfig& cfg) {
  if (cfg.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (cfg.hidden < 1) throw std::invalid_argument("train: hidden must be >= 1");
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning_rate must be positive");
  }
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
    throw std::invalid_argument("train: momentum must be in [0, 1)");
  }
}

}  // namespace

IntVector nearest_center_predict(const CondensedModel& model, const Matrix& points) {
  if (model.centers.rows() < 1) {
    throw std::invalid_argument("predict: model has no centers");
  }
  const IntVector assign = assign_nearest(points, model.centers);
  IntVector out(assign.size());
  for (Index i = 0; i < assign.size(); ++i) out[i] = model.center_labels[assign[i]];
  return out;
}

MLPModel mlp_train(const Dataset& train, const TrainConfig& cfg) {
  check_train_config(cfg);
  if (train.instances.rows() < 1) {
    throw std::invalid_argument("train: dataset must be non-empty");
  }
  if (train.n_classes < 2) {
    throw std::invalid_argument("train: at least two classes required, got " +
                                std::to_string(train.n_classes));
  }
  const Index n = train.instances.rows();
  const Index d = train.instances.cols();
  const Index c = train.n_classes;
  const Index h = cfg.hidden;

  MLPModel model;
  model.feat_mean = train.instances.colwise().mean();
  Matrix centered = train.instances.rowwise() - model.feat_mean.transpose();
  model.feat_std =
      (centered.array().square().colwise().sum() / static_cast<double>(n))
          .sqrt()
          .matrix()
          .transpose();
  for (Index j = 0; j < d; ++j) {
    if (model.feat_std[j] == 0.0) model.feat_std[j] = 1.0;
  }

  Rng rng(cfg.seed);
  model.w1 = glorot_uniform(h, d, rng);
  model.b1 = Vector::Zero(h);
  model.w2 = glorot_uniform(c, h, rng);
  model.b2 = Vector::Zero(c);

  const Matrix normed = standardize(model, train.instances);

  Matrix vel_w1 = Matrix::Zero(h, d);
  Vector vel_b1 = Vector::Zero(h);
  Matrix vel_w2 = Matrix::Zero(c, h);
  Vector vel_b2 = Vector::Zero(c);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates reshuffle each epoch.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index b = std::min<Index>(cfg.batch_size, n - start);
      Matrix xb(b, d);
      IntVector yb(b);
      for (Index i = 0; i < b; ++i) {
        xb.row(i) = normed.row(order[static_cast<std::size_t>(start + i)]);
        yb[i] = train.labels[order[static_cast<std::size_t>(start + i)]];
      }

      const Matrix hid = (xb * model.w1.transpose()).rowwise() + model.b1.transpose();
      const Matrix act = hid.array().tanh();
      Matrix logits = (act * model.w2.transpose()).rowwise() + model.b2.transpose();
      Matrix dlogits = softmax_rows(std::move(logits));
      for (Index i = 0; i < b; ++i) dlogits(i, yb[i]) -= 1.0;
      dlogits /= static_cast<double>(b);

      const Matrix g_w2 = dlogits.transpose() * act;
      const Vector g_b2 = dlogits.colwise().sum();
      const Matrix dact = dlogits * model.w2;
      const Matrix dhid = dact.array() * (1.0 - act.array().square());
      const Matrix g_w1 = dhid.transpose() * xb;
      const Vector g_b1 = dhid.colwise().sum();

      vel_w1 = cfg.momentum * vel_w1 - cfg.learning_rate * g_w1;
      vel_b1 = cfg.momentum * vel_b1 - cfg.learning_rate * g_b1;
      vel_w2 = cfg.momentum * vel_w2 - cfg.learning_rate * g_w2;
      vel_b2 = cfg.momentum * vel_b2 - cfg.learning_rate * g_b2;
      model.w1 += vel_w1;
      model.b1 += vel_b1;
      model.w2 += vel_w2;
      model.b2 += vel_b2;
    }
  }
  return model;
}

Matrix mlp_probabilities(const MLPModel& model, const Matrix& points) {
  if (points.cols() != model.w1.cols()) {
    throw std::invalid_argument("mlp: input has " + std::to_string(points.cols()) +
                                " features, model expects " +
                                std::to_string(model.w1.cols()));
  }
  const Matrix act = forward_hidden(model, standardize(model, points));
  Matrix logits = (act * model.w2.transpose()).rowwise() + model.b2.transpose();
  return softmax_rows(std::move(logits));
}

IntVector mlp_predict(const MLPModel& model, const Matrix& points) {
  const Matrix probs = mlp_probabilities(model, points);
  IntVector out(probs.rows());
  for (Index i = 0; i < probs.rows(); ++i) {
    Index best = 0;
    probs.row(i).maxCoeff(&best);
    out[i] = static_cast<int>(best);
  }
  return out;
}

double mlp_loss(const MLPModel& model, const Matrix& points, const IntVector& y) {
  if (points.rows() != y.size()) {
    throw std::invalid_argument("mlp_loss: point/label count mismatch");
  }
  if (points.rows() == 0) throw std::invalid_argument("mlp_loss: empty batch");
  const Matrix probs = mlp_probabilities(model, points);
  double loss = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    if (y[i] < 0 || y[i] >= probs.cols()) {
      throw std::invalid_argument("mlp_loss: label out of range at row " +
                                  std::to_string(i));
    }
    loss -= std::log(std::max(probs(i, y[i]), 1e-300));
  }
  return loss / static_cast<double>(points.rows());
}

MLPGradients mlp_gradients(const MLPModel& model, const Matrix& points,
                           const IntVector& y) {
  if (points.rows() != y.size()) {
    throw std::invalid_argument("mlp_gradients: point/label count mismatch");
  }
  if (points.rows() == 0) throw std::invalid_argument("mlp_gradients: empty batch");
  const Index b = points.rows();
  const Matrix normed = standardize(model, points);
  const Matrix act = forward_hidden(model, normed);
  Matrix logits = (act * model.w2.transpose()).rowwise() + model.b2.transpose();
  Matrix dlogits = softmax_rows(std::move(logits));
  for (Index i = 0; i < b; ++i) {
    if (y[i] < 0 || y[i] >= dlogits.cols()) {
      throw std::invalid_argument("mlp_gradients: label out of range at row " +
                                  std::to_string(i));
    }
    dlogits(i, y[i]) -= 1.0;
  }
  dlogits /= static_cast<double>(b);

  MLPGradients g;
  g.w2 = dlogits.transpose() * act;
  g.b2 = dlogits.colwise().sum();
  const Matrix dact = dlogits * model.w2;
  const Matrix dhid = dact.array() * (1.0 - act.array().square());
  g.w1 = dhid.transpose() * normed;
  g.b1 = dhid.colwise().sum();
  return g;
}

double accuracy(const IntVector& predicted, const IntVector& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("accuracy: length mismatch");
  }
  if (predicted.size() == 0) throw std::invalid_argument("accuracy: empty input");
  Index hits = 0;
  for (Index i = 0; i < predicted.size(); ++i) {
    hits += predicted[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace crcond
