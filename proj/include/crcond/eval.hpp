#pragma once

#include "crcond/condenser.hpp"
#include "crcond/dataset.hpp"

#include <cstdint>

namespace crcond {

/// Feed-forward classifier D -> hidden (tanh) -> n_classes (softmax).
/// feat_mean/feat_std standardize inputs; they are fit on the training split.
struct MLPModel {
  Matrix w1;  // hidden x D
  Vector b1;  // hidden
  Matrix w2;  // n_classes x hidden
  Vector b2;  // n_classes
  Vector feat_mean;  // D
  Vector feat_std;   // D, strictly positive
};

struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  int hidden = 64;
  std::uint64_t seed = 0;
};

struct MLPGradients {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;
};

/// Label of the nearest center per point; ties go to the lowest center index.
IntVector nearest_center_predict(const CondensedModel& model, const Matrix& points);

/// Minibatch SGD with momentum on mean cross-entropy. Deterministic per seed.
/// Rejects single-class training sets. epochs == 0 returns the initialized
/// model untouched.
MLPModel mlp_train(const Dataset& train, const TrainConfig& cfg);

/// Row-wise class probabilities (softmax output; each row sums to 1).
Matrix mlp_probabilities(const MLPModel& model, const Matrix& points);

/// Argmax class per point, lowest index on ties.
IntVector mlp_predict(const MLPModel& model, const Matrix& points);

/// Mean cross-entropy of the model on (points, y).
double mlp_loss(const MLPModel& model, const Matrix& points, const IntVector& y);

/// Backpropagated gradients of mlp_loss w.r.t. all parameters.
MLPGradients mlp_gradients(const MLPModel& model, const Matrix& points,
                           const IntVector& y);

/// Fraction of exact matches. Requires equal-length non-empty vectors.
double accuracy(const IntVector& predicted, const IntVector& truth);

}  // namespace crcond
