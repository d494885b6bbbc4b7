#include <doctest.h>

#include "crcond/condenser.hpp"
#include "crcond/eval.hpp"
#include "crcond/rng.hpp"
#include "crcond/synth.hpp"

#include <cmath>

using namespace crcond;

namespace {

Dataset three_class_batch(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, 2);
  IntVector y(n);
  for (Index i = 0; i < n; ++i) {
    x(i, 0) = rng.gaussian();
    x(i, 1) = rng.gaussian();
    y[i] = static_cast<int>(rng.below(3));
  }
  y[0] = 0;
  y[1] = 1;
  y[2] = 2;
  return make_dataset(std::move(x), std::move(y));
}

// Central finite differences of the mean cross-entropy wrt every parameter.
double max_gradient_error(MLPModel model, const Matrix& x, const IntVector& y) {
  const MLPGradients g = mlp_gradients(model, x, y);
  const double h = 1e-6;

  double num = 0.0;
  double denom = 0.0;
  const auto probe = [&](double* param, double analytic) {
    const double saved = *param;
    *param = saved + h;
    const double up = mlp_loss(model, x, y);
    *param = saved - h;
    const double down = mlp_loss(model, x, y);
    *param = saved;
    const double fd = (up - down) / (2.0 * h);
    num += (analytic - fd) * (analytic - fd);
    denom += analytic * analytic + fd * fd;
  };

  for (Index i = 0; i < model.w1.rows(); ++i) {
    for (Index j = 0; j < model.w1.cols(); ++j) probe(&model.w1(i, j), g.w1(i, j));
  }
  for (Index i = 0; i < model.b1.size(); ++i) probe(&model.b1[i], g.b1[i]);
  for (Index i = 0; i < model.w2.rows(); ++i) {
    for (Index j = 0; j < model.w2.cols(); ++j) probe(&model.w2(i, j), g.w2(i, j));
  }
  for (Index i = 0; i < model.b2.size(); ++i) probe(&model.b2[i], g.b2[i]);

  return std::sqrt(num) / (std::sqrt(denom) + 1e-300);
}

}  // namespace

TEST_CASE("nearest_center_predict reports the label of the closest center") {
  CondensedModel model;
  model.centers.resize(3, 1);
  model.centers << 0.0, 5.0, 10.0;
  model.center_labels.resize(3);
  model.center_labels << 1, 0, 1;
  Matrix pts(4, 1);
  pts << -1, 4.9, 7.5, 20;  // 7.5 ties centers 1 and 2 -> low index wins
  const IntVector pred = nearest_center_predict(model, pts);
  CHECK(pred[0] == 1);
  CHECK(pred[1] == 0);
  CHECK(pred[2] == 0);
  CHECK(pred[3] == 1);
}

TEST_CASE("accuracy counts exact matches") {
  IntVector a(4), b(4);
  a << 0, 1, 2, 1;
  b << 0, 1, 1, 1;
  CHECK(accuracy(a, b) == doctest::Approx(0.75));
  CHECK_THROWS(accuracy(a, IntVector::Zero(3)));
  CHECK_THROWS(accuracy(IntVector(), IntVector()));
}

TEST_CASE("mlp gradients match central finite differences") {
  const Dataset batch = three_class_batch(16, 1234);
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.epochs = 0;  // keep the untrained (random) network
  cfg.seed = 5;
  const MLPModel model = mlp_train(batch, cfg);
  const double err = max_gradient_error(model, batch.instances, batch.labels);
  CHECK(err < 1e-4);
}

TEST_CASE("probabilities are a proper distribution") {
  const Dataset batch = three_class_batch(20, 99);
  TrainConfig cfg;
  cfg.hidden = 4;
  cfg.epochs = 2;
  const MLPModel model = mlp_train(batch, cfg);
  const Matrix p = mlp_probabilities(model, batch.instances);
  REQUIRE(p.rows() == 20);
  REQUIRE(p.cols() == 3);
  for (Index i = 0; i < p.rows(); ++i) {
    CHECK(p.row(i).minCoeff() >= 0.0);
    CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("training separates well-separated blobs") {
  Rng rng(7);
  const Index n = 200;
  Matrix x(n, 2);
  IntVector y(n);
  for (Index i = 0; i < n; ++i) {
    const int c = i < n / 2 ? 0 : 1;
    x(i, 0) = (c == 0 ? -2.0 : 2.0) + 0.3 * rng.gaussian();
    x(i, 1) = 0.3 * rng.gaussian();
    y[i] = c;
  }
  const Dataset ds = make_dataset(std::move(x), std::move(y));
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.hidden = 16;
  cfg.seed = 3;
  const MLPModel model = mlp_train(ds, cfg);
  CHECK(accuracy(mlp_predict(model, ds.instances), ds.labels) >= 0.99);
  CHECK(mlp_loss(model, ds.instances, ds.labels) < 0.1);
}

TEST_CASE("training is deterministic per seed") {
  const Dataset ds = make_moons(120, NoiseParams{0.08, 4});
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 11;
  const MLPModel a = mlp_train(ds, cfg);
  const MLPModel b = mlp_train(ds, cfg);
  CHECK((a.w1.array() == b.w1.array()).all());
  CHECK((a.w2.array() == b.w2.array()).all());
  CHECK((a.b1.array() == b.b1.array()).all());
  CHECK((a.b2.array() == b.b2.array()).all());
}

TEST_CASE("standardization tolerates constant features") {
  Matrix x(6, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  IntVector y(6);
  y << 0, 0, 0, 1, 1, 1;
  const Dataset ds = make_dataset(x, y);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 3;
  cfg.hidden = 4;
  const MLPModel model = mlp_train(ds, cfg);
  CHECK(model.feat_std[0] == 1.0);
  CHECK(model.w1.allFinite());
  CHECK(mlp_loss(model, ds.instances, ds.labels) < 1.0);
}

TEST_CASE("mlp_train validates its inputs") {
  Matrix x(3, 1);
  x << 0, 1, 2;
  IntVector y = IntVector::Zero(3);
  const Dataset one_class = make_dataset(x, y);
  TrainConfig cfg;
  CHECK_THROWS_WITH(mlp_train(one_class, cfg), doctest::Contains("two classes"));

  IntVector y2(3);
  y2 << 0, 1, 0;
  const Dataset ok = make_dataset(x, y2);
  cfg.batch_size = 0;
  CHECK_THROWS(mlp_train(ok, cfg));
  cfg.batch_size = 2;
  cfg.learning_rate = 0.0;
  CHECK_THROWS(mlp_train(ok, cfg));
  cfg.learning_rate = 0.01;
  cfg.momentum = 1.0;
  CHECK_THROWS(mlp_train(ok, cfg));
}

TEST_CASE("dimension mismatches are reported") {
  const Dataset ds = three_class_batch(12, 8);
  TrainConfig cfg;
  cfg.epochs = 1;
  const MLPModel model = mlp_train(ds, cfg);
  Matrix wrong(2, 5);
  wrong.setZero();
  CHECK_THROWS_WITH(mlp_probabilities(model, wrong), doctest::Contains("features"));
}

TEST_CASE("a small hidden layer solves xor") {
  Matrix x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  IntVector y(4);
  y << 0, 1, 1, 0;
  const Dataset ds = make_dataset(x, y);
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.1;
  cfg.epochs = 3000;
  cfg.seed = 5;
  const MLPModel model = mlp_train(ds, cfg);
  CHECK(accuracy(mlp_predict(model, ds.instances), ds.labels) == 1.0);
}

TEST_CASE("nearest-center training accuracy equals overall purity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index n = 40 + static_cast<Index>(rng.below(80));
    Matrix x(n, 2);
    IntVector y(n);
    for (Index i = 0; i < n; ++i) {
      x(i, 0) = rng.gaussian();
      x(i, 1) = rng.gaussian();
      y[i] = static_cast<int>(rng.below(3));
    }
    y[0] = 0;
    y[1] = 0;
    y[2] = 1;
    y[3] = 1;
    y[4] = 2;
    y[5] = 2;
    const Dataset ds = make_dataset(std::move(x), std::move(y));

    CondenseConfig cfg;
    cfg.k_per_class.resize(3);
    cfg.k_per_class << 2, 2, 2;
    cfg.seed = seed + 100;
    const CondensedModel init = initialize(ds, cfg);
    CHECK(accuracy(nearest_center_predict(init, ds.instances), ds.labels) ==
          overall_purity(ds, init));

    cfg.max_iter = 10;
    const CondenseResult res = condense(ds, cfg);
    CHECK(accuracy(nearest_center_predict(res.model, ds.instances), ds.labels) ==
          overall_purity(ds, res.model));
    CHECK(res.history.best_purity == overall_purity(ds, res.model));
  }
}
