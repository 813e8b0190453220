#include <doctest.h>

#include "oracles.hpp"
#include "ssig/models/model.hpp"

using namespace ssig;

namespace {

// Two standardized clusters around -1 and +1: margin about 2.
DenseMatrix separable_data(std::vector<int>& y, std::size_t per_class = 10,
                           std::size_t features = 2, std::uint64_t seed = 3) {
  Rng rng(seed);
  DenseMatrix x(2 * per_class, features);
  y.assign(2 * per_class, 0);
  for (std::size_t r = 0; r < 2 * per_class; ++r) {
    y[r] = r < per_class ? 0 : 1;
    for (std::size_t c = 0; c < features; ++c)
      x.at(r, c) = (y[r] ? 1.0 : -1.0) + 0.05 * normal01(rng);
  }
  return x;
}

}  // namespace

TEST_CASE("all four models reach 100% training accuracy on a separable toy set") {
  std::vector<int> y;
  const auto x = separable_data(y);
  for (const ModelKind kind : {ModelKind::logistic_regression, ModelKind::linear_svm,
                               ModelKind::gaussian_nb, ModelKind::random_forest}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 5;
    Hyperparams hp;
    hp.reg = 0.01;
    hp.trees = 100;
    hp.depth = 0;
    const auto model = train(spec, hp, x, y);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < x.rows; ++r) correct += predict(model, x.row(r)) == y[r] ? 1 : 0;
    CHECK(correct == x.rows);
  }
}

TEST_CASE("train rejects single-class labels") {
  DenseMatrix x(4, 1);
  std::vector<int> y = {1, 1, 1, 1};
  ModelSpec spec;
  CHECK_THROWS_AS(train(spec, Hyperparams{}, x, y), Error);
}

TEST_CASE("gaussian naive Bayes puts the boundary at zero for symmetric classes") {
  DenseMatrix x(6, 1);
  const double vals[6] = {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};
  std::vector<int> y = {0, 0, 0, 1, 1, 1};
  for (std::size_t i = 0; i < 6; ++i) x.at(i, 0) = vals[i];
  const auto nb = train_gaussian_nb(x, y);
  const double lo[1] = {-1e-6};
  const double hi[1] = {1e-6};
  const double zero[1] = {0.0};
  CHECK(gaussian_nb_score(nb, lo) < 0.5);
  CHECK(gaussian_nb_score(nb, hi) > 0.5);
  CHECK(gaussian_nb_score(nb, zero) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("logistic analytic gradient matches central finite differences") {
  Rng rng(77);
  DenseMatrix x(20, 4);
  std::vector<int> y(20);
  for (std::size_t r = 0; r < 20; ++r) {
    y[r] = r % 2;
    for (std::size_t c = 0; c < 4; ++c) x.at(r, c) = normal01(rng);
  }
  const double lambda = 0.5;
  for (int point = 0; point < 50; ++point) {
    std::vector<double> params(5);
    for (auto& v : params) v = normal01(rng);
    const std::span<const double> w(params.data(), 4);
    const auto grad = logistic_gradient(w, params[4], x, y, lambda);
    const auto fd = oracle::finite_difference_gradient(
        [&](const std::vector<double>& q) {
          return logistic_loss(std::span<const double>(q.data(), 4), q[4], x, y, lambda);
        },
        params);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double scale = std::max(1.0, std::abs(fd[i]));
      CHECK(std::abs(grad[i] - fd[i]) / scale <= 1e-5);
    }
  }
}

TEST_CASE("logistic training drives the gradient norm below tolerance") {
  std::vector<int> y;
  const auto x = separable_data(y, 12, 3, 9);
  const auto m = train_logistic(x, y, 0.1);
  const auto grad = logistic_gradient(m.weights, m.bias, x, y, 0.1);
  double norm = 0.0;
  for (const double g : grad) norm += g * g;
  CHECK(std::sqrt(norm) < 1e-6);
}

TEST_CASE("a depth-1 single-tree forest recovers the brute-force Gini midpoint") {
  // threshold-separable labels on one feature
  DenseMatrix x(12, 1);
  std::vector<int> y(12);
  const double vals[12] = {0.1, 0.35, 0.2, 0.8, 0.75, 0.15, 0.9, 0.85, 0.3, 0.7, 0.25, 0.95};
  for (std::size_t i = 0; i < 12; ++i) {
    x.at(i, 0) = vals[i];
    y[i] = vals[i] > 0.5 ? 1 : 0;
  }
  const std::uint64_t seed = 11;
  const auto forest = train_random_forest(x, y, 1, 1, seed);
  REQUIRE(forest.trees.size() == 1);
  const auto& root = forest.trees[0].nodes[0];
  REQUIRE(root.feature == 0);

  // replicate the documented bootstrap contract, then scan all midpoints
  Rng rng(derive_seed(seed, 0));
  std::vector<double> sample;
  std::vector<int> sample_y;
  for (std::size_t i = 0; i < 12; ++i) {
    const auto r = static_cast<std::size_t>(uniform_below(rng, 12));
    sample.push_back(vals[r]);
    sample_y.push_back(y[r]);
  }
  std::vector<std::size_t> order(sample.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
  double best_gini = 1e9, best_threshold = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (sample[order[i]] == sample[order[i + 1]]) continue;
    const double threshold = (sample[order[i]] + sample[order[i + 1]]) / 2.0;
    std::size_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (sample[j] <= threshold)
        (sample_y[j] == 0 ? l0 : l1) += 1;
      else
        (sample_y[j] == 0 ? r0 : r1) += 1;
    }
    const auto gini = [](std::size_t a, std::size_t b) {
      const double n = static_cast<double>(a + b);
      if (n == 0.0) return 0.0;
      const double pa = a / n, pb = b / n;
      return 1.0 - pa * pa - pb * pb;
    };
    const double g = (static_cast<double>(l0 + l1) * gini(l0, l1) +
                      static_cast<double>(r0 + r1) * gini(r0, r1)) /
                     static_cast<double>(sample.size());
    if (g < best_gini) {
      best_gini = g;
      best_threshold = threshold;
    }
  }
  CHECK(root.threshold == doctest::Approx(best_threshold).epsilon(1e-12));
}

TEST_CASE("decision scores live in their documented ranges") {
  std::vector<int> y;
  const auto x = separable_data(y, 8, 2, 13);
  ModelSpec spec;
  spec.kind = ModelKind::logistic_regression;
  const auto logistic = train(spec, Hyperparams{}, x, y);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double s = decision_score(logistic, x.row(r));
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  spec.kind = ModelKind::random_forest;
  Hyperparams hp;
  hp.trees = 25;
  const auto forest = train(spec, hp, x, y);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double s = decision_score(forest, x.row(r));
    // strongly separated data: every tree agrees
    CHECK((s == 0.0 || s == 1.0));
  }
  spec.kind = ModelKind::gaussian_nb;
  const auto nb = train(spec, Hyperparams{}, x, y);
  spec.kind = ModelKind::linear_svm;
  const auto svm = train(spec, Hyperparams{}, x, y);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double p = decision_score(nb, x.row(r));
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(std::isfinite(decision_score(svm, x.row(r))));
  }
}

TEST_CASE("the logistic score increases along the informative feature") {
  std::vector<int> y;
  const auto x = separable_data(y, 10, 1, 17);
  ModelSpec spec;
  spec.kind = ModelKind::logistic_regression;
  const auto m = train(spec, Hyperparams{}, x, y);
  double prev = -1.0;
  for (const double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const double row[1] = {v};
    const double s = decision_score(m, row);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("grid_search with a single-point grid returns that point") {
  std::vector<int> y;
  const auto x = separable_data(y, 6, 2, 19);
  ModelSpec spec;
  spec.kind = ModelKind::gaussian_nb;
  const auto hp = grid_search(spec, x, y);
  CHECK(hp.nb_epsilon_rel == spec.nb_epsilon_rel);
}

TEST_CASE("grid_search prefers the strongest regularization on pure noise") {
  Rng rng(23);
  DenseMatrix x(30, 5);
  std::vector<int> y(30);
  for (std::size_t r = 0; r < 30; ++r) {
    y[r] = r % 2;
    for (std::size_t c = 0; c < 5; ++c) x.at(r, c) = normal01(rng);
  }
  ModelSpec spec;
  spec.kind = ModelKind::logistic_regression;
  spec.reg_grid = {10.0, 0.001};  // strong first, weak second
  const auto hp = grid_search(spec, x, y);
  // either strong genuinely wins or the tie resolves toward it
  CHECK(hp.reg == 10.0);
}

TEST_CASE("an empty hyperparameter grid is rejected") {
  ModelSpec spec;
  spec.kind = ModelKind::linear_svm;
  spec.reg_grid = {};
  CHECK_THROWS_AS(enumerate_grid(spec), Error);
}

TEST_CASE("grid_search is deterministic across repeated runs") {
  std::vector<int> y;
  const auto x = separable_data(y, 9, 3, 29);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.seed = 99;
  const auto a = grid_search(spec, x, y);
  const auto b = grid_search(spec, x, y);
  CHECK(a.depth == b.depth);
  CHECK(a.trees == b.trees);
}

TEST_CASE("forest training is reproducible given the seed") {
  std::vector<int> y;
  const auto x = separable_data(y, 10, 3, 31);
  const auto a = train_random_forest(x, y, 20, 0, 123);
  const auto b = train_random_forest(x, y, 20, 0, 123);
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
      CHECK(a.trees[t].nodes[n].feature == b.trees[t].nodes[n].feature);
      CHECK(a.trees[t].nodes[n].threshold == b.trees[t].nodes[n].threshold);
    }
  }
}
