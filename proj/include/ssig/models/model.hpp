#pragma once

// Model facade: common spec/hyperparameter types, training entry point,
// decision scores, and the small exhaustive grid search with an inner
// stratified 3-fold.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/models/forest.hpp"
#include "ssig/models/logistic.hpp"
#include "ssig/models/naive_bayes.hpp"
#include "ssig/models/svm.hpp"

namespace ssig {

enum class ModelKind { logistic_regression, linear_svm, gaussian_nb, random_forest };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::linear_svm: return "linear_svm";
    case ModelKind::gaussian_nb: return "gaussian_nb";
    case ModelKind::random_forest: return "random_forest";
  }
  return "?";
}

inline std::optional<ModelKind> model_from_string(std::string_view s) {
  if (s == "logistic_regression" || s == "logreg") return ModelKind::logistic_regression;
  if (s == "linear_svm" || s == "svm") return ModelKind::linear_svm;
  if (s == "gaussian_nb" || s == "nb") return ModelKind::gaussian_nb;
  if (s == "random_forest" || s == "rf") return ModelKind::random_forest;
  return std::nullopt;
}

struct Hyperparams {
  double reg = 1.0;               // regularization strength (linear models)
  int trees = 100;                // forest
  int depth = 0;                  // forest, 0 = unlimited
  double nb_epsilon_rel = 1e-9;   // naive Bayes variance smoothing
};

struct ModelSpec {
  ModelKind kind = ModelKind::logistic_regression;
  // enumeration order is simplest-first so grid-search ties resolve toward
  // the strongest regularization / shallowest forest
  std::vector<double> reg_grid = {10.0, 1.0, 0.1, 0.01};
  std::vector<int> trees_grid = {100};
  std::vector<int> depth_grid = {2, 4, 0};
  double nb_epsilon_rel = 1e-9;
  std::uint64_t seed = 1;
};

struct TrainedModel {
  ModelKind kind = ModelKind::logistic_regression;
  Hyperparams params;
  std::variant<LogisticModel, SvmModel, GaussianNbModel, ForestModel> model;
};

inline std::vector<Hyperparams> enumerate_grid(const ModelSpec& spec) {
  std::vector<Hyperparams> out;
  switch (spec.kind) {
    case ModelKind::logistic_regression:
    case ModelKind::linear_svm:
      for (const double r : spec.reg_grid) {
        Hyperparams h;
        h.reg = r;
        out.push_back(h);
      }
      break;
    case ModelKind::gaussian_nb: {
      Hyperparams h;
      h.nb_epsilon_rel = spec.nb_epsilon_rel;
      out.push_back(h);
      break;
    }
    case ModelKind::random_forest:
      for (const int t : spec.trees_grid)
        for (const int d : spec.depth_grid) {
          Hyperparams h;
          h.trees = t;
          h.depth = d;
          out.push_back(h);
        }
      break;
  }
  if (out.empty()) throw Error("empty hyperparameter grid");
  return out;
}

inline TrainedModel train(const ModelSpec& spec, const Hyperparams& hp, const DenseMatrix& x,
                          std::span<const int> y, std::uint64_t seed_override = 0) {
  bool has0 = false, has1 = false;
  for (const int v : y) (v == 0 ? has0 : has1) = true;
  if (!has0 || !has1) throw Error("train: single-class training labels");
  TrainedModel m;
  m.kind = spec.kind;
  m.params = hp;
  const std::uint64_t seed = seed_override ? seed_override : spec.seed;
  switch (spec.kind) {
    case ModelKind::logistic_regression: m.model = train_logistic(x, y, hp.reg); break;
    case ModelKind::linear_svm: m.model = train_svm(x, y, hp.reg); break;
    case ModelKind::gaussian_nb: m.model = train_gaussian_nb(x, y, hp.nb_epsilon_rel); break;
    case ModelKind::random_forest:
      m.model = train_random_forest(x, y, hp.trees, hp.depth, seed);
      break;
  }
  return m;
}

// Continuous score per row: class-1 probability for logistic and naive
// Bayes, signed margin for the SVM, vote fraction for the forest.
inline double decision_score(const TrainedModel& m, std::span<const double> row) {
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LogisticModel>) return logistic_score(model, row);
        if constexpr (std::is_same_v<T, SvmModel>) return svm_score(model, row);
        if constexpr (std::is_same_v<T, GaussianNbModel>) return gaussian_nb_score(model, row);
        if constexpr (std::is_same_v<T, ForestModel>) return forest_score(model, row);
        return 0.0;
      },
      m.model);
}

inline std::vector<double> decision_scores(const TrainedModel& m, const DenseMatrix& x) {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = decision_score(m, x.row(r));
  return out;
}

inline int predict_from_score(ModelKind kind, double score) {
  if (kind == ModelKind::linear_svm) return score >= 0.0 ? 1 : 0;
  return score >= 0.5 ? 1 : 0;
}

inline int predict(const TrainedModel& m, std::span<const double> row) {
  return predict_from_score(m.kind, decision_score(m, row));
}

// Deterministic stratified fold assignment: the i-th row of each class (in
// row order) goes to fold i % n_folds.
inline std::vector<int> stratified_folds(std::span<const int> y, int n_folds) {
  std::vector<int> fold(y.size());
  int seen[2] = {0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) fold[i] = seen[static_cast<std::size_t>(y[i])]++ % n_folds;
  return fold;
}

// Exhaustive grid scored by pooled inner 3-fold accuracy on the training rows
// only; ties keep the earlier (simplest) grid entry. Folds whose training
// part is single-class predict its majority label.
inline Hyperparams grid_search(const ModelSpec& spec, const DenseMatrix& x, std::span<const int> y,
                               int inner_folds = 3) {
  const auto grid = enumerate_grid(spec);
  if (grid.size() == 1) return grid[0];
  const auto fold = stratified_folds(y, inner_folds);
  Hyperparams best = grid[0];
  double best_acc = -1.0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    std::size_t correct = 0, total = 0;
    for (int f = 0; f < inner_folds; ++f) {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t r = 0; r < x.rows; ++r) (fold[r] == f ? test_rows : train_rows).push_back(r);
      if (test_rows.empty() || train_rows.empty()) continue;
      DenseMatrix xt(train_rows.size(), x.cols);
      std::vector<int> yt(train_rows.size());
      for (std::size_t i = 0; i < train_rows.size(); ++i) {
        for (std::size_t c = 0; c < x.cols; ++c) xt.at(i, c) = x.at(train_rows[i], c);
        yt[i] = y[train_rows[i]];
      }
      bool has0 = false, has1 = false;
      for (const int v : yt) (v == 0 ? has0 : has1) = true;
      if (!has0 || !has1) {
        const int majority = static_cast<int>(has1);
        for (const std::size_t r : test_rows) {
          correct += y[r] == majority ? 1 : 0;
          ++total;
        }
        continue;
      }
      const TrainedModel m = train(spec, grid[gi], xt, yt,
                                   derive_seed(spec.seed, 1000 + gi * 16 + static_cast<std::size_t>(f)));
      for (const std::size_t r : test_rows) {
        correct += predict(m, x.row(r)) == y[r] ? 1 : 0;
        ++total;
      }
    }
    const double acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    if (acc > best_acc) {
      best_acc = acc;
      best = grid[gi];
    }
  }
  return best;
}

}  // namespace ssig
