#pragma once

// Questionnaire score construction, label binarization, leakage-safe
// leave-one-out cross-validation, metric computation, and report rendering.

#include <array>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/features/matrix.hpp"
#include "ssig/models/model.hpp"
#include "ssig/selection.hpp"

namespace ssig {

struct QuestionnaireResponse {
  std::string session_id;
  std::array<int, 5> items{};  // 5-point Likert, 1..5

  void validate() const {
    for (const int v : items)
      if (v < 1 || v > 5)
        throw Error("questionnaire for " + session_id + ": item out of 1..5 range");
  }
};

inline double average_items(const QuestionnaireResponse& r) {
  r.validate();
  double s = 0.0;
  for (const int v : r.items) s += v;
  return s / 5.0;
}

// alpha = k/(k-1) * (1 - sum(item variances) / variance(row sums)), sample
// variances with the n-1 denominator.
inline double cronbach_alpha(const DenseMatrix& items) {
  if (items.rows < 2) throw Error("cronbach_alpha: need at least 2 respondents");
  const auto k = static_cast<double>(items.cols);
  if (items.cols < 2) throw Error("cronbach_alpha: need at least 2 items");
  double item_var_sum = 0.0;
  std::vector<double> col(items.rows);
  for (std::size_t c = 0; c < items.cols; ++c) {
    for (std::size_t r = 0; r < items.rows; ++r) col[r] = items.at(r, c);
    item_var_sum += variance_sample(col);
  }
  std::vector<double> totals(items.rows, 0.0);
  for (std::size_t r = 0; r < items.rows; ++r)
    for (std::size_t c = 0; c < items.cols; ++c) totals[r] += items.at(r, c);
  const double total_var = variance_sample(totals);
  if (!(total_var > 0.0)) throw Error("cronbach_alpha: zero total-score variance");
  return k / (k - 1.0) * (1.0 - item_var_sum / total_var);
}

struct BinarizedLabels {
  std::vector<int> classes;  // 0 = low satisfaction, 1 = medium/high
  double threshold = 0.0;    // 33rd percentile of the scores
};

// Class 0 iff score <= the 33rd percentile (linear-interpolation definition).
inline BinarizedLabels binarize_labels(std::span<const double> scores) {
  if (scores.empty()) throw Error("binarize_labels: empty scores");
  BinarizedLabels out;
  out.threshold = percentile_linear({scores.begin(), scores.end()}, 0.33);
  out.classes.reserve(scores.size());
  for (const double s : scores) out.classes.push_back(s <= out.threshold ? 0 : 1);
  return out;
}

struct LoocvOptions {
  std::size_t k = 10;
  bool selection_inside = true;  // false replicates outside-loop selection (leaks)
  int inner_folds = 3;
};

struct LoocvResult {
  std::vector<int> predictions;
  std::vector<double> scores;
  std::vector<std::uint8_t> degenerate_folds;
  std::size_t degenerate_count = 0;
};

// Training view of a fold: every row except the held-out one, in order.
inline std::pair<DenseMatrix, std::vector<int>> drop_row(const DenseMatrix& x,
                                                         std::span<const int> y,
                                                         std::size_t held) {
  DenseMatrix xt(x.rows - 1, x.cols);
  std::vector<int> yt(x.rows - 1);
  std::size_t w = 0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    if (r == held) continue;
    for (std::size_t c = 0; c < x.cols; ++c) xt.at(w, c) = x.at(r, c);
    yt[w] = y[r];
    ++w;
  }
  return {std::move(xt), std::move(yt)};
}

// One fold per row: selection and standardization are fitted on the n-1
// training rows only, the grid search and final model train on those same
// rows, and the held-out row is predicted once. A fold whose training labels
// collapse to one class predicts the majority class and is flagged.
inline LoocvResult loocv(const DenseMatrix& x, std::span<const int> y, const ModelSpec& spec,
                         const LoocvOptions& opt = {},
                         std::span<const std::string> feature_names = {}) {
  const std::size_t n = x.rows;
  if (n < 2) throw Error("loocv: need at least 2 rows");
  LoocvResult res;
  res.predictions.assign(n, 0);
  res.scores.assign(n, 0.0);
  res.degenerate_folds.assign(n, 0);

  SelectionResult outside_sel;
  if (!opt.selection_inside) outside_sel = select_k_best(x, y, opt.k, feature_names);

  for (std::size_t held = 0; held < n; ++held) {
    auto [xt, yt] = drop_row(x, y, held);
    bool has0 = false, has1 = false;
    for (const int v : yt) (v == 0 ? has0 : has1) = true;
    if (!has0 || !has1) {
      const int majority = static_cast<int>(has1);
      res.predictions[held] = majority;
      res.scores[held] = static_cast<double>(majority);
      res.degenerate_folds[held] = 1;
      ++res.degenerate_count;
      continue;
    }
    SelectionResult sel;
    if (opt.selection_inside)
      sel = select_k_best(xt, yt, opt.k, feature_names);
    else
      sel = outside_sel;
    const DenseMatrix xs = project_standardized(xt, sel);

    ModelSpec fold_spec = spec;
    fold_spec.seed = derive_seed(spec.seed, held);
    const Hyperparams hp = grid_search(fold_spec, xs, yt, opt.inner_folds);
    const TrainedModel model = train(fold_spec, hp, xs, yt);

    DenseMatrix xh(1, x.cols);
    for (std::size_t c = 0; c < x.cols; ++c) xh.at(0, c) = x.at(held, c);
    const DenseMatrix xhs = project_standardized(xh, sel);
    res.scores[held] = decision_score(model, xhs.row(0));
    res.predictions[held] = predict_from_score(spec.kind, res.scores[held]);
  }
  return res;
}

struct Metrics {
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy_pct = 0.0;
  double roc_auc = 0.0;
  std::array<std::array<std::size_t, 2>, 2> confusion{};  // [actual][predicted]
  std::vector<std::string> flags;
};

// Pairwise ROC-AUC: probability that a random positive outranks a random
// negative, ties counted 0.5. Computed via average ranks; identical to the
// brute-force pairwise definition.
inline double roc_auc_score(std::span<const double> scores, std::span<const int> labels) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (labels[t] == 1) {
      rank_sum_pos += rank[t];
      ++n_pos;
    } else {
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) return std::numeric_limits<double>::quiet_NaN();
  const double np = static_cast<double>(n_pos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

inline Metrics compute_metrics(std::span<const int> predictions, std::span<const double> scores,
                               std::span<const int> labels) {
  const std::size_t n = labels.size();
  if (predictions.size() != n || scores.size() != n) throw Error("compute_metrics: length mismatch");
  if (n == 0) throw Error("compute_metrics: empty input");
  Metrics m;
  for (std::size_t i = 0; i < n; ++i)
    ++m.confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(predictions[i])];
  std::size_t correct = m.confusion[0][0] + m.confusion[1][1];
  m.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(n);
  double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
  for (int k = 0; k < 2; ++k) {
    const auto tp = static_cast<double>(m.confusion[k][k]);
    const auto fp = static_cast<double>(m.confusion[1 - k][k]);
    const auto fn = static_cast<double>(m.confusion[k][1 - k]);
    double prec = 0.0, rec = 0.0, f1 = 0.0;
    if (tp + fp > 0.0)
      prec = tp / (tp + fp);
    else
      m.flags.push_back("class" + std::to_string(k) + "_precision_zero_denominator");
    if (tp + fn > 0.0)
      rec = tp / (tp + fn);
    else
      m.flags.push_back("class" + std::to_string(k) + "_recall_zero_denominator");
    if (prec + rec > 0.0) f1 = 2.0 * prec * rec / (prec + rec);
    prec_sum += prec;
    rec_sum += rec;
    f1_sum += f1;
  }
  m.macro_precision = prec_sum / 2.0;
  m.macro_recall = rec_sum / 2.0;
  m.macro_f1 = f1_sum / 2.0;
  const double auc = roc_auc_score(scores, labels);
  if (std::isnan(auc)) {
    m.roc_auc = 0.0;
    m.flags.push_back("roc_auc_single_class");
  } else {
    m.roc_auc = auc;
  }
  return m;
}

struct EvalReportRow {
  std::string engine;
  std::string model;
  Metrics metrics;
  std::size_t degenerate_folds = 0;
  // full-data reference selection, mirroring the per-engine top-k lists
  std::vector<std::string> selected_features;
  std::vector<double> selected_f;
  std::vector<double> selected_p;
};

// Two-decimal text table in the fixed column order.
inline void render_report(std::ostream& out, std::span<const EvalReportRow> rows) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %-20s %9s %7s %9s %9s %8s\n", "engine", "model",
                "Precision", "Recall", "F1-Score", "Accuracy", "ROC-AUC");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-14s %-20s %9.2f %7.2f %9.2f %9.2f %8.2f\n",
                  r.engine.c_str(), r.model.c_str(), r.metrics.macro_precision,
                  r.metrics.macro_recall, r.metrics.macro_f1, r.metrics.accuracy_pct,
                  r.metrics.roc_auc);
    out << line;
  }
}

}  // namespace ssig
