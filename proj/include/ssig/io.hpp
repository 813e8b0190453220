#pragma once

// Readers and writers for the toolkit's on-disk formats. Text formats are
// line-oriented CSV; structured configuration and result files are JSON.
// All writers are deterministic so reruns with identical inputs produce
// identical bytes.

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssig/evaluation.hpp"
#include "ssig/features/matrix.hpp"
#include "ssig/features/zones.hpp"
#include "ssig/pose_ingest.hpp"
#include "ssig/preprocess.hpp"
#include "ssig/selection.hpp"
#include "ssig/signal_metrics.hpp"

namespace ssig {

using json = nlohmann::json;

// JSON has no literal for infinities or NaN; encode them as strings so the
// +inf F-value sentinel survives a round trip.
inline json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

// ---- face stream -----------------------------------------------------------
// session_id,timestamp_ms,happiness,anger,disgust,fear,sadness,surprise,neutral

inline std::map<std::string, std::vector<FaceFrame>> parse_face_stream(std::istream& in) {
  std::map<std::string, std::vector<FaceFrame>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 2 + kFaceChannelCount)
      throw Error("face stream line " + std::to_string(line_no) + ": expected " +
                  std::to_string(2 + kFaceChannelCount) + " fields");
    FaceFrame f;
    const std::string session(strip(fields[0]));
    if (!try_parse_double(strip(fields[1]), f.timestamp_ms))
      throw Error("face stream line " + std::to_string(line_no) + ": bad timestamp");
    for (int i = 0; i < kFaceChannelCount; ++i) {
      double v = 0.0;
      if (!try_parse_double(strip(fields[static_cast<std::size_t>(2 + i)]), v) || v < 0.0 ||
          v > 1.0)
        throw Error("face stream line " + std::to_string(line_no) +
                    ": expression score out of [0,1]");
      f.scores[static_cast<std::size_t>(i)] = v;
    }
    out[session].push_back(f);
  }
  for (auto& [id, frames] : out)
    std::stable_sort(frames.begin(), frames.end(),
                     [](const FaceFrame& a, const FaceFrame& b) { return a.timestamp_ms < b.timestamp_ms; });
  return out;
}

// ---- questionnaire ---------------------------------------------------------
// session_id,item1,item2,item3,item4,item5

inline std::vector<QuestionnaireResponse> parse_questionnaire(std::istream& in) {
  std::vector<QuestionnaireResponse> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 6)
      throw Error("questionnaire line " + std::to_string(line_no) + ": expected 6 fields");
    QuestionnaireResponse r;
    r.session_id = std::string(strip(fields[0]));
    for (int i = 0; i < 5; ++i) {
      long long v = 0;
      if (!try_parse_int(strip(fields[static_cast<std::size_t>(1 + i)]), v))
        throw Error("questionnaire line " + std::to_string(line_no) + ": bad item value");
      r.items[static_cast<std::size_t>(i)] = static_cast<int>(v);
    }
    r.validate();
    out.push_back(std::move(r));
  }
  return out;
}

// ---- phase markers ---------------------------------------------------------
// session_id,main_start_frame,main_end_frame

inline std::map<std::string, PhaseMarkers> parse_markers(std::istream& in) {
  std::map<std::string, PhaseMarkers> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 3)
      throw Error("markers line " + std::to_string(line_no) + ": expected 3 fields");
    long long a = 0, b = 0;
    if (!try_parse_int(strip(fields[1]), a) || !try_parse_int(strip(fields[2]), b))
      throw Error("markers line " + std::to_string(line_no) + ": bad frame index");
    out[std::string(strip(fields[0]))] = PhaseMarkers{a, b};
  }
  return out;
}

// ---- camera calibration ----------------------------------------------------

inline std::map<CameraId, CameraCalibration> parse_calibration(std::istream& in) {
  json j;
  in >> j;
  std::map<CameraId, CameraCalibration> out;
  if (!j.contains("cameras")) throw Error("calibration: missing 'cameras' object");
  for (const auto& [name, spec] : j.at("cameras").items()) {
    const auto id = camera_from_string(name);
    if (!id) throw Error("calibration: unknown camera '" + name + "'");
    CameraCalibration cal;
    cal.camera_id = *id;
    const auto& rot = spec.at("rotation");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cal.rotation[r][c] = rot.at(r).at(c).get<double>();
    if (spec.contains("focal_px")) cal.focal_px = spec.at("focal_px").get<double>();
    validate_rotation(cal);
    out[*id] = cal;
  }
  return out;
}

inline void write_calibration(std::ostream& out,
                              const std::map<CameraId, CameraCalibration>& cals) {
  json cameras = json::object();
  for (const auto& [id, cal] : cals) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r) {
      json row = json::array();
      for (int c = 0; c < 3; ++c) row.push_back(cal.rotation[r][c]);
      rot.push_back(row);
    }
    cameras[to_string(id)] = {{"rotation", rot}, {"focal_px", cal.focal_px}};
  }
  out << json{{"cameras", cameras}}.dump(2) << "\n";
}

// ---- zone configuration ----------------------------------------------------

inline ZoneConfig parse_zone_config(std::istream& in) {
  json j;
  in >> j;
  ZoneConfig cfg;
  if (j.contains("window_s")) cfg.window_s = j.at("window_s").get<double>();
  if (j.contains("segment_count")) cfg.segment_count = j.at("segment_count").get<int>();
  if (j.contains("channels")) {
    for (const auto& [name, spec] : j.at("channels").items()) {
      ChannelZoneConfig ch;
      if (spec.contains("boundaries"))
        for (const auto& b : spec.at("boundaries")) ch.boundaries.push_back(b.get<double>());
      if (spec.contains("threshold")) ch.threshold = spec.at("threshold").get<double>();
      cfg.channels[name] = std::move(ch);
    }
  }
  cfg.validate();
  return cfg;
}

inline void write_zone_config(std::ostream& out, const ZoneConfig& cfg) {
  json channels = json::object();
  for (const auto& [name, ch] : cfg.channels) {
    json spec = {{"boundaries", ch.boundaries}};
    if (ch.threshold) spec["threshold"] = *ch.threshold;
    channels[name] = spec;
  }
  out << json{{"window_s", cfg.window_s},
              {"segment_count", cfg.segment_count},
              {"channels", channels}}
             .dump(2)
      << "\n";
}

// ---- channel set -----------------------------------------------------------
// "# session=<id>" then a header of canonical channel names interleaved with
// "<name>__missing" flag columns, then one row per 30 Hz frame. Missing
// samples are written as nan with flag 1.

inline void write_channel_set(std::ostream& out, const ChannelSet& cs) {
  out << "# session=" << cs.session_id << "\n";
  for (int c = 0; c < kChannelCount; ++c) {
    if (c) out << ',';
    out << kChannelNames[static_cast<std::size_t>(c)] << ','
        << kChannelNames[static_cast<std::size_t>(c)] << "__missing";
  }
  out << "\n";
  const std::size_t n = cs.length();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < kChannelCount; ++c) {
      const SignalChannel& ch = cs.channels[static_cast<std::size_t>(c)];
      if (c) out << ',';
      if (ch.missing[i])
        out << "nan,1";
      else
        out << fmt_double(ch.values[i]) << ",0";
    }
    out << "\n";
  }
}

inline ChannelSet read_channel_set(std::istream& in) {
  ChannelSet cs;
  cs.channels.resize(kChannelCount);
  for (int c = 0; c < kChannelCount; ++c) {
    cs.channels[static_cast<std::size_t>(c)].name = kChannelNames[static_cast<std::size_t>(c)];
    cs.channels[static_cast<std::size_t>(c)].unit = channel_unit(c);
  }
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      const auto eq = sv.find('=');
      if (sv.find("session") != std::string_view::npos && eq != std::string_view::npos)
        cs.session_id = std::string(strip(sv.substr(eq + 1)));
      continue;
    }
    const auto fields = split_fields(sv);
    if (fields.size() != 2 * kChannelCount)
      throw Error("channel file line " + std::to_string(line_no) + ": expected " +
                  std::to_string(2 * kChannelCount) + " columns");
    if (!have_header) {
      if (strip(fields[0]) != kChannelNames[0])
        throw Error("channel file: header does not start with canonical names");
      have_header = true;
      continue;
    }
    for (int c = 0; c < kChannelCount; ++c) {
      SignalChannel& ch = cs.channels[static_cast<std::size_t>(c)];
      double v = 0.0;
      long long flag = 0;
      if (!try_parse_double(strip(fields[static_cast<std::size_t>(2 * c)]), v) ||
          !try_parse_int(strip(fields[static_cast<std::size_t>(2 * c + 1)]), flag))
        throw Error("channel file line " + std::to_string(line_no) + ": bad value");
      if (flag != 0) {
        ch.values.push_back(0.0);
        ch.missing.push_back(1);
      } else {
        ch.values.push_back(v);
        ch.missing.push_back(0);
      }
    }
  }
  if (!have_header) throw Error("channel file: empty file");
  return cs;
}

// ---- selection result ------------------------------------------------------

inline void write_selection(std::ostream& out, const SelectionResult& sel,
                            std::span<const std::string> all_names) {
  json selected = json::array();
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const std::size_t c = sel.selected[i];
    selected.push_back({{"name", all_names.empty() ? std::to_string(c) : all_names[c]},
                        {"column", c},
                        {"f", json_number(sel.f_values[c])},
                        {"p", json_number(sel.p_values[c])},
                        {"mean", sel.means[i]},
                        {"std", sel.stds[i]}});
  }
  json candidates = json::array();
  for (std::size_t c = 0; c < sel.f_values.size(); ++c) {
    if (std::isnan(sel.f_values[c])) continue;
    candidates.push_back({{"name", all_names.empty() ? std::to_string(c) : all_names[c]},
                          {"f", json_number(sel.f_values[c])},
                          {"p", json_number(sel.p_values[c])}});
  }
  out << json{{"selected", selected}, {"candidates", candidates}}.dump(2) << "\n";
}

// ---- trained model ---------------------------------------------------------

inline json model_to_json(const TrainedModel& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["hyperparameters"] = {{"reg", m.params.reg},
                          {"trees", m.params.trees},
                          {"depth", m.params.depth},
                          {"nb_epsilon_rel", m.params.nb_epsilon_rel}};
  json p;
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LogisticModel>) {
          p = {{"weights", model.weights}, {"bias", model.bias}, {"lambda", model.lambda}};
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          p = {{"weights", model.weights}, {"bias", model.bias}, {"lambda", model.lambda}};
        } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
          p = {{"log_prior", model.log_prior},
               {"mean0", model.mean[0]},
               {"mean1", model.mean[1]},
               {"var0", model.var[0]},
               {"var1", model.var[1]}};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          p["n_trees"] = model.n_trees;
          p["max_depth"] = model.max_depth;
          p["seed"] = model.seed;
          json trees = json::array();
          for (const auto& t : model.trees) {
            json nodes = json::array();
            for (const auto& nd : t.nodes)
              nodes.push_back({{"feature", nd.feature},
                               {"threshold", nd.threshold},
                               {"left", nd.left},
                               {"right", nd.right},
                               {"leaf_class", nd.leaf_class}});
            trees.push_back(nodes);
          }
          p["trees"] = trees;
        }
      },
      m.model);
  j["parameters"] = p;
  return j;
}

inline TrainedModel model_from_json(const json& j) {
  TrainedModel m;
  const auto kind = model_from_string(j.at("kind").get<std::string>());
  if (!kind) throw Error("model file: unknown kind");
  m.kind = *kind;
  const auto& h = j.at("hyperparameters");
  m.params.reg = h.at("reg").get<double>();
  m.params.trees = h.at("trees").get<int>();
  m.params.depth = h.at("depth").get<int>();
  m.params.nb_epsilon_rel = h.at("nb_epsilon_rel").get<double>();
  const auto& p = j.at("parameters");
  switch (m.kind) {
    case ModelKind::logistic_regression: {
      LogisticModel lm;
      lm.weights = p.at("weights").get<std::vector<double>>();
      lm.bias = p.at("bias").get<double>();
      lm.lambda = p.at("lambda").get<double>();
      m.model = std::move(lm);
      break;
    }
    case ModelKind::linear_svm: {
      SvmModel sm;
      sm.weights = p.at("weights").get<std::vector<double>>();
      sm.bias = p.at("bias").get<double>();
      sm.lambda = p.at("lambda").get<double>();
      m.model = std::move(sm);
      break;
    }
    case ModelKind::gaussian_nb: {
      GaussianNbModel nb;
      nb.log_prior = p.at("log_prior").get<std::array<double, 2>>();
      nb.mean[0] = p.at("mean0").get<std::vector<double>>();
      nb.mean[1] = p.at("mean1").get<std::vector<double>>();
      nb.var[0] = p.at("var0").get<std::vector<double>>();
      nb.var[1] = p.at("var1").get<std::vector<double>>();
      m.model = std::move(nb);
      break;
    }
    case ModelKind::random_forest: {
      ForestModel fm;
      fm.n_trees = p.at("n_trees").get<int>();
      fm.max_depth = p.at("max_depth").get<int>();
      fm.seed = p.at("seed").get<std::uint64_t>();
      for (const auto& t : p.at("trees")) {
        ForestTree tree;
        for (const auto& nd : t) {
          ForestNode n;
          n.feature = nd.at("feature").get<int>();
          n.threshold = nd.at("threshold").get<double>();
          n.left = nd.at("left").get<int>();
          n.right = nd.at("right").get<int>();
          n.leaf_class = nd.at("leaf_class").get<int>();
          tree.nodes.push_back(n);
        }
        fm.trees.push_back(std::move(tree));
      }
      m.model = std::move(fm);
      break;
    }
  }
  return m;
}

// Full model bundle as persisted by the CLI: model plus the selection and
// standardization it expects its inputs to pass through.
inline void write_model_bundle(std::ostream& out, const TrainedModel& m,
                               const SelectionResult& sel,
                               std::span<const std::string> all_names) {
  json j = model_to_json(m);
  json features = json::array();
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const std::size_t c = sel.selected[i];
    features.push_back({{"name", all_names.empty() ? std::to_string(c) : all_names[c]},
                        {"mean", sel.means[i]},
                        {"std", sel.stds[i]}});
  }
  j["selected_features"] = features;
  out << j.dump(2) << "\n";
}

// ---- evaluation report -----------------------------------------------------

inline json report_to_json(std::span<const EvalReportRow> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json selected = json::array();
    for (std::size_t i = 0; i < r.selected_features.size(); ++i)
      selected.push_back({{"name", r.selected_features[i]},
                          {"f", json_number(r.selected_f[i])},
                          {"p", json_number(r.selected_p[i])}});
    out.push_back({{"engine", r.engine},
                   {"model", r.model},
                   {"precision", r.metrics.macro_precision},
                   {"recall", r.metrics.macro_recall},
                   {"f1", r.metrics.macro_f1},
                   {"accuracy", r.metrics.accuracy_pct},
                   {"roc_auc", r.metrics.roc_auc},
                   {"confusion",
                    {{r.metrics.confusion[0][0], r.metrics.confusion[0][1]},
                     {r.metrics.confusion[1][0], r.metrics.confusion[1][1]}}},
                   {"degenerate_folds", r.degenerate_folds},
                   {"flags", r.metrics.flags},
                   {"selected_features", selected}});
  }
  return json{{"rows", out}};
}

inline std::vector<EvalReportRow> report_from_json(const json& j) {
  std::vector<EvalReportRow> rows;
  for (const auto& e : j.at("rows")) {
    EvalReportRow r;
    r.engine = e.at("engine").get<std::string>();
    r.model = e.at("model").get<std::string>();
    r.metrics.macro_precision = e.at("precision").get<double>();
    r.metrics.macro_recall = e.at("recall").get<double>();
    r.metrics.macro_f1 = e.at("f1").get<double>();
    r.metrics.accuracy_pct = e.at("accuracy").get<double>();
    r.metrics.roc_auc = e.at("roc_auc").get<double>();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        r.metrics.confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            e.at("confusion").at(a).at(b).get<std::size_t>();
    r.degenerate_folds = e.at("degenerate_folds").get<std::size_t>();
    r.metrics.flags = e.at("flags").get<std::vector<std::string>>();
    for (const auto& s : e.at("selected_features")) {
      r.selected_features.push_back(s.at("name").get<std::string>());
      r.selected_f.push_back(number_from_json(s.at("f")));
      r.selected_p.push_back(number_from_json(s.at("p")));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---- small file helpers ----------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace ssig
