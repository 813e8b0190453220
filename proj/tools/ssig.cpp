// Command-line front end for the social-signal satisfaction toolkit.
//
// Subcommands: synth | extract | features | select | evaluate | report.
// Every stage persists plain-text intermediates plus a manifest recording the
// configuration hash and seed, and reruns with identical inputs and seeds
// produce byte-identical outputs. Exit codes: 0 success, 1 partial (some
// sessions failed), 2 fatal.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ssig/evaluation.hpp"
#include "ssig/io.hpp"
#include "ssig/pipeline.hpp"
#include "ssig/synth.hpp"
#include "ssig/version.hpp"

namespace fs = std::filesystem;
using namespace ssig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

// The output directory can be forced through the environment; nothing else
// is overridable this way.
std::string resolve_out_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("SSIG_OUT_DIR"); env && *env) return env;
  return flag_value;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_repr, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_repr)));
  const json manifest = {{"tool", "ssig"},        {"version", kVersion}, {"command", command},
                         {"config_hash", hash},   {"seed", seed},        {"inputs", inputs},
                         {"outputs", outputs}};
  write_file((out_dir / ("manifest_" + command + ".json")).string(), manifest.dump(2) + "\n");
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

// ---- synth ------------------------------------------------------------------

int cmd_synth(const SynthConfig& cfg, const std::string& out_flag, int workers) {
  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);
  const SynthPlan plan = make_synth_plan(cfg);
  std::vector<SessionArtifacts> artifacts(static_cast<std::size_t>(cfg.sessions));
  parallel_for(artifacts.size(), workers,
               [&](std::size_t i) { artifacts[i] = generate_session(cfg, plan, static_cast<int>(i)); });
  std::string landmarks, faces, questionnaire, markers;
  for (const auto& art : artifacts) {  // fixed session order regardless of workers
    landmarks += art.landmark_lines;
    faces += art.face_lines;
    questionnaire += art.questionnaire_line;
    markers += art.marker_line;
  }
  write_file((out_dir / "landmarks.csv").string(), landmarks);
  write_file((out_dir / "faces.csv").string(), faces);
  write_file((out_dir / "questionnaire.csv").string(), questionnaire);
  write_file((out_dir / "markers.csv").string(), markers);
  std::ostringstream cal;
  write_calibration(cal, synth_calibration());
  write_file((out_dir / "calibration.json").string(), cal.str());

  std::ostringstream cfg_repr;
  cfg_repr << cfg.sessions << '|' << cfg.low_fraction << '|' << cfg.duration_mean_s << '|'
           << cfg.duration_sd_s << '|' << cfg.duration_min_s << '|' << cfg.duration_max_s << '|'
           << cfg.separability << '|' << cfg.seed;
  write_manifest(out_dir, "synth", cfg_repr.str(), cfg.seed, {},
                 {"landmarks.csv", "faces.csv", "questionnaire.csv", "markers.csv",
                  "calibration.json"});
  std::cout << "synth: wrote " << cfg.sessions << " sessions to " << out_dir.string() << "\n";
  return kExitOk;
}

// ---- extract ----------------------------------------------------------------

struct ExtractArgs {
  std::string landmarks;
  std::string faces;
  std::string calibration;
  std::string markers;
  std::string out;
  int smooth_window = 5;
  double v_min = 0.5;
  double d_max = 0.15;
  int workers = 1;
};

int cmd_extract(const ExtractArgs& args) {
  const fs::path out_dir = resolve_out_dir(args.out);
  fs::create_directories(out_dir / "channels");

  std::ifstream cal_in(args.calibration);
  if (!cal_in) {
    std::cerr << "extract: cannot open calibration " << args.calibration << "\n";
    return kExitFatal;
  }
  const auto calibration = parse_calibration(cal_in);

  std::ifstream lm_in(args.landmarks, std::ios::binary);
  if (!lm_in) {
    std::cerr << "extract: cannot open landmarks " << args.landmarks << "\n";
    return kExitFatal;
  }
  const auto sessions = group_by_session(parse_landmark_stream(lm_in));

  std::map<std::string, std::vector<FaceFrame>> faces;
  if (!args.faces.empty()) {
    std::ifstream fs_in(args.faces);
    if (!fs_in) {
      std::cerr << "extract: cannot open faces " << args.faces << "\n";
      return kExitFatal;
    }
    faces = parse_face_stream(fs_in);
  }
  std::map<std::string, PhaseMarkers> markers;
  if (!args.markers.empty()) {
    std::ifstream mk_in(args.markers);
    if (!mk_in) {
      std::cerr << "extract: cannot open markers " << args.markers << "\n";
      return kExitFatal;
    }
    markers = parse_markers(mk_in);
  }

  PipelineOptions opt;
  opt.smooth_window = args.smooth_window;
  opt.fuse.v_min = args.v_min;
  opt.fuse.d_max = args.d_max;

  std::vector<std::string> errors(sessions.size());
  std::vector<std::string> outputs(sessions.size());
  parallel_for(sessions.size(), args.workers, [&](std::size_t i) {
    const auto& session = sessions[i];
    try {
      const auto face_it = faces.find(session.session_id);
      const std::vector<FaceFrame> empty;
      const auto marker_it = markers.find(session.session_id);
      const ChannelSet cs =
          process_session(session, calibration, face_it == faces.end() ? empty : face_it->second,
                          marker_it == markers.end() ? nullptr : &marker_it->second, opt);
      std::ostringstream buf;
      write_channel_set(buf, cs);
      outputs[i] = buf.str();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::size_t failed = 0;
  std::string error_log;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      error_log += sessions[i].session_id + ": " + errors[i] + "\n";
      continue;
    }
    write_file((out_dir / "channels" / (sessions[i].session_id + ".csv")).string(), outputs[i]);
  }
  if (!error_log.empty()) write_file((out_dir / "errors.log").string(), error_log);

  write_manifest(out_dir, "extract",
                 args.landmarks + "|" + args.faces + "|" + args.calibration + "|" + args.markers +
                     "|" + std::to_string(args.smooth_window) + "|" + fmt_double(args.v_min) +
                     "|" + fmt_double(args.d_max),
                 0, {args.landmarks, args.faces, args.calibration, args.markers}, {"channels/"});
  std::cout << "extract: " << sessions.size() - failed << "/" << sessions.size()
            << " sessions written to " << (out_dir / "channels").string() << "\n";
  if (failed == sessions.size() && !sessions.empty()) return kExitFatal;
  return failed ? kExitPartial : kExitOk;
}

// ---- shared loading ----------------------------------------------------------

std::vector<ChannelSet> load_channel_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());  // session order fixed by id sort
  std::vector<ChannelSet> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    out.push_back(read_channel_set(in));
  }
  return out;
}

std::vector<int> labels_for_matrix(const FeatureMatrix& m, const std::string& questionnaire_path,
                                   std::vector<double>* scores_out = nullptr) {
  std::ifstream q_in(questionnaire_path);
  if (!q_in) throw Error("cannot open questionnaire " + questionnaire_path);
  const auto responses = parse_questionnaire(q_in);
  std::map<std::string, double> score_by_id;
  for (const auto& r : responses) score_by_id[r.session_id] = average_items(r);
  std::vector<double> scores;
  for (const auto& id : m.session_ids) {
    const auto it = score_by_id.find(id);
    if (it == score_by_id.end()) throw Error("no questionnaire entry for session " + id);
    scores.push_back(it->second);
  }
  const auto bin = binarize_labels(scores);
  if (scores_out) *scores_out = scores;
  return bin.classes;
}

// ---- features ----------------------------------------------------------------

int cmd_features(const std::string& channels_dir, const std::string& engine_name,
                 const std::string& zones_config_path, const std::string& out_flag) {
  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);
  const auto engine = engine_from_string(engine_name);
  if (!engine) {
    std::cerr << "features: unknown engine '" << engine_name << "'\n";
    return kExitFatal;
  }
  auto sessions = load_channel_dir(channels_dir);
  std::sort(sessions.begin(), sessions.end(),
            [](const ChannelSet& a, const ChannelSet& b) { return a.session_id < b.session_id; });

  ZoneConfig zone_cfg;
  if (*engine == Engine::zones) {
    if (!zones_config_path.empty()) {
      std::ifstream in(zones_config_path);
      if (!in) {
        std::cerr << "features: cannot open zone config " << zones_config_path << "\n";
        return kExitFatal;
      }
      zone_cfg = parse_zone_config(in);
    } else {
      zone_cfg = default_zone_config(sessions);
    }
    std::ostringstream buf;
    write_zone_config(buf, zone_cfg);
    write_file((out_dir / "zones_resolved.json").string(), buf.str());
  }

  const auto matrix =
      build_feature_matrix(sessions, *engine, *engine == Engine::zones ? &zone_cfg : nullptr);
  std::ostringstream buf;
  write_feature_matrix(buf, matrix);
  const std::string out_name = "features_" + std::string(to_string(*engine)) + ".csv";
  write_file((out_dir / out_name).string(), buf.str());
  write_manifest(out_dir, "features", channels_dir + "|" + engine_name + "|" + zones_config_path,
                 0, {channels_dir, zones_config_path}, {out_name});
  std::cout << "features: " << matrix.rows() << " sessions x " << matrix.cols() << " features ("
            << to_string(*engine) << ") -> " << (out_dir / out_name).string() << "\n";
  return kExitOk;
}

// ---- select -------------------------------------------------------------------

int cmd_select(const std::string& matrix_path, const std::string& questionnaire_path, int k,
               const std::string& out_flag) {
  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);
  std::ifstream m_in(matrix_path);
  if (!m_in) {
    std::cerr << "select: cannot open matrix " << matrix_path << "\n";
    return kExitFatal;
  }
  const auto matrix = read_feature_matrix(m_in);
  const auto labels = labels_for_matrix(matrix, questionnaire_path);
  const auto sel =
      select_k_best(matrix.values, labels, static_cast<std::size_t>(k), matrix.feature_names);
  std::ostringstream buf;
  write_selection(buf, sel, matrix.feature_names);
  const std::string out_name = "selection_" + std::string(to_string(matrix.engine)) + ".json";
  write_file((out_dir / out_name).string(), buf.str());
  std::cout << "selected " << k << " of " << matrix.cols() << " features ("
            << to_string(matrix.engine) << "):\n";
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const auto c = sel.selected[i];
    std::cout << "  " << matrix.feature_names[c] << "  F=" << fmt_fixed(sel.f_values[c], 3)
              << "  p=" << fmt_double(sel.p_values[c]) << "\n";
  }
  write_manifest(out_dir, "select", matrix_path + "|" + questionnaire_path + "|" + std::to_string(k),
                 0, {matrix_path, questionnaire_path}, {out_name});
  return kExitOk;
}

// ---- evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> matrices;
  std::string questionnaire;
  int k = 10;
  std::string models = "rf,svm,logreg,nb";
  std::uint64_t seed = 1;
  bool selection_outside = false;
  bool save_models = false;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const fs::path out_dir = resolve_out_dir(args.out);
  fs::create_directories(out_dir);

  std::vector<ModelKind> kinds;
  for (const auto& name : split_fields(args.models)) {
    const auto kind = model_from_string(strip(name));
    if (!kind) {
      std::cerr << "evaluate: unknown model '" << std::string(name) << "'\n";
      return kExitFatal;
    }
    kinds.push_back(*kind);
  }
  if (args.selection_outside)
    std::cerr << "evaluate: warning: feature selection outside the CV loop leaks the held-out "
                 "row into selection; use for comparison only\n";

  std::vector<EvalReportRow> rows;
  for (const auto& path : args.matrices) {
    std::ifstream m_in(path);
    if (!m_in) {
      std::cerr << "evaluate: cannot open matrix " << path << "\n";
      return kExitFatal;
    }
    auto matrix = read_feature_matrix(m_in);
    // fix the row order by session id: the forest bootstrap contract depends on it
    std::vector<std::size_t> order(matrix.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return matrix.session_ids[a] < matrix.session_ids[b];
    });
    FeatureMatrix sorted;
    sorted.engine = matrix.engine;
    sorted.feature_names = matrix.feature_names;
    sorted.values = DenseMatrix(matrix.rows(), matrix.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted.session_ids.push_back(matrix.session_ids[order[i]]);
      for (std::size_t c = 0; c < matrix.cols(); ++c)
        sorted.values.at(i, c) = matrix.values.at(order[i], c);
    }

    std::vector<double> scores_raw;
    const auto labels = labels_for_matrix(sorted, args.questionnaire, &scores_raw);

    // full-data reference selection for the report's feature list
    const auto full_sel =
        select_k_best(sorted.values, labels, static_cast<std::size_t>(args.k), sorted.feature_names);

    for (const ModelKind kind : kinds) {
      ModelSpec spec;
      spec.kind = kind;
      spec.seed = derive_seed(args.seed, static_cast<std::uint64_t>(kind) + 1);
      LoocvOptions opt;
      opt.k = static_cast<std::size_t>(args.k);
      opt.selection_inside = !args.selection_outside;
      const auto res = loocv(sorted.values, labels, spec, opt, sorted.feature_names);
      EvalReportRow row;
      row.engine = to_string(sorted.engine);
      row.model = to_string(kind);
      row.metrics = compute_metrics(res.predictions, res.scores, labels);
      row.degenerate_folds = res.degenerate_count;
      for (std::size_t i = 0; i < full_sel.selected.size(); ++i) {
        const auto c = full_sel.selected[i];
        row.selected_features.push_back(sorted.feature_names[c]);
        row.selected_f.push_back(full_sel.f_values[c]);
        row.selected_p.push_back(full_sel.p_values[c]);
      }
      rows.push_back(std::move(row));

      if (args.save_models) {
        fs::create_directories(out_dir / "models");
        const auto projected = project_standardized(sorted.values, full_sel);
        const auto hp = grid_search(spec, projected, labels);
        const auto model = train(spec, hp, projected, labels);
        std::ostringstream buf;
        write_model_bundle(buf, model, full_sel, sorted.feature_names);
        write_file((out_dir / "models" /
                    (std::string(to_string(sorted.engine)) + "_" + to_string(kind) + ".json"))
                       .string(),
                   buf.str());
      }
    }
  }

  std::ostringstream table;
  render_report(table, rows);
  write_file((out_dir / "report.txt").string(), table.str());
  write_file((out_dir / "report.json").string(), report_to_json(rows).dump(2) + "\n");
  std::cout << table.str();

  std::string config_repr = args.questionnaire + "|" + std::to_string(args.k) + "|" + args.models +
                            "|" + std::to_string(args.seed) + "|" +
                            (args.selection_outside ? "outside" : "inside");
  for (const auto& m : args.matrices) config_repr += "|" + m;
  write_manifest(out_dir, "evaluate", config_repr, args.seed, args.matrices,
                 {"report.txt", "report.json"});
  return kExitOk;
}

// ---- report -------------------------------------------------------------------

int cmd_report(const std::string& json_path, const std::string& out_path) {
  const auto rows = report_from_json(json::parse(read_file(json_path)));
  std::ostringstream table;
  render_report(table, rows);
  if (out_path.empty())
    std::cout << table.str();
  else
    write_file(out_path, table.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"social-signal user-satisfaction classification toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic interaction corpus");
  SynthConfig synth_cfg;
  std::string synth_out = "out";
  int synth_workers = 1;
  synth->add_option("--sessions", synth_cfg.sessions, "number of sessions");
  synth->add_option("--low-fraction", synth_cfg.low_fraction, "fraction of low-satisfaction sessions");
  synth->add_option("--delta", synth_cfg.separability, "class separability in [0,1]");
  synth->add_option("--seed", synth_cfg.seed, "corpus seed");
  synth->add_option("--duration-mean", synth_cfg.duration_mean_s, "mean duration (s)");
  synth->add_option("--duration-sd", synth_cfg.duration_sd_s, "duration std dev (s)");
  synth->add_option("--duration-min", synth_cfg.duration_min_s, "minimum duration (s)");
  synth->add_option("--duration-max", synth_cfg.duration_max_s, "maximum duration (s)");
  synth->add_option("--workers", synth_workers, "parallel session workers");
  synth->add_option("--out", synth_out, "output directory");

  // extract
  auto* extract = app.add_subcommand("extract", "turn landmark/face streams into channel files");
  ExtractArgs ex;
  ex.out = "out";
  extract->add_option("--landmarks", ex.landmarks, "landmark stream file")->required();
  extract->add_option("--faces", ex.faces, "face stream file");
  extract->add_option("--calibration", ex.calibration, "camera calibration JSON")->required();
  extract->add_option("--markers", ex.markers, "main-phase markers file");
  extract->add_option("--smooth-window", ex.smooth_window, "odd moving-average window");
  extract->add_option("--v-min", ex.v_min, "fusion visibility gate");
  extract->add_option("--d-max", ex.d_max, "fusion distance gate (normalized units)");
  extract->add_option("--workers", ex.workers, "parallel session workers");
  extract->add_option("--out", ex.out, "output directory");

  // features
  auto* features = app.add_subcommand("features", "compute a feature matrix from channel files");
  std::string feat_channels, feat_engine = "canonical22", feat_zones, feat_out = "out";
  features->add_option("--channels", feat_channels, "channels directory")->required();
  features->add_option("--engine", feat_engine, "spectral_stat | canonical22 | zones");
  features->add_option("--zones-config", feat_zones, "zone configuration JSON (zones engine)");
  features->add_option("--out", feat_out, "output directory");

  // select
  auto* select = app.add_subcommand("select", "rank features by ANOVA F on the full dataset");
  std::string sel_matrix, sel_questionnaire, sel_out = "out";
  int sel_k = 10;
  select->add_option("--matrix", sel_matrix, "feature matrix CSV")->required();
  select->add_option("--questionnaire", sel_questionnaire, "questionnaire CSV")->required();
  select->add_option("-k,--k", sel_k, "number of features to keep");
  select->add_option("--out", sel_out, "output directory");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run leave-one-out evaluation");
  EvaluateArgs ev;
  ev.out = "out";
  evaluate->add_option("--matrix", ev.matrices, "feature matrix CSV (repeatable)")->required();
  evaluate->add_option("--questionnaire", ev.questionnaire, "questionnaire CSV")->required();
  evaluate->add_option("-k,--k", ev.k, "features per fold");
  evaluate->add_option("--models", ev.models, "comma list: rf,svm,logreg,nb");
  evaluate->add_option("--seed", ev.seed, "evaluation seed");
  evaluate->add_flag("--selection-outside", ev.selection_outside,
                     "fit selection once outside the CV loop (leaks; comparison only)");
  evaluate->add_flag("--save-models", ev.save_models, "persist full-data models per engine/model");
  evaluate->add_option("--out", ev.out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "render a stored report JSON as a table");
  std::string rep_json, rep_out;
  report->add_option("--json", rep_json, "report JSON file")->required();
  report->add_option("--out", rep_out, "write the table here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_cfg, synth_out, synth_workers);
    if (extract->parsed()) return cmd_extract(ex);
    if (features->parsed()) return cmd_features(feat_channels, feat_engine, feat_zones, feat_out);
    if (select->parsed()) return cmd_select(sel_matrix, sel_questionnaire, sel_k, sel_out);
    if (evaluate->parsed()) return cmd_evaluate(ev);
    if (report->parsed()) return cmd_report(rep_json, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
