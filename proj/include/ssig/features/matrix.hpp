#pragma once

// Feature catalogs and the sessions x features matrix, plus its CSV form.

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/features/canonical22.hpp"
#include "ssig/features/spectral_stat.hpp"
#include "ssig/features/zones.hpp"
#include "ssig/signal_metrics.hpp"

namespace ssig {

enum class Engine { spectral_stat, canonical22, zones };

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::spectral_stat: return "spectral_stat";
    case Engine::canonical22: return "canonical22";
    case Engine::zones: return "zones";
  }
  return "?";
}

inline std::optional<Engine> engine_from_string(std::string_view s) {
  if (s == "spectral_stat") return Engine::spectral_stat;
  if (s == "canonical22") return Engine::canonical22;
  if (s == "zones") return Engine::zones;
  return std::nullopt;
}

struct FeatureCatalog {
  Engine engine = Engine::spectral_stat;
  std::vector<std::string> names;  // fully qualified "<channel>__<feature>"
};

// Catalog over all 23 channels in canonical order; the zones engine needs the
// zone configuration because the per-channel zone count shapes the catalog.
inline FeatureCatalog build_catalog(Engine engine, const ZoneConfig* zone_cfg = nullptr) {
  FeatureCatalog cat;
  cat.engine = engine;
  for (int c = 0; c < kChannelCount; ++c) {
    const std::string channel = kChannelNames[static_cast<std::size_t>(c)];
    std::vector<std::string> per;
    switch (engine) {
      case Engine::spectral_stat: per = spectral_stat_feature_names(); break;
      case Engine::canonical22: per = canonical22_feature_names(); break;
      case Engine::zones: {
        if (!zone_cfg) throw Error("zones engine requires a zone configuration");
        per = zone_feature_names(zone_cfg->for_channel(channel), zone_cfg->segment_count);
        break;
      }
    }
    for (auto& f : per) cat.names.push_back(channel + "__" + f);
  }
  return cat;
}

struct FeatureMatrix {
  Engine engine = Engine::spectral_stat;
  std::vector<std::string> feature_names;
  std::vector<std::string> session_ids;
  DenseMatrix values;
  std::vector<std::uint8_t> flags;  // row-major, aligned with values

  std::size_t rows() const { return session_ids.size(); }
  std::size_t cols() const { return feature_names.size(); }
};

inline FeatureSlice extract_slice(Engine engine, const SignalChannel& ch,
                                  const ZoneConfig* zone_cfg) {
  switch (engine) {
    case Engine::spectral_stat:
      if (ch.all_missing()) {
        FeatureSlice s;
        for (int i = 0; i < kSpectralStatFeatureCount; ++i) s.push_flagged();
        return s;
      }
      return extract_spectral_stat(ch.valid_values());
    case Engine::canonical22:
      if (ch.all_missing()) {
        FeatureSlice s;
        for (int i = 0; i < kCanonical22FeatureCount; ++i) s.push_flagged();
        return s;
      }
      return extract_canonical22(ch.valid_values());
    case Engine::zones:
      if (!zone_cfg) throw Error("zones engine requires a zone configuration");
      return extract_zone_features(ch, zone_cfg->for_channel(ch.name), zone_cfg->window_s,
                                   zone_cfg->segment_count);
  }
  throw Error("unknown engine");
}

// Rows are sessions in the given order; columns follow the engine catalog
// over the 23 channels. Two runs over the same input produce identical bytes.
inline FeatureMatrix build_feature_matrix(std::span<const ChannelSet> sessions, Engine engine,
                                          const ZoneConfig* zone_cfg = nullptr) {
  const FeatureCatalog cat = build_catalog(engine, zone_cfg);
  FeatureMatrix m;
  m.engine = engine;
  m.feature_names = cat.names;
  m.values = DenseMatrix(sessions.size(), cat.names.size());
  m.flags.assign(sessions.size() * cat.names.size(), 0);
  for (std::size_t r = 0; r < sessions.size(); ++r) {
    const ChannelSet& cs = sessions[r];
    if (cs.channels.size() != kChannelCount)
      throw Error("session " + cs.session_id + ": expected 23 channels, got " +
                  std::to_string(cs.channels.size()));
    m.session_ids.push_back(cs.session_id);
    std::size_t col = 0;
    for (int c = 0; c < kChannelCount; ++c) {
      const SignalChannel& ch = cs.channels[static_cast<std::size_t>(c)];
      if (ch.name != kChannelNames[static_cast<std::size_t>(c)])
        throw Error("session " + cs.session_id + ": channel schema mismatch at '" + ch.name + "'");
      const FeatureSlice slice = extract_slice(engine, ch, zone_cfg);
      for (std::size_t i = 0; i < slice.size(); ++i, ++col) {
        m.values.at(r, col) = slice.values[i];
        m.flags[r * m.cols() + col] = slice.flagged[i];
      }
    }
    if (col != m.cols()) throw Error("feature count mismatch for session " + cs.session_id);
  }
  return m;
}

// CSV form: a "# engine=<name>" line, a header row of fully qualified feature
// names, then one row per session. Flagged entries are written as their
// fallback value 0.
inline void write_feature_matrix(std::ostream& out, const FeatureMatrix& m) {
  out << "# engine=" << to_string(m.engine) << "\n";
  out << "session_id";
  for (const auto& n : m.feature_names) out << ',' << n;
  out << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.session_ids[r];
    for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << fmt_double(m.values.at(r, c));
    out << "\n";
  }
}

inline FeatureMatrix read_feature_matrix(std::istream& in) {
  FeatureMatrix m;
  std::string line;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      const auto eq = sv.find('=');
      if (sv.find("engine") != std::string_view::npos && eq != std::string_view::npos) {
        const auto e = engine_from_string(strip(sv.substr(eq + 1)));
        if (!e) throw Error("feature matrix: unknown engine tag");
        m.engine = *e;
      }
      continue;
    }
    const auto fields = split_fields(sv);
    if (!have_header) {
      if (fields.empty() || strip(fields[0]) != "session_id")
        throw Error("feature matrix: missing header row");
      for (std::size_t i = 1; i < fields.size(); ++i)
        m.feature_names.emplace_back(strip(fields[i]));
      have_header = true;
      continue;
    }
    if (fields.size() != m.feature_names.size() + 1)
      throw Error("feature matrix line " + std::to_string(line_no) + ": expected " +
                  std::to_string(m.feature_names.size() + 1) + " fields");
    m.session_ids.emplace_back(strip(fields[0]));
    std::vector<double> row(m.feature_names.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (!try_parse_double(strip(fields[i]), row[i - 1]))
        throw Error("feature matrix line " + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error("feature matrix: empty file");
  m.values = DenseMatrix(rows.size(), m.feature_names.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.feature_names.size(); ++c) m.values.at(r, c) = rows[r][c];
  m.flags.assign(m.rows() * m.cols(), 0);
  return m;
}

}  // namespace ssig
