#include <doctest.h>

#include <sstream>

#include "ssig/features/matrix.hpp"

using namespace ssig;

namespace {

ChannelSet synthetic_set(const std::string& id, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ChannelSet cs;
  cs.session_id = id;
  cs.channels.resize(kChannelCount);
  for (int c = 0; c < kChannelCount; ++c) {
    cs.channels[c].name = kChannelNames[c];
    cs.channels[c].unit = channel_unit(c);
    for (std::size_t i = 0; i < n; ++i)
      cs.channels[c].push(std::sin(0.05 * static_cast<double>(i) * (c + 1)) + 0.2 * normal01(rng));
  }
  return cs;
}

}  // namespace

TEST_CASE("canonical22 over 23 channels yields exactly 506 features") {
  const auto cs = synthetic_set("s001", 300, 1);
  const auto m = build_feature_matrix(std::vector<ChannelSet>{cs}, Engine::canonical22);
  CHECK(m.cols() == 506);
  CHECK(m.rows() == 1);
}

TEST_CASE("spectral_stat over 23 channels yields 23 x 78 = 1794 features") {
  const auto cs = synthetic_set("s001", 300, 2);
  const auto m = build_feature_matrix(std::vector<ChannelSet>{cs}, Engine::spectral_stat);
  CHECK(m.cols() == 1794);
}

TEST_CASE("zones catalog size follows 8 + 6 Z per channel") {
  const std::vector<ChannelSet> corpus = {synthetic_set("s001", 400, 3),
                                          synthetic_set("s002", 350, 4)};
  const auto cfg = default_zone_config(corpus);
  std::size_t expected = 0;
  for (int c = 0; c < kChannelCount; ++c)
    expected += 8 + 6 * static_cast<std::size_t>(cfg.for_channel(kChannelNames[c]).zone_count());
  const auto m = build_feature_matrix(corpus, Engine::zones, &cfg);
  CHECK(m.cols() == expected);
  CHECK(m.rows() == 2);
}

TEST_CASE("an empty session list still carries the full header") {
  const auto m = build_feature_matrix(std::vector<ChannelSet>{}, Engine::canonical22);
  CHECK(m.rows() == 0);
  CHECK(m.cols() == 506);
  std::ostringstream out;
  write_feature_matrix(out, m);
  std::istringstream in(out.str());
  const auto back = read_feature_matrix(in);
  CHECK(back.feature_names == m.feature_names);
  CHECK(back.rows() == 0);
}

TEST_CASE("feature names are globally unique and deterministic") {
  const auto cat1 = build_catalog(Engine::spectral_stat);
  const auto cat2 = build_catalog(Engine::spectral_stat);
  CHECK(cat1.names == cat2.names);
  auto sorted = cat1.names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(cat1.names.front().rfind("head_heading__", 0) == 0);
}

TEST_CASE("two builds over the same input are bitwise identical") {
  const std::vector<ChannelSet> corpus = {synthetic_set("s001", 256, 9),
                                          synthetic_set("s002", 312, 10)};
  const auto a = build_feature_matrix(corpus, Engine::canonical22);
  const auto b = build_feature_matrix(corpus, Engine::canonical22);
  CHECK(a.values.a == b.values.a);
  std::ostringstream sa, sb;
  write_feature_matrix(sa, a);
  write_feature_matrix(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("matrix CSV round-trips values exactly") {
  const std::vector<ChannelSet> corpus = {synthetic_set("s001", 200, 11)};
  const auto m = build_feature_matrix(corpus, Engine::spectral_stat);
  std::ostringstream out;
  write_feature_matrix(out, m);
  std::istringstream in(out.str());
  const auto back = read_feature_matrix(in);
  CHECK(back.engine == m.engine);
  CHECK(back.session_ids == m.session_ids);
  REQUIRE(back.cols() == m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) CHECK(back.values.at(0, c) == m.values.at(0, c));
}

TEST_CASE("mismatched channel schemas are rejected") {
  auto cs = synthetic_set("s001", 100, 12);
  cs.channels[3].name = "bogus";
  CHECK_THROWS_AS(build_feature_matrix(std::vector<ChannelSet>{cs}, Engine::canonical22), Error);
}

TEST_CASE("flagged entries surface as the fallback value 0") {
  auto cs = synthetic_set("s001", 100, 13);
  auto& ch = cs.channels[0];
  for (std::size_t i = 0; i < ch.values.size(); ++i) ch.values[i] = 7.7;  // constant channel
  const auto m = build_feature_matrix(std::vector<ChannelSet>{cs}, Engine::canonical22);
  for (std::size_t c = 0; c < 22; ++c) {
    CHECK(m.values.at(0, c) == 0.0);
    CHECK(m.flags[c] == 1);
  }
}
