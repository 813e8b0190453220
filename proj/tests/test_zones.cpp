#include <doctest.h>

#include "oracles.hpp"
#include "ssig/features/matrix.hpp"
#include "ssig/features/zones.hpp"

using namespace ssig;

namespace {

SignalChannel make_channel(std::vector<double> values) {
  SignalChannel ch;
  ch.name = "head_heading";
  ch.unit = Unit::degrees;
  ch.missing.assign(values.size(), 0);
  ch.values = std::move(values);
  return ch;
}

ChannelZoneConfig bands() {
  ChannelZoneConfig cfg;
  cfg.boundaries = {-30.0, -10.0, 10.0, 30.0};  // 5 zones
  return cfg;
}

int zone_feature(const ChannelZoneConfig& cfg, const std::string& name) {
  const auto names = zone_feature_names(cfg);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_CASE("zone_of uses open outer intervals and the higher-zone tie rule") {
  const auto cfg = bands();
  CHECK(zone_of(-100.0, cfg) == 1);
  CHECK(zone_of(-20.0, cfg) == 2);
  CHECK(zone_of(0.0, cfg) == 3);
  CHECK(zone_of(20.0, cfg) == 4);
  CHECK(zone_of(100.0, cfg) == 5);
  // a value exactly on a boundary belongs to the higher zone
  CHECK(zone_of(10.0, cfg) == 4);
  CHECK(zone_of(-30.0, cfg) == 2);
}

TEST_CASE("assign_zones maps a constant channel into its zone everywhere") {
  const auto zones = assign_zones(make_channel(std::vector<double>(90, 0.0)), bands());
  REQUIRE(zones.size() == 6);
  for (const int z : zones) CHECK(z == 3);
}

TEST_CASE("a 45-frame channel yields 3 windows") {
  CHECK(assign_zones(make_channel(std::vector<double>(45, 0.0)), bands()).size() == 3);
  // a 4-frame tail is merged into the previous window
  CHECK(assign_zones(make_channel(std::vector<double>(49, 0.0)), bands()).size() == 3);
  // a 5-frame tail is kept
  CHECK(assign_zones(make_channel(std::vector<double>(50, 0.0)), bands()).size() == 4);
}

TEST_CASE("assign_zones rejects an empty channel") {
  CHECK_THROWS_AS(assign_zones(make_channel({}), bands()), Error);
}

TEST_CASE("zone features of a constant channel in zone 2") {
  const auto cfg = bands();
  const auto slice = extract_zone_features(make_channel(std::vector<double>(150, -20.0)), cfg);
  REQUIRE(slice.size() == zone_feature_names(cfg).size());
  CHECK(slice.values[zone_feature(cfg, "modal_zone")] == 2.0);
  CHECK(slice.values[zone_feature(cfg, "zone_transitions")] == 0.0);
  CHECK(slice.values[zone_feature(cfg, "longest_zone_run")] == 10.0);  // 150 frames = 10 windows
  CHECK(slice.values[zone_feature(cfg, "zone2_fraction")] == 1.0);
  CHECK(slice.values[zone_feature(cfg, "zone3_fraction")] == 0.0);
  CHECK(slice.values[zone_feature(cfg, "value_mean")] == doctest::Approx(-20.0));
  CHECK(slice.values[zone_feature(cfg, "value_std")] == doctest::Approx(0.0));
}

TEST_CASE("alternating windows count transitions and unit runs") {
  std::vector<double> values;
  for (int w = 0; w < 4; ++w)
    for (int i = 0; i < 15; ++i) values.push_back(w % 2 == 0 ? -40.0 : -20.0);  // zones 1,2,1,2
  const auto cfg = bands();
  const auto zones = assign_zones(make_channel(values), cfg);
  REQUIRE(zones == std::vector<int>{1, 2, 1, 2});
  const auto slice = extract_zone_features(make_channel(values), cfg);
  CHECK(slice.values[zone_feature(cfg, "zone_transitions")] == 3.0);
  CHECK(slice.values[zone_feature(cfg, "longest_zone_run")] == 1.0);
  CHECK(slice.values[zone_feature(cfg, "shortest_zone_run")] == 1.0);
}

TEST_CASE("zone occupancy fractions always sum to one") {
  Rng rng(3);
  const auto cfg = bands();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(30 + uniform_below(rng, 600));
    for (auto& v : values) v = uniform_in(rng, -60.0, 60.0);
    const auto slice = extract_zone_features(make_channel(values), cfg);
    double sum = 0.0;
    for (int z = 1; z <= cfg.zone_count(); ++z)
      sum += slice.values[zone_feature(cfg, "zone" + std::to_string(z) + "_fraction")];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transition and run features match the exhaustive oracle") {
  Rng rng(4);
  const auto cfg = bands();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(30 + uniform_below(rng, 900));
    for (auto& v : values) v = uniform_in(rng, -60.0, 60.0);
    const auto ch = make_channel(values);
    const auto zones = assign_zones(ch, cfg);
    const auto stats = oracle::zone_runs_exhaustive(zones);
    const auto slice = extract_zone_features(ch, cfg);
    CHECK(slice.values[zone_feature(cfg, "zone_transitions")] == stats.transitions);
    CHECK(slice.values[zone_feature(cfg, "longest_zone_run")] == stats.longest_run);
    CHECK(slice.values[zone_feature(cfg, "shortest_zone_run")] == stats.shortest_run);
    CHECK(slice.values[zone_feature(cfg, "zone_transitions")] <=
          static_cast<double>(zones.size()) - 1.0);
  }
}

TEST_CASE("zone features ignore value jitter that preserves window membership") {
  std::vector<double> values;
  for (int w = 0; w < 8; ++w)
    for (int i = 0; i < 15; ++i) values.push_back(w % 2 == 0 ? -20.0 : 20.0);
  auto jittered = values;
  for (auto& v : jittered) v += 0.5;  // stays well inside the zones
  const auto cfg = bands();
  const auto a = extract_zone_features(make_channel(values), cfg);
  const auto b = extract_zone_features(make_channel(jittered), cfg);
  const auto names = zone_feature_names(cfg);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].rfind("value_", 0) == 0) continue;  // raw statistics do move
    CHECK(a.values[i] == b.values[i]);
  }
}

TEST_CASE("value statistics are independent of the zone configuration") {
  std::vector<double> values;
  Rng rng(8);
  for (int i = 0; i < 200; ++i) values.push_back(uniform_in(rng, -50.0, 50.0));
  ChannelZoneConfig other;
  other.boundaries = {-5.0, 5.0};
  const auto a = extract_zone_features(make_channel(values), bands());
  const auto b = extract_zone_features(make_channel(values), other);
  for (const char* f : {"value_mean", "value_min", "value_max", "value_std"}) {
    CHECK(a.values[zone_feature(bands(), f)] == b.values[zone_feature(other, f)]);
  }
}

TEST_CASE("per-segment frequencies localize a level shift") {
  // first half in zone 1, second half in zone 5
  std::vector<double> values;
  for (int i = 0; i < 300; ++i) values.push_back(i < 150 ? -50.0 : 50.0);
  const auto cfg = bands();
  const auto slice = extract_zone_features(make_channel(values), cfg);
  CHECK(slice.values[zone_feature(cfg, "win1_zone1_freq")] == 1.0);
  CHECK(slice.values[zone_feature(cfg, "win5_zone5_freq")] == 1.0);
  CHECK(slice.values[zone_feature(cfg, "win1_zone5_freq")] == 0.0);
}

TEST_CASE("pre-binarization threshold turns a probability channel into {0,1}") {
  ChannelZoneConfig cfg;
  cfg.boundaries = {0.5};
  cfg.threshold = 0.6;
  std::vector<double> values(60, 0.9);
  for (int i = 0; i < 30; ++i) values[i] = 0.2;
  const auto slice = extract_zone_features(make_channel(values), cfg);
  CHECK(slice.values[zone_feature(cfg, "value_min")] == 0.0);
  CHECK(slice.values[zone_feature(cfg, "value_max")] == 1.0);
  CHECK(slice.values[zone_feature(cfg, "zone_transitions")] == 1.0);
}

TEST_CASE("default_zone_config covers all 23 channels with at most 10 zones") {
  const auto cfg = default_zone_config({});
  CHECK(cfg.channels.size() == kChannelCount);
  for (int i = 0; i < kChannelCount; ++i) {
    const auto& ch = cfg.for_channel(kChannelNames[i]);
    CHECK(ch.zone_count() >= 1);
    CHECK(ch.zone_count() <= 10);
  }
  CHECK(cfg.for_channel("head_heading").boundaries ==
        std::vector<double>{-30.0, -10.0, 10.0, 30.0});
  cfg.validate();
}
