#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ssig {

// One channel's worth of engine output. Entries flagged as not computable
// carry the fallback value 0 so downstream selection never sees non-finite
// numbers.
struct FeatureSlice {
  std::vector<double> values;
  std::vector<std::uint8_t> flagged;

  void push(double v) {
    values.push_back(v);
    flagged.push_back(0);
  }
  void push_flagged() {
    values.push_back(0.0);
    flagged.push_back(1);
  }
  // Non-finite results collapse to the flagged fallback.
  void push_checked(double v) {
    if (std::isfinite(v))
      push(v);
    else
      push_flagged();
  }
  std::size_t size() const { return values.size(); }
};

}  // namespace ssig
