#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wsr {

/// Value plus per-term breakdown of a theorem bound. `value` is the sum
/// of the terms, or their max when `aggregate` is sup.
struct BoundReport {
  enum class Aggregate { sum, sup };

  double value = 0;
  Aggregate aggregate = Aggregate::sum;
  std::vector<std::pair<std::string, double>> terms;
  std::map<std::string, std::string> params;

  double recombine() const {
    double v = 0;
    bool first = true;
    for (const auto& [name, t] : terms) {
      if (aggregate == Aggregate::sum)
        v += t;
      else
        v = first ? t : (t > v ? t : v);
      first = false;
    }
    return v;
  }
};

}  // namespace wsr
