#pragma once

// Position histograms. Support positions are strictly ascending and carry
// one probability each; the total mass equals whatever the originating
// state still holds (1 before any absorption).

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qwalk/tolerances.hpp"

namespace qwalk {

struct Distribution {
  std::vector<int> support;
  std::vector<double> probabilities;

  double mass() const {
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  }

  double probability_at(int position) const {
    auto it = std::lower_bound(support.begin(), support.end(), position);
    if (it == support.end() || *it != position) return 0.0;
    return probabilities[static_cast<std::size_t>(it - support.begin())];
  }

  bool empty() const { return support.empty(); }
};

// Rescales to unit mass; rejects distributions with no mass to condition on.
inline Distribution normalized(const Distribution& d) {
  const double m = d.mass();
  if (!(m > 0.0)) {
    throw std::invalid_argument("cannot normalize a zero-mass distribution");
  }
  Distribution out = d;
  for (double& p : out.probabilities) p /= m;
  return out;
}

}  // namespace qwalk
