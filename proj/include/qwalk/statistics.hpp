#pragma once

// Spreading statistics and distribution comparisons.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/tolerances.hpp"

namespace qwalk {

struct SpreadStats {
  int step_index = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Mean and standard deviation of a position distribution. Conditional
// distributions are handled by dividing through the (positive) mass.
inline SpreadStats spread_stats(const Distribution& dist, int step_index) {
  const double mass = dist.mass();
  if (!(mass > 0.0)) {
    throw std::invalid_argument("spread statistics need a distribution with mass > 0");
  }
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const double j = static_cast<double>(dist.support[i]);
    first += j * dist.probabilities[i];
    second += j * j * dist.probabilities[i];
  }
  const double mean = first / mass;
  const double var = second / mass - mean * mean;
  return SpreadStats{step_index, mean, std::sqrt(var > 0.0 ? var : 0.0)};
}

// Least-squares slope of log(stddev) against log(step): 0.5 for diffusive
// spreading, 1 for ballistic.
inline double spreading_exponent(std::span<const SpreadStats> stats) {
  if (stats.size() < 3) {
    throw std::invalid_argument("spreading exponent needs at least 3 points");
  }
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  xs.reserve(stats.size());
  ys.reserve(stats.size());
  for (const SpreadStats& s : stats) {
    if (s.step_index < 1 || !(s.stddev > 0.0)) {
      throw std::invalid_argument(
          "spreading exponent needs step_index >= 1 and stddev > 0");
    }
    xs.push_back(std::log(static_cast<double>(s.step_index)));
    ys.push_back(std::log(s.stddev));
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / static_cast<double>(xs.size());
  const double my = sy / static_cast<double>(ys.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den == 0.0) {
    throw std::invalid_argument("spreading exponent needs distinct step indices");
  }
  return num / den;
}

// d = (1/2) sum |p_j - r_j| over the union support. Both inputs must be
// normalized; condition them first.
inline double l1_distance(const Distribution& p, const Distribution& r) {
  if (std::abs(p.mass() - 1.0) > kNormalizedMassTol ||
      std::abs(r.mass() - 1.0) > kNormalizedMassTol) {
    throw std::invalid_argument("l1 distance requires normalized distributions");
  }
  double sum = 0.0;
  std::size_t a = 0, b = 0;
  while (a < p.support.size() || b < r.support.size()) {
    if (b >= r.support.size() ||
        (a < p.support.size() && p.support[a] < r.support[b])) {
      sum += std::abs(p.probabilities[a]);
      ++a;
    } else if (a >= p.support.size() || r.support[b] < p.support[a]) {
      sum += std::abs(r.probabilities[b]);
      ++b;
    } else {
      sum += std::abs(p.probabilities[a] - r.probabilities[b]);
      ++a;
      ++b;
    }
  }
  return 0.5 * sum;
}

// Endpoint distribution of the unbiased classical walk: p(N - 2k) =
// C(N, k) / 2^N. Exact dyadic probabilities up to N = 56; a ratio
// recurrence takes over beyond that.
inline Distribution binomial_reference(int n) {
  if (n < 0) {
    throw std::invalid_argument("binomial reference needs N >= 0");
  }
  Distribution d;
  d.support.reserve(static_cast<std::size_t>(n) + 1);
  d.probabilities.reserve(static_cast<std::size_t>(n) + 1);
  if (n <= 56) {
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
      std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1, 1);
      for (int k = 1; k < i; ++k) {
        next[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] +
                                            row[static_cast<std::size_t>(k)];
      }
      row = std::move(next);
    }
    for (int k = n; k >= 0; --k) {
      d.support.push_back(n - 2 * k);
      d.probabilities.push_back(
          std::ldexp(static_cast<double>(row[static_cast<std::size_t>(k)]), -n));
    }
  } else {
    double p = std::ldexp(1.0, -n);
    std::vector<double> probs(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
      probs[static_cast<std::size_t>(k)] = p;
      p *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    for (int k = n; k >= 0; --k) {
      d.support.push_back(n - 2 * k);
      d.probabilities.push_back(probs[static_cast<std::size_t>(k)]);
    }
  }
  return d;
}

}  // namespace qwalk
