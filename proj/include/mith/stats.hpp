// Copyright 2026 The MitH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Small statistics helpers for the experiment harness.

#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>

namespace mith {

// Pearson statistic against the uniform distribution over the bins.
inline double chi_square_uniform_statistic(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi-square needs at least two bins");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

inline double chi_square_uniform_p_value(std::span<const std::uint64_t> counts) {
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi_square_uniform_statistic(counts)));
}

// Two-sample homogeneity test on paired histograms; p-value of the
// statistic with (bins used - 1) degrees of freedom. Empty bins are skipped.
inline double chi_square_two_sample_p_value(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("histograms differ in size");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  double stat = 0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tot = static_cast<double>(a[i] + b[i]);
    if (tot == 0) continue;
    ++bins;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  if (bins < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(bins - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Half-width of a 3-sigma binomial confidence interval.
inline double binomial_tolerance(double p, std::uint64_t trials, double sigmas = 3.0) {
  if (trials == 0) return 1.0;
  return sigmas * std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

}  // namespace mith
