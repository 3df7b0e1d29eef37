// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>

#include "storyboard/app_model.hpp"
#include "storyboard/explore.hpp"
#include "storyboard/raster.hpp"
#include "storyboard/static_atg.hpp"

namespace storyboard {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |declared activities appearing as ATG endpoints, plus the launcher| over
/// |declared activities|.
double coverage(const Atg& atg, const Manifest& manifest);

/// Launched activities over declared activities.
double launch_ratio(const ExplorationReport& report, const Manifest& manifest);

struct Similarity {
  double mae_sim = 1.0;
  double mse_sim = 1.0;
  bool operator==(const Similarity&) const = default;
};

/// 1 - MAE and 1 - MSE over cells normalized to [0, 1] by the palette maximum.
Similarity page_similarity(const Raster& a, const Raster& b);

struct MetricsReport {
  std::size_t transition_pairs = 0;
  double activity_coverage = 0.0;
  std::optional<double> launch_ratio;
  std::optional<Similarity> similarity;
  bool operator==(const MetricsReport&) const = default;
};

}  // namespace storyboard
