#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orey/partition.hpp"
#include "orey/process.hpp"
#include "orey/sampler.hpp"

namespace orey {

/// gamma_hat = -1/2 + ln(v_fine / v_coarse) / (2 ln(p_fine / m_coarse)).
struct EstimateResult {
  double gamma_hat = 0;
  double v_coarse = 0;
  double v_fine = 0;
  double p_fine = 0;
  double m_coarse = 0;
  double log_scale = 0;  // ln(p_fine / m_coarse) < 0
};

/// Two-scale Orey index estimate. `coarse` must be nested in `fine`, which
/// must be nested in the grid the values were observed on.
EstimateResult orey_estimate(const Partition& grid, std::span<const double> values,
                             const Partition& coarse, const Partition& fine);
EstimateResult orey_estimate(const Path& path, const Partition& coarse, const Partition& fine);

/// Inverts the estimator formula from already computed raw variations.
double gamma_from_variations(double v_coarse, double v_fine, double p_fine, double m_coarse);

struct ReplicaRecord {
  std::uint64_t replica = 0;
  bool ok = false;
  EstimateResult estimate;
  std::string error;  // error kind and message for failed replicas
};

struct MCSummary {
  std::size_t replicas = 0;
  std::size_t effective = 0;  // replicas with a valid estimate
  double true_gamma = 0;
  double mean = 0;
  double std = 0;  // sample standard deviation (denominator R - 1)
  double rmse = 0;
  double bias = 0;
  std::vector<ReplicaRecord> table;
};

struct McConfig {
  ProcessSpec spec = FBm{0.5};
  std::size_t n_fine = 1024;
  std::size_t stride = 2;
  std::size_t replicas = 100;
  std::uint64_t seed = 0;
  double T = 1.0;
};

/// Simulates `replicas` paths on make_regular(n_fine, T), estimates against
/// coarse = subsample(fine, stride) and aggregates. Failed replicas are
/// recorded and excluded from the moments.
MCSummary mc_study(const McConfig& config);

/// Moments of a set of estimates against the true index.
void summarize(MCSummary& summary);

}  // namespace orey
