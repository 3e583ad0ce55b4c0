#include "orey/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "orey/error.hpp"
#include "orey/parallel.hpp"
#include "orey/quadvar.hpp"
#include "orey/summation.hpp"

namespace orey {
namespace {

std::vector<double> restrict_to(const Partition& grid, std::span<const double> values,
                                const Partition& sub) {
  const auto idx = embedding_indices(sub, grid);
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = values[idx[i]];
  return out;
}

}  // namespace

double gamma_from_variations(double v_coarse, double v_fine, double p_fine, double m_coarse) {
  if (!(v_coarse > 0) || !(v_fine > 0) || !std::isfinite(v_coarse) || !std::isfinite(v_fine))
    throw DegeneratePathError("raw variation is zero or not finite");
  if (!(p_fine > 0) || !(m_coarse > 0)) throw DomainError("mesh numbers must be positive");
  if (p_fine == m_coarse) throw ScaleSeparationError("fine mesh equals coarse mesh");
  return -0.5 + std::log(v_fine / v_coarse) / (2 * std::log(p_fine / m_coarse));
}

EstimateResult orey_estimate(const Partition& grid, std::span<const double> values,
                             const Partition& coarse, const Partition& fine) {
  if (values.size() != grid.size()) throw LengthMismatchError("path does not match its partition");
  if (!is_nested(coarse, fine)) throw NestingError("coarse partition is not nested in the fine one");
  if (!is_nested(fine, grid)) throw NestingError("fine partition is not nested in the path grid");
  if (coarse.size() >= fine.size()) throw NestingError("coarse partition must be strictly coarser");

  EstimateResult r;
  r.p_fine = mesh_stats(fine).p_n;
  r.m_coarse = mesh_stats(coarse).m_n;
  r.log_scale = std::log(r.p_fine / r.m_coarse);
  r.v_fine = raw_qv(fine, restrict_to(grid, values, fine));
  r.v_coarse = raw_qv(coarse, restrict_to(grid, values, coarse));
  r.gamma_hat = gamma_from_variations(r.v_coarse, r.v_fine, r.p_fine, r.m_coarse);
  return r;
}

EstimateResult orey_estimate(const Path& path, const Partition& coarse, const Partition& fine) {
  return orey_estimate(path.partition, path.values, coarse, fine);
}

void summarize(MCSummary& s) {
  s.replicas = s.table.size();
  CompensatedSum sum;
  std::size_t n = 0;
  for (const auto& r : s.table)
    if (r.ok) {
      sum.add(r.estimate.gamma_hat);
      ++n;
    }
  s.effective = n;
  if (n == 0) {
    s.mean = s.std = s.rmse = s.bias = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  s.mean = sum.value() / static_cast<double>(n);
  CompensatedSum dev, err;
  for (const auto& r : s.table)
    if (r.ok) {
      const double d = r.estimate.gamma_hat - s.mean;
      const double e = r.estimate.gamma_hat - s.true_gamma;
      dev.add(d * d);
      err.add(e * e);
    }
  s.std = n > 1 ? std::sqrt(dev.value() / static_cast<double>(n - 1)) : 0.0;
  s.bias = s.mean - s.true_gamma;
  s.rmse = std::sqrt(err.value() / static_cast<double>(n));
}

MCSummary mc_study(const McConfig& config) {
  validate(config.spec);
  if (config.replicas < 2) throw ParameterError("replicas must be at least 2");
  if (config.stride < 2) throw ParameterError("stride must be at least 2");
  if (config.n_fine % config.stride != 0)
    throw AlignmentError("n_fine must be divisible by stride");
  if (const auto* b = std::get_if<FBridge>(&config.spec))
    if (std::abs(b->horizon - config.T) > 1e-12 * config.T)
      throw ParameterError("bridge horizon must equal T");

  const Partition fine = make_regular(config.n_fine, config.T);
  const Partition coarse = subsample(fine, config.stride);
  const Sampler sampler(config.spec, fine);

  MCSummary s;
  s.true_gamma = orey_profile(config.spec).gamma;
  s.table.resize(config.replicas);
  parallel_for(config.replicas, [&](std::size_t r) {
    ReplicaRecord& rec = s.table[r];
    rec.replica = r;
    try {
      // Sampler::draw returns centered paths
      const Path path = sampler.draw(SeedPolicy{config.seed, r});
      rec.estimate = orey_estimate(path, coarse, fine);
      rec.ok = true;
    } catch (const Error& e) {
      rec.error = std::string(e.kind()) + ": " + e.what();
    }
  });
  summarize(s);
  return s;
}

}  // namespace orey
