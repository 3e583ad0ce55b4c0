#include "orey/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "orey/error.hpp"
#include "orey/rng.hpp"
#include "orey/summation.hpp"

namespace orey {

Partition::Partition(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 4) throw SizeError("a partition needs N >= 3 steps");
  if (times_.front() != 0.0) throw DomainError("a partition must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || !(times_[k] > times_[k - 1]))
      throw DomainError("partition times must be finite and strictly increasing");
  }
}

Partition make_regular(std::size_t N, double T) {
  if (N < 3) throw SizeError("regular partition needs N >= 3");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("horizon T must be > 0");
  std::vector<double> t(N + 1);
  // T * (k / N): k / N is correctly rounded, so sub-grids agree bit for bit
  for (std::size_t k = 0; k <= N; ++k) t[k] = T * (static_cast<double>(k) / static_cast<double>(N));
  t[N] = T;
  return Partition(std::move(t));
}

Partition make_alternating(double alpha, std::size_t pairs, double T) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be > 0");
  if (pairs < 2) throw SizeError("alternating partition needs at least 2 pairs");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("horizon T must be > 0");
  const double h = T / (static_cast<double>(pairs) * (1.0 + alpha));
  std::vector<double> t(2 * pairs + 1);
  for (std::size_t j = 0; j < pairs; ++j) {
    const double start = T * (static_cast<double>(j) / static_cast<double>(pairs));
    t[2 * j] = start;
    t[2 * j + 1] = start + h;
  }
  t[2 * pairs] = T;
  return Partition(std::move(t));
}

Partition make_perturbed(std::size_t N, double T, double c_max, std::uint64_t seed) {
  if (N < 3) throw SizeError("perturbed partition needs N >= 3");
  if (!(c_max >= 1.0) || !std::isfinite(c_max)) throw ParameterError("c_max must be >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("horizon T must be > 0");
  if (c_max == 1.0) return make_regular(N, T);
  NormalStream stream(SeedPolicy{seed, 0}, /*lane=*/1);
  std::vector<double> steps(N);
  CompensatedSum total;
  for (auto& s : steps) {
    s = 1.0 + (c_max - 1.0) * stream.uniform();
    total.add(s);
  }
  const double scale = T / total.value();
  std::vector<double> t(N + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t k = 1; k <= N; ++k) {
    acc.add(steps[k - 1] * scale);
    t[k] = acc.value();
  }
  t[N] = T;
  return Partition(std::move(t));
}

Partition subsample(const Partition& p, std::size_t stride) {
  if (stride < 2) throw ParameterError("stride must be >= 2");
  if (p.steps() % stride != 0) throw AlignmentError("stride must divide the number of steps");
  std::vector<double> t;
  t.reserve(p.steps() / stride + 1);
  for (std::size_t k = 0; k <= p.steps(); k += stride) t.push_back(p.time(k));
  return Partition(std::move(t));
}

MeshStats mesh_stats(const Partition& p) {
  MeshStats m;
  m.m_n = p.step(1);
  m.p_n = p.step(1);
  for (std::size_t k = 2; k <= p.steps(); ++k) {
    m.m_n = std::max(m.m_n, p.step(k));
    m.p_n = std::min(m.p_n, p.step(k));
  }
  m.c_ratio = m.m_n / m.p_n;
  return m;
}

RatioProfile ratio_profile(const Partition& p) {
  RatioProfile r;
  r.horizon = p.horizon();
  const std::size_t N = p.steps();
  r.breakpoints.reserve(N - 1);
  r.values.reserve(N - 1);
  for (std::size_t k = 1; k <= N - 1; ++k) {
    r.breakpoints.push_back(k == 1 ? 0.0 : p.time(k));
    r.values.push_back(p.step(k) / p.step(k + 1));
  }
  std::vector<double> sorted = r.values;
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted)
    if (r.range.empty() || std::abs(v - r.range.back()) > 1e-9 * r.range.back()) r.range.push_back(v);
  return r;
}

std::vector<std::size_t> embedding_indices(const Partition& sub, const Partition& super) {
  std::vector<std::size_t> idx;
  idx.reserve(sub.size());
  std::size_t j = 0;
  for (double t : sub.times()) {
    while (j < super.size() && super.time(j) < t) ++j;
    if (j == super.size() || super.time(j) != t)
      throw NestingError("partition is not nested in its parent grid");
    idx.push_back(j);
  }
  return idx;
}

bool is_nested(const Partition& sub, const Partition& super) {
  try {
    embedding_indices(sub, super);
    return true;
  } catch (const NestingError&) {
    return false;
  }
}

bool is_regular(const Partition& p) {
  const double h = p.horizon() / static_cast<double>(p.steps());
  for (std::size_t k = 1; k <= p.steps(); ++k)
    if (std::abs(p.step(k) - h) > 1e-12 * p.horizon()) return false;
  return true;
}

void write_csv(std::ostream& os, const Partition& p) {
  os << "t\n";
  char buf[32];
  for (double t : p.times()) {
    std::snprintf(buf, sizeof buf, "%.17g", t);
    os << buf << '\n';
  }
}

Partition read_partition_csv(std::istream& is) {
  std::string line;
  bool header = false;
  std::vector<double> t;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "t") throw IoError("partition CSV must start with header 't'");
      header = true;
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) throw IoError("malformed partition CSV line: " + line);
    t.push_back(v);
  }
  if (!header) throw IoError("partition CSV is missing its header");
  return Partition(std::move(t));
}

}  // namespace orey
