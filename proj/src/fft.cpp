#include "orey/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace orey::fft {
namespace {

// fftw planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

}  // namespace

void forward(std::span<std::complex<double>> data) { run(data, FFTW_FORWARD); }
void backward(std::span<std::complex<double>> data) { run(data, FFTW_BACKWARD); }

SymmetricToeplitz::SymmetricToeplitz(std::vector<double> first_column)
    : column_(std::move(first_column)) {
  const std::size_t n = column_.size();
  spectrum_.assign(2 * n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) spectrum_[i] = column_[i];
  for (std::size_t i = 1; i < n; ++i) spectrum_[2 * n - i] = column_[i];
  forward(spectrum_);
}

std::vector<double> SymmetricToeplitz::apply(std::span<const double> x) const {
  const std::size_t n = column_.size();
  std::vector<std::complex<double>> buf(2 * n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
  forward(buf);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= spectrum_[i];
  backward(buf);
  std::vector<double> y(n);
  const double scale = 1.0 / static_cast<double>(2 * n);
  for (std::size_t i = 0; i < n; ++i) y[i] = buf[i].real() * scale;
  return y;
}

}  // namespace orey::fft
