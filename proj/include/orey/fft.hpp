#pragma once

#include <complex>
#include <span>
#include <vector>

namespace orey::fft {

/// In-place unnormalized DFT, X_k = sum_j x_j exp(-2 pi i jk / n).
void forward(std::span<std::complex<double>> data);
/// In-place unnormalized inverse DFT (no 1/n factor).
void backward(std::span<std::complex<double>> data);

/// Symmetric Toeplitz matrix given by its first column, applied through a
/// circulant embedding of twice the size.
class SymmetricToeplitz {
 public:
  explicit SymmetricToeplitz(std::vector<double> first_column);

  std::size_t size() const { return column_.size(); }
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> column_;
  std::vector<std::complex<double>> spectrum_;
};

}  // namespace orey::fft
