#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orey {

// Base of every error raised by the library. kind() is a stable,
// machine-readable tag used by the CLI's JSON error reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define OREY_DEFINE_ERROR(Name, tag)                                 \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return tag; }       \
  };

OREY_DEFINE_ERROR(DomainError, "domain")
OREY_DEFINE_ERROR(ParameterError, "parameter")
OREY_DEFINE_ERROR(NotAvailableError, "not_available")
OREY_DEFINE_ERROR(SizeError, "size")
OREY_DEFINE_ERROR(AlignmentError, "alignment")
OREY_DEFINE_ERROR(LengthMismatchError, "length_mismatch")
OREY_DEFINE_ERROR(NestingError, "nesting")
OREY_DEFINE_ERROR(DegeneratePathError, "degenerate_path")
OREY_DEFINE_ERROR(ScaleSeparationError, "scale_separation")
OREY_DEFINE_ERROR(ConfigError, "config")
OREY_DEFINE_ERROR(IoError, "io")

#undef OREY_DEFINE_ERROR

// Cholesky failed even after the largest jitter; pivot is the 0-based row
// (within the factored, non-pinned block) where positivity was lost.
class NumericalPsdError : public Error {
 public:
  NumericalPsdError(const std::string& what, std::ptrdiff_t pivot)
      : Error(what), pivot_(pivot) {}
  const char* kind() const noexcept override { return "numerical_psd"; }
  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

}  // namespace orey
