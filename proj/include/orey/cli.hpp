#pragma once

// Batch front end shared by the orey executable and the tests.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orey/conditions.hpp"
#include "orey/error.hpp"
#include "orey/partition.hpp"
#include "orey/process.hpp"

namespace orey::cli {

/// Validation failure tied to one configuration field.
class ConfigFieldError : public ConfigError {
 public:
  ConfigFieldError(std::string field, const std::string& message)
      : ConfigError("field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigFailure = 2, kComputationFailure = 3 };

struct ExperimentConfig {
  std::string command = "simulate";  // simulate | qv | expect | estimate | mc | diagnose
  std::string diagnostic = "lambda";  // lambda | remark | logratio | rowsum

  std::string family = "fbm";
  double H = 0.5;
  double K = 1.0;
  double mu = 1.0;
  double theta = 1.0;
  double x0 = 0.0;
  int refine = 8;

  std::string partition = "regular";  // regular | alternating | perturbed
  double alpha = 2.0;
  double cmax = 2.0;

  std::size_t N = 1024;
  double T = 1.0;
  std::size_t stride = 2;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::string out = ".";

  std::vector<std::size_t> ladder;  // expect: N values; empty means {N}
  std::string phi = "power";        // power | log_power
  double phi_param = 0.2;
  std::vector<double> deltas;       // lambda / remark
  std::vector<double> h_grid;       // logratio
  std::string input;                // qv / estimate: read a t,x path instead of simulating

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Unknown keys and wrongly typed values raise ConfigFieldError.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Field-level checks against the owning modules' preconditions.
void validate(const ExperimentConfig& c);

ProcessSpec make_spec(const ExperimentConfig& c);
Partition make_partition(const ExperimentConfig& c, std::size_t N);
PhiFunction make_phi(const ExperimentConfig& c);

/// Runs one subcommand; artifacts go to c.out, a JSON summary to `out`.
int run(const ExperimentConfig& c, std::ostream& out);

/// Parses argv (without the program name) and runs. Errors are reported as
/// a JSON object on `err`.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orey::cli
