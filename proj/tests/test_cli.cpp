#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orey/cli.hpp"

using namespace orey;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("orey_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_args(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::main(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config round-trips through JSON") {
    cli::ExperimentConfig c;
    c.command = "diagnose";
    c.diagnostic = "logratio";
    c.family = "fou";
    c.H = 0.123456789012345678;
    c.mu = 2.5;
    c.x0 = -1.0 / 3.0;
    c.partition = "perturbed";
    c.cmax = 1.75;
    c.seed = 18446744073709551615ull;
    c.ladder = {256, 512};
    c.deltas = {0.1, 0.01};
    c.phi = "log_power";
    c.phi_param = 2.0;
    const auto j = cli::to_json(c);
    CHECK(cli::config_from_json(j) == c);
    CHECK(cli::config_from_json(nlohmann::json::parse(j.dump())) == c);
  }

  TEST_CASE("config field errors") {
    auto j = cli::to_json(cli::ExperimentConfig{});
    j["bogus"] = 1;
    CHECK_THROWS_AS(cli::config_from_json(j), cli::ConfigFieldError);
    cli::ExperimentConfig c;
    c.H = 1.5;
    try {
      cli::validate(c);
      FAIL("expected a field error");
    } catch (const cli::ConfigFieldError& e) {
      CHECK(e.field() == "H");
    }
    c = {};
    c.command = "mc";
    c.replicas = 10;
    c.N = 1001;
    CHECK_THROWS_AS(cli::validate(c), cli::ConfigFieldError);
  }

  TEST_CASE("expect table for Brownian motion") {
    const auto dir = scratch("expect");
    std::string out;
    REQUIRE(run_args({"expect", "--family", "fbm", "--H", "0.5", "--ladder", "256,512,1024", "--out", dir.string()},
                     &out) == 0);
    const auto j = nlohmann::json::parse(out);
    for (const auto& row : j["rows"]) {
      const double N = row["N"].get<double>();
      CHECK(row["expected_qv"].get<double>() == doctest::Approx(2 * (N - 1) / N).epsilon(1e-12));
      CHECK(row["limit"].get<double>() == doctest::Approx(2.0));
    }
    const std::string csv = slurp(dir / "expect.csv");
    CHECK(csv.rfind("# orey ", 0) == 0);
    CHECK(csv.find("\"family\":\"fbm\"") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
  }

  TEST_CASE("mc output is byte-identical for identical seeds") {
    const auto a = scratch("mc_a"), b = scratch("mc_b");
    const std::vector<std::string> base{"mc", "--family", "subfbm", "--H", "0.7", "--N", "256", "--replicas", "20", "--seed", "42"};
    auto with_out = [&](const fs::path& d) {
      auto v = base;
      v.push_back("--out");
      v.push_back(d.string());
      return v;
    };
    REQUIRE(run_args(with_out(a)) == 0);
    REQUIRE(run_args(with_out(b)) == 0);
    // provenance embeds the output directory, so compare the data lines
    auto body = [](const std::string& s) { return s.substr(s.find('\n') + 1); };
    CHECK(body(slurp(a / "replicas.csv")) == body(slurp(b / "replicas.csv")));
    CHECK(slurp(a / "replicas.csv").size() > 100);
  }

  TEST_CASE("diagnose remark passes at H = 0.75") {
    const auto dir = scratch("remark");
    std::string out;
    CHECK(run_args({"diagnose", "remark", "--H", "0.75", "--out", dir.string()}, &out) == 0);
    CHECK(nlohmann::json::parse(out)["pass"] == true);
    CHECK(fs::exists(dir / "remark.csv"));
  }

  TEST_CASE("other subcommands produce their artifacts") {
    const auto dir = scratch("misc");
    const std::string d = dir.string();
    CHECK(run_args({"simulate", "--family", "fou", "--x0", "1", "--N", "64", "--out", d}) == 0);
    CHECK(run_args({"estimate", "--family", "fbm", "--H", "0.3", "--N", "1024", "--out", d}) == 0);
    CHECK(run_args({"qv", "--input", (dir / "paths.csv").string(), "--family", "fou", "--out", d}) == 0);
    CHECK(run_args({"diagnose", "rowsum", "--family", "subfbm", "--H", "0.7", "--N", "64", "--out", d}) == 0);
    CHECK(run_args({"diagnose", "logratio", "--family", "bifbm", "--H", "0.8", "--K", "0.5", "--out", d}) == 0);
    CHECK(run_args({"diagnose", "lambda", "--family", "subfbm", "--H", "0.7", "--out", d}) == 0);
    for (const char* f : {"paths.csv", "estimate.json", "qv.csv", "rowsum.json", "dmatrix.csv", "logratio.csv", "lambda.csv"})
      CHECK(fs::exists(dir / f));
    const auto est = nlohmann::json::parse(slurp(dir / "estimate.json"));
    CHECK(est["provenance"]["version"] == "0.1.0");
    CHECK(est["provenance"]["config"]["params"]["H"] == 0.3);
    const auto path = slurp(dir / "paths.csv");
    CHECK(path.find("t,x\n0,1\n") != std::string::npos);
  }

  TEST_CASE("config file with flag overrides") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    cli::ExperimentConfig c;
    c.command = "expect";
    c.family = "subfbm";
    c.H = 0.3;
    c.N = 128;
    c.out = dir.string();
    {
      std::ofstream os(dir / "cfg.json");
      os << cli::to_json(c).dump(2);
    }
    std::string out;
    REQUIRE(run_args({"--config", (dir / "cfg.json").string(), "--H", "0.7"}, &out) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j["rows"][0]["limit"].get<double>() == doctest::Approx(4 - std::pow(2.0, 1.4)));
    CHECK(j["rows"][0]["N"] == 128);
  }

  TEST_CASE("errors are reported as JSON with exit codes") {
    std::string err;
    CHECK(run_args({"simulate", "--H", "2"}, nullptr, &err) == cli::kConfigFailure);
    auto j = nlohmann::json::parse(err);
    CHECK(j["error"]["kind"] == "config");
    CHECK(j["error"]["field"] == "H");
    CHECK(run_args({"simulate", "--nonsense"}, nullptr, &err) == cli::kConfigFailure);
    CHECK(run_args({"frobnicate"}, nullptr, &err) == cli::kConfigFailure);
    CHECK(nlohmann::json::parse(err)["error"]["field"] == "command");
    const auto dir = scratch("fail");
    // a flat input path has zero variation
    {
      fs::create_directories(dir);
      std::ofstream os(dir / "flat.csv");
      os << "t,x\n";
      for (int i = 0; i <= 16; ++i) os << i / 16.0 << ",0\n";
    }
    CHECK(run_args({"estimate", "--input", (dir / "flat.csv").string(), "--out", dir.string()}, nullptr, &err) ==
          cli::kComputationFailure);
    CHECK(nlohmann::json::parse(err)["error"]["kind"] == "degenerate_path");
  }
}
