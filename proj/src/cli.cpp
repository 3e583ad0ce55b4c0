#include "orey/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "orey/estimator.hpp"
#include "orey/io.hpp"
#include "orey/quadvar.hpp"
#include "orey/sampler.hpp"

namespace orey::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"simulate", "qv", "expect", "estimate", "mc", "diagnose"};
const std::vector<std::string> kDiagnostics = {"lambda", "remark", "logratio", "rowsum"};
const std::vector<std::string> kFamilies = {"fbm", "subfbm", "bifbm", "fou", "bridge"};
const std::vector<std::string> kPartitions = {"regular", "alternating", "perturbed"};

bool one_of(const std::string& v, const std::vector<std::string>& set) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

std::string joined(const std::vector<std::string>& set) {
  std::string s;
  for (const auto& v : set) s += (s.empty() ? "" : ", ") + v;
  return s;
}

template <class T>
void read_field(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigFieldError(key, std::string("wrong type: ") + e.what());
  }
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigFieldError(field, message);
}

void write_file(const ExperimentConfig& c, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());
  const auto path = std::filesystem::path(c.out) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string());
  body(os);
  if (!os) throw IoError("write failed for " + path.string());
}

json provenance(const ExperimentConfig& c) { return to_json(c); }

json json_with_provenance(const ExperimentConfig& c, json body) {
  body["provenance"] = {{"tool", "orey"}, {"version", kVersion}, {"config", provenance(c)}};
  return body;
}

// Path plus the partition it lives on, from --input or a fresh draw.
std::vector<Path> obtain_paths(const ExperimentConfig& c, bool centered) {
  const ProcessSpec spec = make_spec(c);
  if (!c.input.empty()) {
    std::ifstream is(c.input);
    if (!is) throw IoError("cannot open " + c.input);
    std::vector<double> t, x;
    for (const auto& [a, b] : read_path_csv(is)) {
      t.push_back(a);
      x.push_back(b);
    }
    return {Path{Partition(std::move(t)), std::move(x), SeedPolicy{c.seed, 0}, spec,
                 SampleMethod::cholesky, true}};
  }
  const Partition p = make_partition(c, c.N);
  std::vector<Path> paths;
  paths.reserve(c.replicas);
  if (const auto* ou = std::get_if<FracOU>(&spec); ou && !centered) {
    const FracOuSampler sampler(*ou, p);
    for (std::size_t r = 0; r < c.replicas; ++r) paths.push_back(sampler.draw({c.seed, r}).path);
    return paths;
  }
  const Sampler sampler(spec, p);
  for (std::size_t r = 0; r < c.replicas; ++r) paths.push_back(sampler.draw({c.seed, r}));
  return paths;
}

std::vector<double> default_deltas(double T) {
  std::vector<double> d;
  for (int k = 3; k <= 7; ++k) d.push_back(T / std::pow(2.0, k));
  return d;
}

int run_simulate(const ExperimentConfig& c, std::ostream& out) {
  const auto paths = obtain_paths(c, /*centered=*/false);
  write_file(c, "paths.csv", [&](std::ostream& os) {
    if (paths.size() == 1)
      write_path_csv(os, paths.front(), provenance(c));
    else
      write_ensemble_csv(os, paths, provenance(c));
  });
  out << json{{"command", "simulate"},
              {"paths", paths.size()},
              {"points", paths.front().values.size()},
              {"method", to_string(paths.front().method)}}
             .dump()
      << '\n';
  return kOk;
}

int run_qv(const ExperimentConfig& c, std::ostream& out) {
  const double gamma = orey_profile(make_spec(c)).gamma;
  const auto paths = obtain_paths(c, /*centered=*/true);
  json rows = json::array();
  write_file(c, "qv.csv", [&](std::ostream& os) {
    write_provenance(os, provenance(c));
    os << "replica,raw_qv,normalized_qv\n";
    for (const auto& p : paths) {
      const double raw = raw_qv(p), nq = normalized_qv(p, gamma);
      os << p.seeds.replica_index << ',' << format_number(raw) << ',' << format_number(nq) << '\n';
      rows.push_back({{"replica", p.seeds.replica_index}, {"raw_qv", raw}, {"normalized_qv", nq}});
    }
  });
  out << json{{"command", "qv"}, {"gamma", gamma}, {"rows", rows}}.dump() << '\n';
  return kOk;
}

int run_expect(const ExperimentConfig& c, std::ostream& out) {
  const ProcessSpec spec = make_spec(c);
  const OreyProfile profile = orey_profile(spec);
  const std::vector<std::size_t> ladder = c.ladder.empty() ? std::vector<std::size_t>{c.N} : c.ladder;
  struct Row {
    std::size_t N;
    double expected, limit;
  };
  std::vector<Row> rows;
  // expected_qv parallelizes internally, so the ladder runs in order
  for (std::size_t N : ladder) {
    const Partition p = make_partition(c, N);
    rows.push_back({N, expected_qv(spec, p, profile), limit_value(profile, ratio_profile(p), c.T)});
  }
  json table = json::array();
  write_file(c, "expect.csv", [&](std::ostream& os) {
    write_provenance(os, provenance(c));
    os << "N,expected_qv,limit,abs_error,rel_error\n";
    for (const auto& r : rows) {
      const double err = std::abs(r.expected - r.limit);
      os << r.N << ',' << format_number(r.expected) << ',' << format_number(r.limit) << ','
         << format_number(err) << ',' << format_number(err / std::abs(r.limit)) << '\n';
      table.push_back({{"N", r.N}, {"expected_qv", r.expected}, {"limit", r.limit}, {"abs_error", err}});
    }
  });
  out << json{{"command", "expect"}, {"rows", table}}.dump() << '\n';
  return kOk;
}

int run_estimate(const ExperimentConfig& c, std::ostream& out) {
  const Path path = obtain_paths(c, /*centered=*/true).front();
  const Partition coarse = subsample(path.partition, c.stride);
  const EstimateResult e = orey_estimate(path, coarse, path.partition);
  json body = to_json(e);
  body["true_gamma"] = orey_profile(make_spec(c)).gamma;
  write_file(c, "estimate.json",
             [&](std::ostream& os) { os << json_with_provenance(c, body).dump(2) << '\n'; });
  body["command"] = "estimate";
  out << body.dump() << '\n';
  return kOk;
}

int run_mc(const ExperimentConfig& c, std::ostream& out) {
  McConfig mc;
  mc.spec = make_spec(c);
  mc.n_fine = c.N;
  mc.stride = c.stride;
  mc.replicas = c.replicas;
  mc.seed = c.seed;
  mc.T = c.T;
  const MCSummary s = mc_study(mc);
  write_file(c, "replicas.csv", [&](std::ostream& os) { write_replicas_csv(os, s, provenance(c)); });
  write_file(c, "summary.json",
             [&](std::ostream& os) { os << json_with_provenance(c, summary_json(s)).dump(2) << '\n'; });
  json body = summary_json(s);
  body["command"] = "mc";
  out << body.dump() << '\n';
  return kOk;
}

int run_diagnose(const ExperimentConfig& c, std::ostream& out) {
  const std::vector<double> deltas = c.deltas.empty() ? default_deltas(c.T) : c.deltas;
  if (c.diagnostic == "lambda") {
    const ProcessSpec spec = make_spec(c);
    const auto report = lambda_sweep(spec, orey_profile(spec), make_phi(c), deltas, 64, 32, c.T);
    write_file(c, "lambda.csv", [&](std::ostream& os) { write_sweep_csv(os, report, provenance(c)); });
    out << json{{"command", "diagnose"}, {"diagnostic", "lambda"}, {"pass", report.all_pass()}}.dump()
        << '\n';
    return report.all_pass() ? kOk : kCheckFailed;
  }
  if (c.diagnostic == "remark") {
    const auto report = remark_check(c.H, deltas, 64, 32, c.T);
    write_file(c, "remark.csv", [&](std::ostream& os) { write_remark_csv(os, report, provenance(c)); });
    out << json{{"command", "diagnose"}, {"diagnostic", "remark"}, {"pass", report.all_pass()}}.dump()
        << '\n';
    return report.all_pass() ? kOk : kCheckFailed;
  }
  if (c.diagnostic == "logratio") {
    const std::vector<double> hs = c.h_grid.empty() ? geometric_grid(1e-4, 1e-1, 7) : c.h_grid;
    const auto rows = log_ratio_profile(make_spec(c), make_phi(c), hs, 64, c.T);
    write_file(c, "logratio.csv", [&](std::ostream& os) { write_log_ratio_csv(os, rows, provenance(c)); });
    out << json{{"command", "diagnose"}, {"diagnostic", "logratio"}, {"rows", rows.size()}}.dump() << '\n';
    return kOk;
  }
  const ProcessSpec spec = make_spec(c);
  const Partition p = make_partition(c, c.N);
  const DMatrix d = d_matrix(spec, p);
  const auto rows = rowsum_diagnostic(d);
  const double bound = eigen_bound(d, p, d.gamma());
  const json diag = diagnostics_json(d, rows, bound);
  write_file(c, "dmatrix.csv", [&](std::ostream& os) { write_dmatrix_csv(os, d, provenance(c)); });
  write_file(c, "rowsum.json",
             [&](std::ostream& os) { os << json_with_provenance(c, diag).dump(2) << '\n'; });
  json body = diag;
  body["command"] = "diagnose";
  body["diagnostic"] = "rowsum";
  out << body.dump() << '\n';
  return kOk;
}

json error_json(const std::string& kind, const std::string& message, const std::string& field,
                int code) {
  json e = {{"kind", kind}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return {{"error", e}, {"exit_code", code}};
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  return {{"command", c.command},
          {"diagnostic", c.diagnostic},
          {"family", c.family},
          {"params", {{"H", c.H}, {"K", c.K}, {"mu", c.mu}, {"theta", c.theta}, {"x0", c.x0},
                      {"refine", c.refine}}},
          {"partition", {{"kind", c.partition}, {"alpha", c.alpha}, {"cmax", c.cmax}}},
          {"N", c.N},
          {"T", c.T},
          {"stride", c.stride},
          {"replicas", c.replicas},
          {"seed", c.seed},
          {"out", c.out},
          {"ladder", c.ladder},
          {"phi", {{"kind", c.phi}, {"param", c.phi_param}}},
          {"deltas", c.deltas},
          {"h_grid", c.h_grid},
          {"input", c.input}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> keys = {
      "command", "diagnostic", "family", "params", "partition", "N",      "n_fine", "T",
      "stride",  "replicas",   "seed",   "out",    "ladder",    "phi",    "deltas", "h_grid",
      "input"};
  for (const auto& [k, v] : j.items())
    if (!one_of(k, keys)) throw ConfigFieldError(k, "unknown key");
  ExperimentConfig c;
  read_field(j, "command", c.command);
  read_field(j, "diagnostic", c.diagnostic);
  read_field(j, "family", c.family);
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw ConfigFieldError("params", "must be an object");
    for (const auto& [k, v] : p.items())
      if (!one_of(k, {"H", "K", "mu", "theta", "x0", "refine"}))
        throw ConfigFieldError("params." + k, "unknown key");
    read_field(p, "H", c.H);
    read_field(p, "K", c.K);
    read_field(p, "mu", c.mu);
    read_field(p, "theta", c.theta);
    read_field(p, "x0", c.x0);
    read_field(p, "refine", c.refine);
  }
  if (j.contains("partition")) {
    const json& p = j.at("partition");
    if (p.is_string()) {
      c.partition = p.get<std::string>();
    } else {
      if (!p.is_object()) throw ConfigFieldError("partition", "must be a string or an object");
      read_field(p, "kind", c.partition);
      read_field(p, "alpha", c.alpha);
      read_field(p, "cmax", c.cmax);
    }
  }
  read_field(j, "n_fine", c.N);
  read_field(j, "N", c.N);
  read_field(j, "T", c.T);
  read_field(j, "stride", c.stride);
  read_field(j, "replicas", c.replicas);
  read_field(j, "seed", c.seed);
  read_field(j, "out", c.out);
  read_field(j, "ladder", c.ladder);
  if (j.contains("phi")) {
    const json& p = j.at("phi");
    if (!p.is_object()) throw ConfigFieldError("phi", "must be an object");
    read_field(p, "kind", c.phi);
    read_field(p, "param", c.phi_param);
  }
  read_field(j, "deltas", c.deltas);
  read_field(j, "h_grid", c.h_grid);
  read_field(j, "input", c.input);
  return c;
}

ProcessSpec make_spec(const ExperimentConfig& c) {
  if (c.family == "fbm") return FBm{c.H};
  if (c.family == "subfbm") return SubFBm{c.H};
  if (c.family == "bifbm") return BiFBm{c.H, c.K};
  if (c.family == "fou") return FracOU{c.H, c.mu, c.theta, c.x0, c.refine};
  if (c.family == "bridge") return FBridge{c.H, c.T};
  throw ConfigFieldError("family", "must be one of " + joined(kFamilies));
}

Partition make_partition(const ExperimentConfig& c, std::size_t N) {
  if (c.partition == "regular") return make_regular(N, c.T);
  if (c.partition == "alternating") {
    if (N % 2 != 0) throw ConfigFieldError("N", "alternating partitions need an even N");
    return make_alternating(c.alpha, N / 2, c.T);
  }
  if (c.partition == "perturbed") return make_perturbed(N, c.T, c.cmax, c.seed);
  throw ConfigFieldError("partition", "must be one of " + joined(kPartitions));
}

PhiFunction make_phi(const ExperimentConfig& c) {
  try {
    if (c.phi == "power") return PhiFunction::power(c.phi_param);
    if (c.phi == "log_power") return PhiFunction::log_power(c.phi_param);
  } catch (const ParameterError& e) {
    throw ConfigFieldError("phi.param", e.what());
  }
  throw ConfigFieldError("phi", "must be power or log_power");
}

void validate(const ExperimentConfig& c) {
  require(one_of(c.command, kCommands), "command", "must be one of " + joined(kCommands));
  require(c.command != "diagnose" || one_of(c.diagnostic, kDiagnostics), "diagnostic",
          "must be one of " + joined(kDiagnostics));
  require(one_of(c.family, kFamilies), "family", "must be one of " + joined(kFamilies));
  require(c.H > 0 && c.H < 1, "H", "must lie in (0, 1)");
  require(c.K > 0 && c.K <= 1, "K", "must lie in (0, 1]");
  require(c.mu > 0 && std::isfinite(c.mu), "mu", "must be positive");
  require(c.theta > 0 && std::isfinite(c.theta), "theta", "must be positive");
  require(std::isfinite(c.x0), "x0", "must be finite");
  require(c.refine >= 1, "refine", "must be at least 1");
  require(one_of(c.partition, kPartitions), "partition", "must be one of " + joined(kPartitions));
  require(c.alpha > 0 && std::isfinite(c.alpha), "alpha", "must be positive");
  require(c.cmax >= 1 && std::isfinite(c.cmax), "cmax", "must be at least 1");
  require(c.T > 0 && std::isfinite(c.T), "T", "must be positive");
  require(c.N >= 3, "N", "must be at least 3");
  require(c.partition != "alternating" || (c.N % 2 == 0 && c.N >= 4), "N",
          "alternating partitions need an even N >= 4");
  require(c.replicas >= 1, "replicas", "must be at least 1");
  require(c.out.size() > 0, "out", "must not be empty");
  for (std::size_t N : c.ladder) {
    require(N >= 3, "ladder", "entries must be at least 3");
    require(c.partition != "alternating" || N % 2 == 0, "ladder",
            "alternating partitions need even entries");
  }
  for (double d : c.deltas) require(d > 0 && d <= c.T / 4, "deltas", "entries must lie in (0, T/4]");
  for (double h : c.h_grid) require(h > 0 && h < 1, "h_grid", "entries must lie in (0, 1)");
  make_phi(c);

  if (c.command == "estimate" || c.command == "mc") {
    require(c.stride >= 2, "stride", "must be at least 2");
    if (c.input.empty())
      require(c.N % c.stride == 0, "stride", "must divide N");
  }
  if (c.command == "mc") {
    require(c.replicas >= 2, "replicas", "mc needs at least 2 replicas");
    require(c.partition == "regular", "partition", "mc runs on regular grids");
  }
  if (c.command == "diagnose" && c.diagnostic == "remark")
    require(c.H > 0.5, "H", "remark check needs H > 1/2");
  if (!c.input.empty())
    require(c.command == "qv" || c.command == "estimate", "input", "only qv and estimate read paths");
  try {
    orey::validate(make_spec(c));
  } catch (const ParameterError& e) {
    throw ConfigFieldError("params", e.what());
  }
}

int run(const ExperimentConfig& c, std::ostream& out) {
  validate(c);
  if (c.command == "simulate") return run_simulate(c, out);
  if (c.command == "qv") return run_qv(c, out);
  if (c.command == "expect") return run_expect(c, out);
  if (c.command == "estimate") return run_estimate(c, out);
  if (c.command == "mc") return run_mc(c, out);
  return run_diagnose(c, out);
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order quadratic variations and Orey index estimation"};
  ExperimentConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> overrides;
  auto bind = [&](CLI::Option* opt, auto member) {
    overrides.emplace_back(opt, [&flags, member](ExperimentConfig& c) { c.*member = flags.*member; });
    return opt;
  };

  bind(app.add_option("command", flags.command, "simulate | qv | expect | estimate | mc | diagnose"),
       &ExperimentConfig::command);
  bind(app.add_option("diagnostic", flags.diagnostic, "lambda | remark | logratio | rowsum (diagnose)"),
       &ExperimentConfig::diagnostic);
  app.add_option("--config", config_path, "JSON configuration; flags override its fields");
  bind(app.add_option("--family", flags.family, "fbm | subfbm | bifbm | fou | bridge"),
       &ExperimentConfig::family);
  bind(app.add_option("--H", flags.H, "Hurst parameter"), &ExperimentConfig::H);
  bind(app.add_option("--K", flags.K, "bifractional K"), &ExperimentConfig::K);
  bind(app.add_option("--mu", flags.mu, "fO-U drift"), &ExperimentConfig::mu);
  bind(app.add_option("--theta", flags.theta, "fO-U noise scale"), &ExperimentConfig::theta);
  bind(app.add_option("--x0", flags.x0, "fO-U initial value"), &ExperimentConfig::x0);
  bind(app.add_option("--refine", flags.refine, "fO-U grid refinement factor"),
       &ExperimentConfig::refine);
  bind(app.add_option("--partition", flags.partition, "regular | alternating | perturbed"),
       &ExperimentConfig::partition);
  bind(app.add_option("--alpha", flags.alpha, "alternating step ratio"), &ExperimentConfig::alpha);
  bind(app.add_option("--cmax", flags.cmax, "perturbed step ratio bound"), &ExperimentConfig::cmax);
  bind(app.add_option("--N", flags.N, "number of steps"), &ExperimentConfig::N);
  bind(app.add_option("--T", flags.T, "horizon"), &ExperimentConfig::T);
  bind(app.add_option("--stride", flags.stride, "coarse/fine stride"), &ExperimentConfig::stride);
  bind(app.add_option("--replicas", flags.replicas, "number of paths"), &ExperimentConfig::replicas);
  bind(app.add_option("--seed", flags.seed, "master seed"), &ExperimentConfig::seed);
  bind(app.add_option("--out", flags.out, "output directory"), &ExperimentConfig::out);
  bind(app.add_option("--ladder", flags.ladder, "N values for expect")->delimiter(','),
       &ExperimentConfig::ladder);
  bind(app.add_option("--phi", flags.phi, "power | log_power"), &ExperimentConfig::phi);
  bind(app.add_option("--phi-param", flags.phi_param, "beta or alpha of phi"),
       &ExperimentConfig::phi_param);
  bind(app.add_option("--deltas", flags.deltas, "delta grid")->delimiter(','),
       &ExperimentConfig::deltas);
  bind(app.add_option("--h-grid", flags.h_grid, "h grid for logratio")->delimiter(','),
       &ExperimentConfig::h_grid);
  bind(app.add_option("--input", flags.input, "t,x path CSV for qv / estimate"),
       &ExperimentConfig::input);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("config", e.what(), "", kConfigFailure).dump() << '\n';
    return kConfigFailure;
  }

  try {
    ExperimentConfig c;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigFieldError("config", "cannot open " + config_path);
      json j;
      try {
        j = json::parse(is);
      } catch (const json::exception& e) {
        throw ConfigFieldError("config", std::string("invalid JSON: ") + e.what());
      }
      c = config_from_json(j);
    }
    for (const auto& [opt, apply] : overrides)
      if (opt->count() > 0) apply(c);
    validate(c);
    return run(c, out);
  } catch (const ConfigFieldError& e) {
    err << error_json(e.kind(), e.what(), e.field(), kConfigFailure).dump() << '\n';
    return kConfigFailure;
  } catch (const ConfigError& e) {
    err << error_json(e.kind(), e.what(), "", kConfigFailure).dump() << '\n';
    return kConfigFailure;
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what(), "", kComputationFailure).dump() << '\n';
    return kComputationFailure;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what(), "", kComputationFailure).dump() << '\n';
    return kComputationFailure;
  }
}

}  // namespace orey::cli
