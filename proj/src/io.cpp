#include "orey/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "orey/error.hpp"

namespace orey {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_provenance(std::ostream& os, const nlohmann::json& provenance) {
  if (provenance.is_null() || provenance.empty()) return;
  os << "# orey " << kVersion << ' ' << provenance.dump() << '\n';
}

void write_path_csv(std::ostream& os, const Path& path, const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i)
    os << format_number(path.partition.time(i)) << ',' << format_number(path.values[i]) << '\n';
}

void write_ensemble_csv(std::ostream& os, const std::vector<Path>& paths,
                        const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "replica,t,x\n";
  for (const auto& p : paths)
    for (std::size_t i = 0; i < p.values.size(); ++i)
      os << p.seeds.replica_index << ',' << format_number(p.partition.time(i)) << ','
         << format_number(p.values[i]) << '\n';
}

std::vector<std::pair<double, double>> read_path_csv(std::istream& is) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line != "t,x") throw IoError("expected header t,x");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("line " + std::to_string(lineno) + ": expected t,x");
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    char* end = nullptr;
    const double t = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end != '\0') throw IoError("line " + std::to_string(lineno) + ": bad t");
    const double x = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || *end != '\0') throw IoError("line " + std::to_string(lineno) + ": bad x");
    out.emplace_back(t, x);
  }
  if (!header) throw IoError("empty path file");
  return out;
}

void write_dmatrix_csv(std::ostream& os, const DMatrix& d, const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "j,k,value\n";
  for (std::size_t j = 0; j < d.size(); ++j)
    for (std::size_t k = j; k < d.size() && k <= j + d.bandwidth(); ++k)
      os << j + 1 << ',' << k + 1 << ',' << format_number(d(j, k)) << '\n';
}

nlohmann::json diagnostics_json(const DMatrix& d, const RowsumDiagnostic& rows, double eigen_bound) {
  return {{"N", d.size() + 1},
          {"p_n", d.mesh().p_n},
          {"m_n", d.mesh().m_n},
          {"max_rowsum", rows.max_rowsum},
          {"bound_ratio", rows.bound_ratio},
          {"eigen_bound", eigen_bound}};
}

nlohmann::json to_json(const EstimateResult& e) {
  return {{"gamma_hat", e.gamma_hat}, {"v_coarse", e.v_coarse}, {"v_fine", e.v_fine},
          {"p_fine", e.p_fine},       {"m_coarse", e.m_coarse}, {"log_scale", e.log_scale}};
}

nlohmann::json summary_json(const MCSummary& s) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : s.table)
    if (!r.ok) failures.push_back({{"replica", r.replica}, {"error", r.error}});
  return {{"replicas", s.replicas}, {"effective", s.effective}, {"true_gamma", s.true_gamma},
          {"mean", s.mean},         {"std", s.std},             {"rmse", s.rmse},
          {"bias", s.bias},         {"failures", failures}};
}

void write_replicas_csv(std::ostream& os, const MCSummary& s, const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "replica,gamma_hat,v_coarse,v_fine\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : s.table) {
    os << r.replica << ',' << format_number(r.ok ? r.estimate.gamma_hat : nan) << ','
       << format_number(r.ok ? r.estimate.v_coarse : nan) << ','
       << format_number(r.ok ? r.estimate.v_fine : nan) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepReport& r, const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "delta,lambda,paper_bound,pass\n";
  for (const auto& row : r.rows)
    os << format_number(row.delta) << ',' << format_number(row.lambda) << ','
       << format_number(row.bound) << ',' << (row.pass ? 1 : 0) << '\n';
}

void write_remark_csv(std::ostream& os, const RemarkReport& r, const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "delta,sup,constant,pass\n";
  for (const auto& row : r.rows)
    os << format_number(row.delta) << ',' << format_number(row.sup) << ','
       << format_number(row.constant) << ',' << (row.pass ? 1 : 0) << '\n';
}

void write_log_ratio_csv(std::ostream& os, const std::vector<LogRatioRow>& rows,
                         const nlohmann::json& provenance) {
  write_provenance(os, provenance);
  os << "h,sup,inf,origin\n";
  for (const auto& row : rows)
    os << format_number(row.h) << ',' << format_number(row.sup) << ',' << format_number(row.inf)
       << ',' << format_number(row.origin) << '\n';
}

}  // namespace orey
