#pragma once

// CSV / JSON writers shared by the CLI. Numbers use 17 significant digits,
// '.' as decimal separator and LF line endings.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "orey/conditions.hpp"
#include "orey/estimator.hpp"
#include "orey/quadvar.hpp"
#include "orey/sampler.hpp"

namespace orey {

inline constexpr const char* kVersion = "0.1.0";

/// "%.17g" formatting.
std::string format_number(double x);

/// "# orey <version> <compact json>" line; empty provenance writes nothing.
void write_provenance(std::ostream& os, const nlohmann::json& provenance);

/// Columns t,x.
void write_path_csv(std::ostream& os, const Path& path, const nlohmann::json& provenance = {});
/// Long format replica,t,x.
void write_ensemble_csv(std::ostream& os, const std::vector<Path>& paths,
                        const nlohmann::json& provenance = {});
/// Reads t,x columns, skipping '#' lines.
std::vector<std::pair<double, double>> read_path_csv(std::istream& is);

/// Upper triangle j,k,value (1-based increment indices), band only.
void write_dmatrix_csv(std::ostream& os, const DMatrix& d, const nlohmann::json& provenance = {});

nlohmann::json diagnostics_json(const DMatrix& d, const RowsumDiagnostic& rows, double eigen_bound);

nlohmann::json to_json(const EstimateResult& e);
nlohmann::json summary_json(const MCSummary& s);
/// Columns replica,gamma_hat,v_coarse,v_fine (failed replicas carry nan).
void write_replicas_csv(std::ostream& os, const MCSummary& s, const nlohmann::json& provenance = {});

void write_sweep_csv(std::ostream& os, const SweepReport& r, const nlohmann::json& provenance = {});
void write_remark_csv(std::ostream& os, const RemarkReport& r, const nlohmann::json& provenance = {});
void write_log_ratio_csv(std::ostream& os, const std::vector<LogRatioRow>& rows,
                         const nlohmann::json& provenance = {});

}  // namespace orey
