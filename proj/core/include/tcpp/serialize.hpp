#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tcpp/timechange.hpp"
#include "tcpp/verify.hpp"

/// CSV and JSON forms of tables, reports and campaign files.
namespace tcpp::io {

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double v);

/// Columns k, value, stderr (stderr empty unless the table is Monte Carlo).
void write_pmf_csv(std::ostream& out, const PmfTable& table);
/// Table with its metadata: spec, t, lambda, method, kmax, tail_bound,
/// total, the values (and stderrs), seed and count for Monte Carlo tables,
/// and the tolerances used otherwise.
std::string pmf_json(const PmfTable& table, const PmfOptions& opts);

std::string report_json(const verify::ResidualReport& report);

struct VerifyRequest {
  std::string equation_id;
  verify::Params params;
  verify::GridSpec grid;
  /// Empty: the registry default.
  std::vector<int> k_range;
};

struct Campaign {
  std::vector<VerifyRequest> requests;
  /// Empty unless the file names one.
  std::string out_dir;
};

/// A campaign is a JSON array of requests
/// {"equation_id": "prop3.1(2)", "params": {...}, "grid": {...}, "k_range": [...]},
/// or an object {"requests": [...], "out_dir": "..."}. Only equation_id is
/// required; missing grid fields take the registry grid. Every id is
/// checked before anything runs. Throws InputError on malformed input or
/// unknown ids.
Campaign parse_campaign(std::string_view json_text);

/// Columns equation_id, finest_residual, order, pass.
void write_summary_csv(std::ostream& out, const std::vector<verify::ResidualReport>& reports);

}  // namespace tcpp::io
