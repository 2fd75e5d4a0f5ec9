#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dto/sim.hpp"

namespace dto {

/// Header of the per-agent CSV for dimension n and q constraints:
/// t,agent,x_1..x_n,s_1..s_n,u1_1..u1_n,u2_1..u2_n,g_margin_1..g_margin_q,d_1..d_n
std::string agent_csv_header(std::size_t dimension, std::size_t constraint_count);

inline constexpr const char* kSummaryCsvHeader =
    "t,consensus_error,tracking_err_true,tracking_err_penalized,global_cost,manifold_norm";

/// One row per recorded time per agent (agent is 1-based). Agents with fewer
/// constraints than the widest one leave the trailing margin fields empty.
void write_agent_csv(const Trajectory& trajectory, std::ostream& out);
void write_summary_csv(const Trajectory& trajectory, std::ostream& out);

void write_agent_csv(const Trajectory& trajectory, const std::filesystem::path& path);
void write_summary_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  /// Empty fields parse as NaN.
  std::vector<std::vector<double>> rows;
};

/// Minimal reader for the numeric CSVs written above.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace dto
