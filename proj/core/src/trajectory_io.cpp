#include "dto/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dto/errors.hpp"

namespace dto {

namespace {

void append_series(std::string& header, const char* prefix, std::size_t count) {
  for (std::size_t k = 1; k <= count; ++k) {
    header += ',';
    header += prefix;
    header += std::to_string(k);
  }
}

void append_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) out << ',' << format_double(v(k));
}

std::size_t widest_constraint_set(const Trajectory& traj) {
  std::size_t q = 0;
  if (!traj.records.empty()) {
    for (const AgentRecord& r : traj.records.front()) q = std::max(q, r.margins.size());
  }
  return q;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("failed to format double");
  return std::string(buf, end);
}

std::string agent_csv_header(std::size_t dimension, std::size_t constraint_count) {
  std::string h = "t,agent";
  append_series(h, "x_", dimension);
  append_series(h, "s_", dimension);
  append_series(h, "u1_", dimension);
  append_series(h, "u2_", dimension);
  append_series(h, "g_margin_", constraint_count);
  append_series(h, "d_", dimension);
  return h;
}

void write_agent_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t q = widest_constraint_set(traj);
  out << agent_csv_header(traj.dimension, q) << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (std::size_t i = 0; i < traj.records[k].size(); ++i) {
      const AgentRecord& r = traj.records[k][i];
      out << format_double(traj.times[k]) << ',' << i + 1;
      append_vector(out, r.x);
      append_vector(out, r.s);
      append_vector(out, r.u1);
      append_vector(out, r.u2);
      for (std::size_t j = 0; j < q; ++j) {
        out << ',';
        if (j < r.margins.size()) out << format_double(r.margins[j]);
      }
      append_vector(out, r.disturbance);
      out << '\n';
    }
  }
}

void write_summary_csv(const Trajectory& traj, std::ostream& out) {
  out << kSummaryCsvHeader << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.times[k]) << ',' << format_double(traj.consensus_error[k]) << ','
        << format_double(traj.tracking_error_true[k]) << ','
        << format_double(traj.tracking_error_penalized[k]) << ','
        << format_double(traj.global_cost[k]) << ',' << format_double(traj.manifold_norm[k])
        << '\n';
  }
}

void write_agent_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_agent_csv(trajectory, out);
  if (!out) throw Error("write to " + path.string() + " failed");
}

void write_summary_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_summary_csv(trajectory, out);
  if (!out) throw Error("write to " + path.string() + " failed");
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV");
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) table.header.push_back(field);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!field.empty()) {
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
          throw Error("bad number '" + std::string(field) + "' on CSV line " +
                      std::to_string(line_no));
        }
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row.size() != table.header.size()) {
      throw Error("CSV line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                  " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace dto
