#pragma once

// Text formats.
//
// Profile file:
//   m <int>
//   <weight>: <id> <id> ... <id>      (exactly m ids, each 1..m once)
//   # comment lines and blank lines are ignored
//
// Result CSV: fixed header kResultCsvHeader, one row per measurement point.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stvmanip/election.hpp"

namespace stvm {

/// Throws ParseError naming the offending line.
Profile parse_profile(std::string_view text);

/// Canonical form: "m <m>" then "<weight>: c1 ... cm" per ballot, LF endings.
std::string write_profile(const Profile& profile);

Profile read_profile_file(const std::filesystem::path& path);
void write_profile_file(const Profile& profile, const std::filesystem::path& path);

inline constexpr std::string_view kResultCsvHeader =
    "model,m,n,w,b,trials,tie_break,branch_order,p_manip,mean_nodes,median_nodes,p90_nodes,"
    "mean_time_ms,seed";

struct ResultRow {
  std::string model;  ///< "<vote model>/<algorithm>", e.g. "ic/improved"
  int m = 0;
  int n = 0;
  std::int64_t w = 1;
  double b = 0.0;
  int trials = 0;
  std::string tie_break;
  std::string branch_order;
  double p_manip = 0.0;
  double mean_nodes = 0.0;
  double median_nodes = 0.0;
  double p90_nodes = 0.0;
  double mean_time_ms = 0.0;  ///< NaN when timing was not recorded
  std::uint64_t seed = 0;
};

/// Floating columns are printed with 6 significant digits.
std::string format_result_row(const ResultRow& row);

/// Appends one line to `path`, writing the header first if the file is empty
/// or missing. Throws std::runtime_error on I/O failure.
void append_result_row(const ResultRow& row, const std::filesystem::path& path);

/// Header plus rows, as one string.
std::string format_result_csv(const std::vector<ResultRow>& rows);

/// Inverse of format_result_csv. Throws ParseError on a bad header or row.
std::vector<ResultRow> parse_result_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace stvm
