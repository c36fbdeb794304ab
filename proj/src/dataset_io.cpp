#include "stvmanip/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stvmanip/errors.hpp"

namespace stvm {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Profile parse_profile(std::string_view text) {
  const auto lines = split_lines(text);
  int m = 0;
  bool have_header = false;
  Profile profile;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      const auto tok = split_ws(line);
      if (tok.size() != 2 || tok[0] != "m" || !parse_int(tok[1], m) || m < 1)
        throw ParseError(ParseErrorKind::malformed_header, lineno, "expected 'm <positive int>'");
      profile = Profile(m);
      have_header = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(ParseErrorKind::malformed_line, lineno, "expected '<weight>: <ids>'");
    Weight weight = 0;
    if (!parse_int(trim(line.substr(0, colon)), weight) || weight < 1)
      throw ParseError(ParseErrorKind::bad_weight, lineno, "weight must be an integer >= 1");

    Ballot ballot;
    std::vector<char> seen(static_cast<std::size_t>(m) + 1, 0);
    for (auto tok : split_ws(line.substr(colon + 1))) {
      int id = 0;
      if (!parse_int(tok, id))
        throw ParseError(ParseErrorKind::malformed_line, lineno, "'" + std::string(tok) + "'");
      if (id < 1 || id > m)
        throw ParseError(ParseErrorKind::unknown_candidate, lineno, std::to_string(id));
      if (seen[id]) throw ParseError(ParseErrorKind::duplicate_candidate, lineno, std::to_string(id));
      seen[id] = 1;
      ballot.ranking.push_back(Candidate{id});
    }
    if (ballot.ranking.size() != static_cast<std::size_t>(m))
      throw ParseError(ParseErrorKind::wrong_length, lineno,
                       "expected " + std::to_string(m) + " ids, got " +
                           std::to_string(ballot.ranking.size()));
    profile.add(std::move(ballot), weight);
  }
  if (!have_header) throw ParseError(ParseErrorKind::malformed_header, lines.size() + 1, "missing 'm <int>'");
  return profile;
}

std::string write_profile(const Profile& profile) {
  std::string out = "m " + std::to_string(profile.m()) + "\n";
  for (const auto& wb : profile.ballots()) {
    out += std::to_string(wb.weight);
    out += ": ";
    out += format_ballot(wb.ballot);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading " + path.string());
  return ss.str();
}

Profile read_profile_file(const std::filesystem::path& path) { return parse_profile(read_text_file(path)); }

void write_profile_file(const Profile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << write_profile(profile);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::string format_result_row(const ResultRow& r) {
  std::string s;
  s += r.model + ',' + std::to_string(r.m) + ',' + std::to_string(r.n) + ',' + std::to_string(r.w) +
       ',' + fmt_double(r.b) + ',' + std::to_string(r.trials) + ',' + r.tie_break + ',' +
       r.branch_order + ',' + fmt_double(r.p_manip) + ',' + fmt_double(r.mean_nodes) + ',' +
       fmt_double(r.median_nodes) + ',' + fmt_double(r.p90_nodes) + ',' + fmt_double(r.mean_time_ms) +
       ',' + std::to_string(r.seed);
  return s;
}

void append_result_row(const ResultRow& row, const std::filesystem::path& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for appending");
  if (fresh) out << kResultCsvHeader << '\n';
  out << format_result_row(row) << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::string format_result_csv(const std::vector<ResultRow>& rows) {
  std::string out(kResultCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_result_row(r);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_result_csv(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<ResultRow> rows;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (!have_header) {
      if (line != kResultCsvHeader)
        throw ParseError(ParseErrorKind::malformed_header, i + 1, "unexpected CSV header");
      have_header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 14) throw ParseError(ParseErrorKind::malformed_line, i + 1, "expected 14 fields");
    ResultRow r;
    const auto num = [&](std::string_view s) {
      const std::string tmp(s);
      char* end = nullptr;
      const double v = std::strtod(tmp.c_str(), &end);
      if (tmp.empty() || *end != '\0')
        throw ParseError(ParseErrorKind::malformed_line, i + 1, "bad number '" + tmp + "'");
      return v;
    };
    const auto integer = [&](std::string_view s, auto& out) {
      if (!parse_int(s, out))
        throw ParseError(ParseErrorKind::malformed_line, i + 1, "bad integer '" + std::string(s) + "'");
    };
    r.model = std::string(f[0]);
    integer(f[1], r.m);
    integer(f[2], r.n);
    integer(f[3], r.w);
    r.b = num(f[4]);
    integer(f[5], r.trials);
    r.tie_break = std::string(f[6]);
    r.branch_order = std::string(f[7]);
    r.p_manip = num(f[8]);
    r.mean_nodes = num(f[9]);
    r.median_nodes = num(f[10]);
    r.p90_nodes = num(f[11]);
    r.mean_time_ms = num(f[12]);
    integer(f[13], r.seed);
    rows.push_back(std::move(r));
  }
  if (!have_header) throw ParseError(ParseErrorKind::malformed_header, 1, "empty CSV");
  return rows;
}

}  // namespace stvm
