#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "stvmanip/dataset_io.hpp"
#include "stvmanip/errors.hpp"
#include "stvmanip/vote_gen.hpp"
#include "test_util.hpp"

using namespace stvm;
using testutil::profile;

namespace {

void check_parse_error(std::string_view text, ParseErrorKind kind, std::size_t line) {
  try {
    parse_profile(text);
    FAIL("no error for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.kind() == kind);
    CHECK(e.line() == line);
  }
}

ResultRow sample_row(int i) {
  ResultRow r;
  r.model = "ic/improved";
  r.m = 16;
  r.n = 16 + i;
  r.w = 2;
  r.b = 0.5;
  r.trials = 1000;
  r.tie_break = "lexicographic";
  r.branch_order = "right_first";
  r.p_manip = 0.4321;
  r.mean_nodes = 49.5123456789;
  r.median_nodes = 17;
  r.p90_nodes = 101.25;
  r.mean_time_ms = i == 0 ? std::nan("") : 0.0123456;
  r.seed = 18446744073709551615ULL;
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / ("stvm_io_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("parse_profile") {
  CHECK(parse_profile("m 3\n2: 1 2 3\n1: 3 2 1\n") == profile(3, {{2, {1, 2, 3}}, {1, {3, 2, 1}}}));
  CHECK(parse_profile("# header comment\n\nm 2\n  1 :  2   1 \r\n# trailing\n") == profile(2, {{1, {2, 1}}}));
  CHECK(parse_profile("m 4\n") == Profile(4));
}

TEST_CASE("parse_profile errors name the line") {
  check_parse_error("m 3\n1: 1 1 2\n", ParseErrorKind::duplicate_candidate, 2);
  check_parse_error("m 3\n1: 1 2\n", ParseErrorKind::wrong_length, 2);
  check_parse_error("m 3\n1: 1 2 3 1\n", ParseErrorKind::duplicate_candidate, 2);
  check_parse_error("m 3\n1: 1 2 3\n1: 1 2 4\n", ParseErrorKind::unknown_candidate, 3);
  check_parse_error("m 3\n0: 1 2 3\n", ParseErrorKind::bad_weight, 2);
  check_parse_error("m 3\nx: 1 2 3\n", ParseErrorKind::bad_weight, 2);
  check_parse_error("m 3\n1 2 3\n", ParseErrorKind::malformed_line, 2);
  check_parse_error("m 3\n1: 1 b 3\n", ParseErrorKind::malformed_line, 2);
  check_parse_error("1: 1 2 3\n", ParseErrorKind::malformed_header, 1);
  check_parse_error("# only a comment\nm zero\n", ParseErrorKind::malformed_header, 2);
  check_parse_error("m 0\n", ParseErrorKind::malformed_header, 1);
  check_parse_error("", ParseErrorKind::malformed_header, 1);
}

TEST_CASE("write_profile is canonical") {
  CHECK(write_profile(profile(3, {{2, {1, 2, 3}}, {1, {3, 2, 1}}})) == "m 3\n2: 1 2 3\n1: 3 2 1\n");
  CHECK(write_profile(Profile(2)) == "m 2\n");
  CHECK(write_profile(parse_profile("m 2\n  1 :  2   1 \n")) == "m 2\n1: 2 1\n");
}

TEST_CASE("property: profile round trip") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    Rng rng(s);
    const int m = 1 + static_cast<int>(rng.below(12));
    const int n = static_cast<int>(rng.below(20));
    Profile p = gen_urn(m, n, 1.0, rng);
    Profile weighted(m);
    for (const auto& wb : p.ballots()) weighted.add(wb.ballot, 1 + static_cast<Weight>(rng.below(5)));
    for (const Profile* q : {&p, &weighted}) {
      const std::string text = write_profile(*q);
      REQUIRE(parse_profile(text) == *q);
      REQUIRE(write_profile(parse_profile(text)) == text);
    }
  }
}

TEST_CASE("profile files") {
  TempDir dir;
  const auto path = dir.path / "p.txt";
  const Profile p = profile(3, {{2, {1, 2, 3}}, {1, {3, 2, 1}}});
  write_profile_file(p, path);
  CHECK(read_profile_file(path) == p);
  CHECK_THROWS(read_profile_file(dir.path / "missing.txt"));
}

TEST_CASE("result rows") {
  const std::string line = format_result_row(sample_row(0));
  CHECK(line == "ic/improved,16,16,2,0.5,1000,lexicographic,right_first,0.4321,49.5123,17,101.25,nan,"
                "18446744073709551615");

  TempDir dir;
  const auto path = dir.path / "r.csv";
  append_result_row(sample_row(0), path);
  append_result_row(sample_row(1), path);
  const std::string text = read_text_file(path);
  CHECK(text.rfind(std::string(kResultCsvHeader) + "\n", 0) == 0);
  CHECK(text == format_result_csv({sample_row(0), sample_row(1)}));

  const auto rows = parse_result_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 16);
  CHECK(rows[1].n == 17);
  CHECK(std::isnan(rows[0].mean_time_ms));
  CHECK(rows[1].mean_time_ms == doctest::Approx(0.0123456).epsilon(1e-9));
  CHECK(rows[1].mean_nodes == 49.5123);
  CHECK(rows[1].seed == 18446744073709551615ULL);
  CHECK(rows[1].model == "ic/improved");
  // Reformatting parsed rows is a fixed point.
  CHECK(format_result_csv(rows) == text);

  CHECK_THROWS_AS(parse_result_csv("model,m\n"), ParseError);
  CHECK_THROWS_AS(parse_result_csv(std::string(kResultCsvHeader) + "\nic,1,2\n"), ParseError);
}

TEST_CASE("append to an unwritable path fails loudly") {
  CHECK_THROWS(append_result_row(sample_row(0), "/nonexistent-dir/x/r.csv"));
}
