#include <algorithm>

#include "doctest.h"
#include "stvmanip/errors.hpp"
#include "stvmanip/solver.hpp"
#include "stvmanip/vote_gen.hpp"
#include "test_util.hpp"

using namespace stvm;
using testutil::ballot;
using testutil::ids;
using testutil::profile;
using testutil::to_naive;

namespace {

bool contains(const std::vector<Candidate>& xs, Candidate c) {
  return std::find(xs.begin(), xs.end(), c) != xs.end();
}

const SolverOptions kAllOptions[] = {
    {TieBreak::lexicographic, BranchOrder::right_first},
    {TieBreak::lexicographic, BranchOrder::left_first},
    {TieBreak::optimistic, BranchOrder::right_first},
    {TieBreak::optimistic, BranchOrder::left_first},
};

}  // namespace

TEST_CASE("a lone manipulator elects anyone") {
  for (int m = 1; m <= 12; ++m)
    for (int c = 1; c <= m; ++c)
      for (const auto& opts : kAllOptions) {
        const Profile p(m);
        const auto out = manipulate_improved({p, Candidate{c}, 1}, opts);
        REQUIRE(out.manipulable);
        REQUIRE(out.witness);
        CHECK(witness_elects(p, *out.witness, 1, Candidate{c}, opts.tie_break));
      }
  CHECK(csl_possible_winners(Profile(3), 1).winners == ids({1, 2, 3}));
}

TEST_CASE("two candidates, one vote each") {
  const Profile p = profile(2, {{1, {1, 2}}, {1, {2, 1}}});
  const auto out = manipulate_improved({p, Candidate{2}, 1});
  REQUIRE(out.manipulable);
  CHECK(out.witness->ranking.front() == Candidate{2});
  CHECK(naive::manipulable(2, to_naive(p), 2, 1, false));
}

TEST_CASE("three candidates where the third trails badly") {
  const Profile p = profile(3, {{3, {1, 2, 3}}, {3, {2, 1, 3}}, {1, {3, 1, 2}}});
  const bool expected = naive::manipulable(3, to_naive(p), 3, 1, false);
  CHECK_FALSE(expected);
  for (const auto& opts : kAllOptions) {
    CHECK(manipulate_improved({p, Candidate{3}, 1}, opts).manipulable ==
          naive::manipulable(3, to_naive(p), 3, 1, opts.tie_break == TieBreak::optimistic));
  }
}

TEST_CASE("csl examples") {
  const Profile p = profile(2, {{2, {1, 2}}});
  CHECK(csl_possible_winners(p, 1).winners == ids({1}));
  CHECK(csl_possible_winners(p, 1, {TieBreak::optimistic, BranchOrder::right_first}).winners == ids({1}));
  CHECK(csl_possible_winners(p, 2, {TieBreak::optimistic, BranchOrder::right_first}).winners == ids({1, 2}));
}

TEST_CASE("reconstruct_witness layouts") {
  CHECK(reconstruct_witness({}, Candidate{2}, 3) == ballot({2, 1, 3}));
  const auto one = ids({3});
  CHECK(reconstruct_witness(one, Candidate{1}, 3) == ballot({3, 1, 2}));
  const auto two = ids({2, 3});
  CHECK(reconstruct_witness(two, Candidate{4}, 4) == ballot({2, 3, 4, 1}));
  const auto ends_on_chosen = ids({2, 4});
  CHECK(reconstruct_witness(ends_on_chosen, Candidate{4}, 4) == ballot({2, 4, 1, 3}));

  const auto dup = ids({2, 2});
  CHECK_THROWS_AS(reconstruct_witness(dup, Candidate{1}, 3), ContractViolation);
  const auto out_of_range = ids({5});
  CHECK_THROWS_AS(reconstruct_witness(out_of_range, Candidate{1}, 3), ContractViolation);
  const auto chosen_early = ids({1, 2});
  CHECK_THROWS_AS(reconstruct_witness(chosen_early, Candidate{1}, 3), ContractViolation);
}

TEST_CASE("bad queries") {
  const Profile p(3);
  CHECK_THROWS_AS(manipulate_improved({p, Candidate{0}, 1}), InvalidInput);
  CHECK_THROWS_AS(manipulate_improved({p, Candidate{4}, 1}), InvalidInput);
  CHECK_THROWS_AS(manipulate_improved({p, Candidate{1}, 0}), InvalidInput);
  CHECK_THROWS_AS(csl_possible_winners(p, 0), InvalidInput);
}

TEST_CASE("branch order names round-trip") {
  CHECK(parse_branch_order("left_first") == BranchOrder::left_first);
  CHECK(parse_branch_order("right") == BranchOrder::right_first);
  CHECK_THROWS_AS(parse_branch_order("middle"), InvalidInput);
}

TEST_CASE("property: agreement with naive brute force, CSL membership, dominance and replay") {
  Rng rng(404);
  int manipulable = 0;
  int total = 0;
  for (int iter = 0; iter < 1200; ++iter) {
    const int m = 1 + static_cast<int>(rng.below(6));
    const int n = static_cast<int>(rng.below(11));
    const Weight w = 1 + static_cast<Weight>(rng.below(2));
    const Profile p = gen_urn(m, n, iter % 2 ? 1.0 : 0.0, rng);
    const Candidate chosen{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m)))};
    const auto& opts = kAllOptions[iter % 4];
    const bool optimistic = opts.tie_break == TieBreak::optimistic;

    const auto out = manipulate_improved({p, chosen, w}, opts);
    const auto csl = csl_possible_winners(p, w, opts);
    const bool expected = naive::manipulable(m, to_naive(p), chosen.id, w, optimistic);
    CAPTURE(iter);
    REQUIRE(out.manipulable == expected);
    REQUIRE(contains(csl.winners, chosen) == expected);
    REQUIRE(out.stats.nodes <= csl.stats.nodes);
    REQUIRE(out.stats.nodes >= 1);
    if (out.manipulable) {
      REQUIRE(out.witness);
      REQUIRE(is_total_order(*out.witness, m));
      REQUIRE(witness_elects(p, *out.witness, w, chosen, opts.tie_break));
      ++manipulable;
    } else {
      REQUIRE_FALSE(out.witness);
    }
    ++total;
  }
  // Both outcomes actually occur in the sample.
  CHECK(manipulable > total / 10);
  CHECK(manipulable < total);
}

TEST_CASE("property: node counts are deterministic") {
  Rng rng(505);
  for (int iter = 0; iter < 50; ++iter) {
    const Profile p = gen_ic(10, 10, rng);
    const Candidate chosen{1 + static_cast<int>(rng.below(10))};
    for (const auto& opts : kAllOptions) {
      const auto a = manipulate_improved({p, chosen, 1}, opts);
      const auto b = manipulate_improved({p, chosen, 1}, opts);
      REQUIRE(a.stats.nodes == b.stats.nodes);
      REQUIRE(a.witness == b.witness);
      REQUIRE(a.stats.branch_order == opts.branch_order);
      REQUIRE(csl_possible_winners(p, 1, opts).stats.nodes == csl_possible_winners(p, 1, opts).stats.nodes);
    }
  }
}

TEST_CASE("deep recursion at m = 256") {
  Rng rng(606);
  const Profile p = gen_ic(256, 3, rng);
  const auto out = manipulate_improved({p, Candidate{200}, 1});
  if (out.manipulable) CHECK(witness_elects(p, *out.witness, 1, Candidate{200}, TieBreak::lexicographic));
  const auto alone = manipulate_improved({Profile(256), Candidate{17}, 1});
  REQUIRE(alone.manipulable);
  CHECK(witness_elects(Profile(256), *alone.witness, 1, Candidate{17}, TieBreak::lexicographic));
}
