#include "stvmanip/vote_gen.hpp"

#include <algorithm>

#include "stvmanip/errors.hpp"

namespace stvm {

namespace {

void check_shape(int m, int n) {
  if (m < 1) throw InvalidInput("need at least one candidate");
  if (n < 0) throw InvalidInput("negative number of agents");
}

void check_b(double b) {
  if (!(b >= 0.0)) throw InvalidInput("urn parameter b must be >= 0");
}

std::vector<Candidate> resolve_axis(int m, const std::vector<Candidate>& axis) {
  if (axis.empty()) return identity_ballot(m).ranking;
  if (!is_total_order(Ballot{axis}, m)) throw InvalidInput("axis is not a permutation of 1..m");
  return axis;
}

// Shared copy-or-fresh urn loop.
template <class Fresh>
Profile urn(int m, int n, double b, Rng& rng, Fresh&& fresh) {
  std::vector<Ballot> drawn;
  drawn.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    bool copy = false;
    if (t > 0 && b > 0.0) {
      const double tb = t * b;
      copy = rng.unit() < tb / (1.0 + tb);
    }
    if (copy)
      drawn.push_back(drawn[rng.below(static_cast<std::uint64_t>(t))]);
    else
      drawn.push_back(fresh());
  }
  Profile p(m);
  for (auto& ballot : drawn) p.add(std::move(ballot));
  return p;
}

}  // namespace

Ballot random_ballot(int m, Rng& rng) {
  Ballot b = identity_ballot(m);
  rng.shuffle(std::span<Candidate>(b.ranking));
  return b;
}

Profile gen_ic(int m, int n, Rng& rng) {
  check_shape(m, n);
  Profile p(m);
  for (int i = 0; i < n; ++i) p.add(random_ballot(m, rng));
  return p;
}

Profile gen_ic(int m, int n, RngSeed seed) {
  Rng rng(seed);
  return gen_ic(m, n, rng);
}

Profile gen_urn(int m, int n, double b, Rng& rng) {
  check_shape(m, n);
  check_b(b);
  return urn(m, n, b, rng, [&] { return random_ballot(m, rng); });
}

Profile gen_urn(int m, int n, double b, RngSeed seed) {
  Rng rng(seed);
  return gen_urn(m, n, b, rng);
}

Ballot random_single_peaked(const std::vector<Candidate>& axis, Rng& rng) {
  const auto m = static_cast<std::ptrdiff_t>(axis.size());
  Ballot out;
  out.ranking.reserve(axis.size());
  const auto peak = static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(m)));
  out.ranking.push_back(axis[peak]);
  std::ptrdiff_t left = peak - 1;
  std::ptrdiff_t right = peak + 1;
  while (left >= 0 || right < m) {
    bool take_left;
    if (left < 0)
      take_left = false;
    else if (right >= m)
      take_left = true;
    else
      take_left = rng.coin();
    out.ranking.push_back(take_left ? axis[left--] : axis[right++]);
  }
  return out;
}

bool is_single_peaked(const Ballot& ballot, const std::vector<Candidate>& axis) {
  const int m = static_cast<int>(axis.size());
  if (!is_total_order(ballot, m) || !is_total_order(Ballot{axis}, m)) return false;
  std::vector<int> pos(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i < m; ++i) pos[axis[i].id] = i;
  int lo = pos[ballot.ranking.front().id];
  int hi = lo;
  for (std::size_t k = 1; k < ballot.ranking.size(); ++k) {
    const int p = pos[ballot.ranking[k].id];
    if (p == lo - 1)
      lo = p;
    else if (p == hi + 1)
      hi = p;
    else
      return false;
  }
  return true;
}

Profile gen_single_peaked_urn(int m, int n, double b, const std::vector<Candidate>& axis, Rng& rng) {
  check_shape(m, n);
  check_b(b);
  const auto spectrum = resolve_axis(m, axis);
  return urn(m, n, b, rng, [&] { return random_single_peaked(spectrum, rng); });
}

Profile gen_single_peaked_urn(int m, int n, double b, const std::vector<Candidate>& axis,
                              RngSeed seed) {
  Rng rng(seed);
  return gen_single_peaked_urn(m, n, b, axis, rng);
}

Profile sample_dataset(const Profile& dataset, int target_m, int target_n, Rng& rng) {
  if (target_m < 1 || target_n < 1) throw InvalidInput("target m and n must be >= 1");
  if (dataset.empty()) throw InvalidInput("dataset has no ballots");
  const int m = dataset.m();

  std::vector<const Ballot*> agents;
  for (const auto& wb : dataset.ballots())
    for (Weight k = 0; k < wb.weight; ++k) agents.push_back(&wb.ballot);

  std::vector<const Ballot*> picked;
  if (static_cast<std::size_t>(target_n) <= agents.size()) {
    rng.shuffle(std::span<const Ballot*>(agents));
    picked.assign(agents.begin(), agents.begin() + target_n);
  } else {
    picked.reserve(static_cast<std::size_t>(target_n));
    for (int i = 0; i < target_n; ++i) picked.push_back(agents[rng.below(agents.size())]);
  }

  Profile out(target_m);
  if (target_m <= m) {
    std::vector<Candidate> pool = identity_ballot(m).ranking;
    rng.shuffle(std::span<Candidate>(pool));
    pool.resize(static_cast<std::size_t>(target_m));
    std::sort(pool.begin(), pool.end());
    std::vector<int> relabel(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 0; i < target_m; ++i) relabel[pool[i].id] = i + 1;
    for (const Ballot* src : picked) {
      Ballot b;
      b.ranking.reserve(static_cast<std::size_t>(target_m));
      for (Candidate c : src->ranking)
        if (relabel[c.id]) b.ranking.push_back(Candidate{relabel[c.id]});
      out.add(std::move(b));
    }
    return out;
  }

  // Clone blocks: original j owns ids first[j] .. first[j] + copies[j] - 1.
  std::vector<int> copies(static_cast<std::size_t>(m) + 1, target_m / m);
  for (int j = 1; j <= target_m % m; ++j) ++copies[j];
  std::vector<int> first(static_cast<std::size_t>(m) + 1, 1);
  for (int j = 2; j <= m; ++j) first[j] = first[j - 1] + copies[j - 1];

  for (const Ballot* src : picked) {
    Ballot b;
    b.ranking.reserve(static_cast<std::size_t>(target_m));
    for (Candidate c : src->ranking) {
      const auto start = b.ranking.size();
      for (int k = 0; k < copies[c.id]; ++k) b.ranking.push_back(Candidate{first[c.id] + k});
      rng.shuffle(std::span<Candidate>(b.ranking).subspan(start));
    }
    out.add(std::move(b));
  }
  return out;
}

Profile sample_dataset(const Profile& dataset, int target_m, int target_n, RngSeed seed) {
  Rng rng(seed);
  return sample_dataset(dataset, target_m, target_n, rng);
}

}  // namespace stvm
