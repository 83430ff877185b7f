#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "mcme/citm_search.hpp"
#include "mcme/dataset.hpp"
#include "mcme/eemi_search.hpp"
#include "mcme/errors.hpp"
#include "mcme/rng.hpp"
#include "test_support.hpp"

using mcme::CitmParams;
using mcme::Dataset;
using mcme::EemiParams;
using mcme::ErrorKind;
using mcme::TraceEvent;
using test_support::throws_kind;

namespace {

int32_t flip(int32_t v, double p, uint64_t seed, uint64_t stream, uint64_t i) {
  return mcme::uniform01(seed, stream, i) < p ? 1 - v : v;
}

// Target (index 0) with three noisy copies at increasing noise and one pure
// noise column (index 4).
Dataset star_data(int n, uint64_t seed) {
  std::vector<int32_t> t(n), c1(n), c2(n), c3(n), d(n);
  for (int i = 0; i < n; ++i) {
    t[i] = mcme::uniform01(seed, 0, i) < 0.5 ? 0 : 1;
    c1[i] = flip(t[i], 0.05, seed, 1, i);
    c2[i] = flip(t[i], 0.15, seed, 2, i);
    c3[i] = flip(t[i], 0.30, seed, 3, i);
    d[i] = mcme::uniform01(seed, 4, i) < 0.5 ? 0 : 1;
  }
  return mcme::make_dataset({"t", "c1", "c2", "c3", "d"}, {2, 2, 2, 2, 2},
                            {t, c1, c2, c3, d});
}

Dataset independent_data(int n, uint64_t seed, int vars) {
  std::vector<std::vector<int32_t>> cols(vars, std::vector<int32_t>(n));
  std::vector<std::string> names;
  std::vector<int> cards(vars, 2);
  for (int v = 0; v < vars; ++v) {
    names.push_back("n" + std::to_string(v));
    for (int i = 0; i < n; ++i)
      cols[v][i] = mcme::uniform01(seed, v, i) < 0.5 ? 0 : 1;
  }
  return mcme::make_dataset(names, cards, cols);
}

int max_round_occupancy(const std::vector<TraceEvent>& trace) {
  int cur = 0, peak = 0;
  for (const auto& e : trace) {
    if (e.kind == TraceEvent::Kind::Add) peak = std::max(peak, ++cur);
    if (e.kind == TraceEvent::Kind::Remove) --cur;
    if (e.kind == TraceEvent::Kind::Erase) cur = 0;
  }
  return peak;
}

}  // namespace

TEST_CASE("ci search with zero rounds returns everything as residual") {
  Dataset d = star_data(500, 1);
  auto r = mcme::citm(d, 0, {1, 2, 3, 4}, {0, 1, 0.01});
  CHECK(r.cpc.empty());
  CHECK(r.residual == std::vector<int>{1, 2, 3, 4});
  CHECK(r.trace.empty());
}

TEST_CASE("ci search recovers a three-child star across erase rounds at capacity one") {
  Dataset d = star_data(5000, 2);
  auto r = mcme::citm(d, 0, {1, 2, 3, 4}, {3, 1, 0.01});
  std::set<int> got(r.cpc.begin(), r.cpc.end());
  CHECK(got == std::set<int>{1, 2, 3});
  // One accepted node per round, strongest association first.
  CHECK(r.cpc == std::vector<int>{1, 2, 3});
  CHECK(r.residual == std::vector<int>{4});
}

TEST_CASE("ci search round occupancy never exceeds the memory capacity") {
  Dataset d = star_data(3000, 3);
  for (int memory : {1, 2}) {
    auto r = mcme::citm(d, 0, {1, 2, 3, 4}, {3, memory, 0.01});
    CHECK(max_round_occupancy(r.trace) <= memory);
  }
}

TEST_CASE("ci search erase count stays within the round budget") {
  Dataset d = star_data(3000, 4);
  auto r = mcme::citm(d, 0, {1, 2, 3, 4}, {2, 1, 0.01});
  int erases = 0;
  for (const auto& e : r.trace)
    if (e.kind == TraceEvent::Kind::Erase) ++erases;
  CHECK(erases <= 2);
  CHECK(r.cpc.size() == 2);  // two rounds, one acceptance each
}

TEST_CASE("ci search shrink removes a grow pick that later additions explain away") {
  // B, C are biased coins, x = xor(B, C), and both A and the target are 2%
  // noisy reads of x. A alone carries the most marginal signal, so grow
  // takes it first; B and C then each clear the test given the current set;
  // once both true inputs are in, the target is separated from A, and the
  // shrink pass removes it. Capacity 3 is above the typical bound, which
  // the search allows with a warning.
  int n = 4000;
  uint64_t seed = 5;
  std::vector<int32_t> b(n), c(n), a(n), t(n);
  for (int i = 0; i < n; ++i) {
    b[i] = mcme::uniform01(seed, 0, i) < 0.8 ? 0 : 1;
    c[i] = mcme::uniform01(seed, 1, i) < 0.8 ? 0 : 1;
    int32_t x = b[i] ^ c[i];
    a[i] = flip(x, 0.02, seed, 2, i);
    t[i] = flip(x, 0.02, seed, 3, i);
  }
  Dataset d = mcme::make_dataset({"b", "c", "a", "t"}, {2, 2, 2, 2},
                                 {b, c, a, t});
  auto r = mcme::citm(d, 3, {0, 1, 2}, {1, 3, 0.01});
  std::set<int> got(r.cpc.begin(), r.cpc.end());
  CHECK(got == std::set<int>{0, 1});
  bool removed_a = false;
  for (const auto& e : r.trace)
    if (e.kind == TraceEvent::Kind::Remove && e.var == 2) removed_a = true;
  CHECK(removed_a);
}

TEST_CASE("ci search leaves independent noise untouched") {
  Dataset d = independent_data(3000, 77, 6);
  auto r = mcme::citm(d, 0, {1, 2, 3, 4, 5}, {2, 1, 0.01});
  CHECK(r.cpc.empty());
  CHECK(r.residual.size() == 5);
}

TEST_CASE("ci search is deterministic") {
  Dataset d = star_data(2000, 6);
  auto a = mcme::citm(d, 0, {1, 2, 3, 4}, {3, 1, 0.01});
  auto b = mcme::citm(d, 0, {1, 2, 3, 4}, {3, 1, 0.01});
  CHECK(a.cpc == b.cpc);
  CHECK(a.residual == b.residual);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].kind == b.trace[i].kind);
    CHECK(a.trace[i].var == b.trace[i].var);
    CHECK(a.trace[i].p == b.trace[i].p);
  }
}

TEST_CASE("ci search validates its arguments") {
  Dataset d = star_data(100, 7);
  CHECK(throws_kind(ErrorKind::Argument,
                    [&] { mcme::citm(d, 0, {0, 1}, {1, 1, 0.01}); }));
  CHECK(throws_kind(ErrorKind::Argument,
                    [&] { mcme::citm(d, 0, {1}, {1, 0, 0.01}); }));
}

TEST_CASE("screening with zero iterations selects nothing") {
  Dataset d = star_data(500, 8);
  auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {0, 1, 0.1});
  CHECK(r.cpc.empty());
  CHECK(r.residual == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("screening selects the strongest candidates in descending order") {
  Dataset d = star_data(5000, 9);
  auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {5, 1, 0.15});
  // c1 (5% noise) then c2 (15% noise); c3 at 30% noise sits under 0.15.
  CHECK(r.cpc == std::vector<int>{1, 2});
  bool stopped = false;
  for (const auto& e : r.trace)
    if (e.kind == TraceEvent::Kind::Stop) stopped = true;
  CHECK(stopped);
}

TEST_CASE("screening iteration budget caps selections") {
  Dataset d = star_data(5000, 10);
  auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {2, 1, 0.05});
  CHECK(r.cpc.size() == 2);
}

TEST_CASE("screening with zero memory ignores candidate order") {
  Dataset d = star_data(4000, 11);
  auto a = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {3, 0, 0.1});
  auto b = mcme::eemi_search(d, 0, {4, 3, 2, 1}, {3, 0, 0.1});
  std::set<int> sa(a.cpc.begin(), a.cpc.end());
  std::set<int> sb(b.cpc.begin(), b.cpc.end());
  CHECK(sa == sb);
  CHECK(a.cpc == b.cpc);  // picks are value-ordered, not list-ordered
}

TEST_CASE("screening at unit memory erases before every later pick") {
  Dataset d = star_data(4000, 12);
  auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {3, 1, 0.1});
  // After each acceptance the next iteration starts by erasing, so every
  // pick is unconditional: the result matches the zero-memory run.
  auto unconditional = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {3, 0, 0.1});
  CHECK(r.cpc == unconditional.cpc);
  int erases = 0;
  for (const auto& e : r.trace)
    if (e.kind == TraceEvent::Kind::Erase) ++erases;
  CHECK(erases >= static_cast<int>(r.cpc.size()) - 1);
}

TEST_CASE("raising the screening threshold never enlarges the selection") {
  Dataset d = star_data(5000, 13);
  size_t prev = 100;
  for (double alpha : {0.05, 0.15, 0.45, 0.80}) {
    auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {5, 0, alpha});
    CHECK(r.cpc.size() <= prev);
    prev = r.cpc.size();
  }
  // End points pin the property: permissive keeps three, strict keeps none.
  CHECK(mcme::eemi_search(d, 0, {1, 2, 3, 4}, {5, 0, 0.05}).cpc.size() == 3);
  CHECK(mcme::eemi_search(d, 0, {1, 2, 3, 4}, {5, 0, 0.80}).cpc.empty());
}

TEST_CASE("screening rejects independent noise at a fixed seed") {
  Dataset d = independent_data(5000, 14, 5);
  auto r = mcme::eemi_search(d, 0, {1, 2, 3, 4}, {3, 1, 0.3});
  CHECK(r.cpc.empty());
  CHECK(r.residual.size() == 4);
}

TEST_CASE("screening validates its arguments") {
  Dataset d = star_data(100, 15);
  CHECK(throws_kind(ErrorKind::Argument, [&] {
    mcme::eemi_search(d, 0, {0, 1}, {1, 1, 0.5});
  }));
  CHECK(throws_kind(ErrorKind::Argument, [&] {
    mcme::eemi_search(d, 0, {1}, {1, -1, 0.5});
  }));
}
