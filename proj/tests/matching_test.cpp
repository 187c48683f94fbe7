#include "dispatchkit/matching.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace dispatchkit;

TEST_CASE("matching: single cell") {
  const MatchingResult r = max_weight_matching({{0.7}});
  CHECK(r.match == std::vector<int>{0});
  CHECK(r.total == doctest::Approx(0.7));
}

TEST_CASE("matching: diagonal") {
  const MatchingResult r = max_weight_matching({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(r.match == std::vector<int>{0, 1});
  CHECK(r.total == doctest::Approx(2.0));
}

TEST_CASE("matching: rectangular random vs exhaustive") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + static_cast<int>(rng.next_below(5));
    const int c = 1 + static_cast<int>(rng.next_below(7));
    std::vector<std::vector<double>> w(r, std::vector<double>(c));
    for (auto& row : w)
      for (double& x : row) x = rng.next_unit();
    const MatchingResult got = max_weight_matching(w);
    CHECK(got.total == doctest::Approx(testing::exhaustive_matching(w)).epsilon(0).scale(1e-9));
    // The reported matching must be consistent and injective.
    std::vector<bool> used(c, false);
    double total = 0.0;
    for (int i = 0; i < r; ++i) {
      if (got.match[i] < 0) continue;
      CHECK(!used[got.match[i]]);
      used[got.match[i]] = true;
      total += w[i][got.match[i]];
    }
    CHECK(total == doctest::Approx(got.total).epsilon(0).scale(1e-9));
  }
}

TEST_CASE("matching: 6x6 sweep vs exhaustive") {
  SplitMix64 rng(1000);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    std::vector<std::vector<double>> w(n, std::vector<double>(n));
    for (auto& row : w)
      for (double& x : row) x = rng.next_unit();
    CHECK(max_weight_matching(w).total ==
          doctest::Approx(testing::exhaustive_matching(w)).epsilon(0).scale(1e-9));
  }
}

TEST_CASE("matching: all-zero weights can stay unmatched") {
  const MatchingResult r = max_weight_matching({{0.0, 0.0}, {0.0, 0.0}});
  CHECK(r.total == 0.0);
}

TEST_CASE("matching: rejects negative weights") {
  CHECK_THROWS_AS(max_weight_matching({{-0.1}}), std::invalid_argument);
}

TEST_CASE("matching: must-match mode requires enough columns") {
  CHECK_THROWS_AS(max_weight_matching({{1.0}, {1.0}}, false), std::invalid_argument);
  const MatchingResult r = max_weight_matching({{0.3, 0.9}}, false);
  CHECK(r.match[0] == 1);
}
