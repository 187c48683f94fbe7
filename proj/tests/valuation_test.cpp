#include "dispatchkit/valuation.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace dispatchkit;

namespace {

// The running three-driver example: a=(1,0.9), b=(0.2,0.9), c=(1,0.5).
DriverView abc() {
  DriverView v;
  v.push(1.0, 0.9, 0);
  v.push(0.2, 0.9, 1);
  v.push(1.0, 0.5, 2);
  return v;
}

DriverView pick(const DriverView& v, std::initializer_list<int> positions) {
  std::vector<int> p(positions);
  return v.subset(p);
}

}  // namespace

TEST_CASE("fa_value matches the worked three-driver example to 1e-12") {
  const DriverView v = abc();
  CHECK(fa_value(pick(v, {0})) == doctest::Approx(0.9).epsilon(0).scale(1e-12));
  CHECK(fa_value(pick(v, {0, 1})) == doctest::Approx(0.594).epsilon(0).scale(1e-12));
  CHECK(fa_value(pick(v, {0, 2})) == doctest::Approx(0.95).epsilon(0).scale(1e-12));
  CHECK(fa_value(pick(v, {0, 1, 2})) == doctest::Approx(0.671).epsilon(0).scale(1e-12));
  CHECK(fa_value(DriverView{}) == 0.0);
}

TEST_CASE("ba_value matches the worked example to 1e-12") {
  const DriverView v = abc();
  CHECK(ba_value(pick(v, {0, 1})) == doctest::Approx(0.918).epsilon(0).scale(1e-12));
  CHECK(ba_value(pick(v, {1})) == doctest::Approx(0.18).epsilon(0).scale(1e-12));
  CHECK(ba_value(DriverView{}) == 0.0);
}

TEST_CASE("mnl_value closed form") {
  DriverView one;
  one.push(1.0, 1.0, 0);
  CHECK(mnl_value(one) == doctest::Approx(0.5).epsilon(1e-15));
  DriverView a;
  a.push(1.0, 0.9, 0);
  CHECK(mnl_value(a) == doctest::Approx(0.9 / 1.9).epsilon(1e-15));
  CHECK(mnl_value(DriverView{}) == 0.0);
}

TEST_CASE("fa_threshold on the empty set and a sure driver") {
  const ThresholdParts empty = fa_threshold(DriverView{});
  CHECK(empty.numerator == 0.0);
  CHECK(empty.denominator == 1.0);
  CHECK(empty.tau == 0.0);

  DriverView sure;
  sure.push(1.0, 1.0, 0);
  const ThresholdParts parts = fa_threshold(sure);
  CHECK(parts.numerator == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(parts.denominator == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(parts.tau == doctest::Approx(1.0).epsilon(1e-15));

  // Consistency: a second (1,1) driver has zero marginal.
  DriverView two = sure;
  two.push(1.0, 1.0, 1);
  CHECK(fa_value(two) == doctest::Approx(fa_value(sure)).epsilon(1e-15));
}

TEST_CASE("threshold sign law against direct evaluation") {
  SplitMix64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(8));
    const DriverView set = testing::random_view(rng, n);
    const double wd = rng.next_unit();
    const double pd = rng.next_unit();
    DriverView with = set;
    with.push(wd, pd, n);
    const double marginal = fa_value(with) - fa_value(set);
    const double tau = fa_threshold(set).tau;
    // Skip razor-thin margins where double roundoff could flip the sign.
    if (std::abs(wd - tau) < 1e-9 || pd < 1e-9) continue;
    ++checked;
    CHECK_MESSAGE(((marginal >= 0) == (wd >= tau)),
                  "wd=" << wd << " tau=" << tau << " marginal=" << marginal);
  }
  CHECK(checked > 15000);
}

TEST_CASE("threshold stability: tau(T+d) <= 3 w_d when w_d >= tau(T)") {
  SplitMix64 rng(77);
  int eligible = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(8));
    const DriverView set = testing::random_view(rng, n);
    const double wd = rng.next_unit();
    const double pd = rng.next_unit();
    if (wd < fa_threshold(set).tau) continue;
    ++eligible;
    DriverView with = set;
    with.push(wd, pd, n);
    CHECK(fa_threshold(with).tau <= 3.0 * wd + 1e-9);
  }
  CHECK(eligible > 2000);
}

TEST_CASE("MNL sandwich: mnl <= fa <= 2 mnl") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(10));
    const DriverView set = testing::random_view(rng, n);
    const double fa = fa_value(set);
    const double mnl = mnl_value(set);
    CHECK(mnl <= fa + 1e-10);
    CHECK(fa <= 2.0 * mnl + 1e-10);
  }
}

TEST_CASE("max-weight driver never hurts") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(8));
    const DriverView set = testing::random_view(rng, n);
    double top = 0.0;
    for (double w : set.weights) top = std::max(top, w);
    DriverView with = set;
    with.push(top + (1.0 - top) * rng.next_unit(), rng.next_unit(), n);
    CHECK(fa_value(with) >= fa_value(set) - 1e-12);
  }
}

TEST_CASE("fa_value is linear in the weights") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(8));
    DriverView set = testing::random_view(rng, n);
    const double c = rng.next_unit();
    DriverView scaled = set;
    for (double& w : scaled.weights) w *= c;
    CHECK(fa_value(scaled) == doctest::Approx(c * fa_value(set)).epsilon(1e-12));
  }
}

TEST_CASE("ba_value is monotone and submodular") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const DriverView ground = testing::random_view(rng, n);
    // T is a random subset of S = ground minus the candidate driver d.
    std::vector<int> s_pos, t_pos;
    for (int j = 0; j + 1 < n; ++j) {
      s_pos.push_back(j);
      if (rng.next_below(2) == 0) t_pos.push_back(j);
    }
    const DriverView big = ground.subset(s_pos);
    const DriverView small = ground.subset(t_pos);
    auto with_d = [&](const DriverView& base) {
      DriverView out = base;
      out.push(ground.weights[n - 1], ground.probs[n - 1], n - 1);
      return out;
    };
    const double gain_big = ba_value(with_d(big)) - ba_value(big);
    const double gain_small = ba_value(with_d(small)) - ba_value(small);
    CHECK(gain_big >= -1e-12);                  // monotone
    CHECK(gain_big <= gain_small + 1e-12);      // submodular
  }
}

TEST_CASE("unit weights collapse fa and ba to the no-rejection probability") {
  SplitMix64 rng(808);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(10));
    DriverView set;
    double none = 1.0;
    for (int j = 0; j < n; ++j) {
      const double p = rng.next_unit();
      set.push(1.0, p, j);
      none *= 1.0 - p;
    }
    CHECK(fa_value(set) == doctest::Approx(1.0 - none).epsilon(0).scale(1e-12));
    CHECK(ba_value(set) == doctest::Approx(1.0 - none).epsilon(0).scale(1e-12));
  }
}

TEST_CASE("ba_value is invariant to tie order on equal weights") {
  DriverView a, b;
  a.push(0.5, 0.3, 0);
  a.push(0.5, 0.8, 1);
  b.push(0.5, 0.8, 1);
  b.push(0.5, 0.3, 0);
  CHECK(ba_value(a) == doctest::Approx(ba_value(b)).epsilon(1e-15));
}

TEST_CASE("Bernoulli composition: independent inclusion folds into the probabilities") {
  SplitMix64 rng(1912);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const DriverView set = testing::random_view(rng, n);
    std::vector<double> x(n);
    for (double& v : x) v = rng.next_unit();
    DriverView folded = set;
    for (int j = 0; j < n; ++j) folded.probs[j] *= x[j];
    for (ValuationKind kind : {ValuationKind::kFirstAccept, ValuationKind::kBestAccept}) {
      const auto vals = testing::all_subset_values(set, kind);
      const double direct = testing::expectation_over_inclusions(vals, x);
      CHECK(value(folded, kind) == doctest::Approx(direct).epsilon(0).scale(1e-10));
    }
  }
}

TEST_CASE("closure: the worked example prunes b away") {
  const DriverView v = abc();
  const ClosureResult fa = closure_value(pick(v, {0, 1}), ValuationKind::kFirstAccept);
  CHECK(fa.value == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(fa.best == std::vector<int>{0});
}

TEST_CASE("closure: ba closure equals ba of the full set") {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(7));
    const DriverView set = testing::random_view(rng, n);
    const ClosureResult closure = closure_value(set, ValuationKind::kBestAccept);
    CHECK(closure.value == doctest::Approx(ba_value(set)).epsilon(0).scale(1e-12));
  }
}

TEST_CASE("closure: the non-ordered optimum skips the middle driver") {
  // Weights scaled into [0,1] from (4, 1+e, 1) with e = 0.01; scaling leaves
  // the argmax unchanged because the valuation is linear in weights.
  const double e = 0.01;
  DriverView v;
  v.push(1.0, e, 0);
  v.push((1.0 + e) / 4.0, e, 1);
  v.push(0.25, 1.0, 2);
  const ClosureResult best = closure_value(v, ValuationKind::kFirstAccept);
  CHECK(best.best == std::vector<int>{0, 2});
}

TEST_CASE("closure rejects oversized sets") {
  SplitMix64 rng(1);
  const DriverView set = testing::random_view(rng, 26);
  CHECK_THROWS_AS(closure_value(set, ValuationKind::kFirstAccept), std::invalid_argument);
}

TEST_CASE("simulate agrees with the closed forms") {
  const DriverView v = abc();
  const SimResult fa = simulate(pick(v, {0, 1}), ValuationKind::kFirstAccept, 1000000, 42);
  CHECK(std::abs(fa.mean - 0.594) <= 4.0 * fa.std_error);

  SplitMix64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(6));
    const DriverView set = testing::random_view(rng, n);
    for (ValuationKind kind : {ValuationKind::kFirstAccept, ValuationKind::kBestAccept}) {
      const SimResult sim = simulate(set, kind, 200000, derive_seed(5, trial));
      CHECK(std::abs(sim.mean - value(set, kind)) <= 4.0 * sim.std_error + 1e-12);
    }
  }
}

TEST_CASE("simulate degenerate probabilities") {
  DriverView dead;
  dead.push(0.7, 0.0, 0);
  dead.push(0.3, 0.0, 1);
  const SimResult zero = simulate(dead, ValuationKind::kFirstAccept, 1000, 1);
  CHECK(zero.mean == 0.0);
  CHECK(zero.std_error == 0.0);

  DriverView sure;
  sure.push(0.7, 1.0, 0);
  sure.push(0.3, 1.0, 1);
  const SimResult ba = simulate(sure, ValuationKind::kBestAccept, 1000, 1);
  CHECK(ba.mean == 0.7);  // max weight accepted in every trial
  // First-accept pays a uniformly random acceptor, so only the expectation
  // is pinned at avg(w); the sample mean concentrates around it.
  const SimResult fa = simulate(sure, ValuationKind::kFirstAccept, 400000, 9);
  CHECK(std::abs(fa.mean - 0.5) <= 4.0 * fa.std_error);

  DriverView single;
  single.push(0.7, 1.0, 0);
  CHECK(simulate(single, ValuationKind::kFirstAccept, 1000, 1).mean == 0.7);
}

TEST_CASE("calculus bound: (2+z)/z (1-e^-z) stays at or below 2") {
  for (int k = 1; k <= 50000; ++k) {
    const double z = 50.0 * k / 50000.0;
    CHECK((2.0 + z) / z * (1.0 - std::exp(-z)) <= 2.0 + 1e-12);
  }
}
