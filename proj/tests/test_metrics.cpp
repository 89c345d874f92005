#include <doctest.h>

#include <cmath>
#include <vector>

#include "annealab/errors.hpp"
#include "annealab/metrics.hpp"

using namespace annealab;

TEST_CASE("detour score on a rise-and-fall series") {
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> probs = {0.25, 0.5, 0.8, 0.4, 0.1};
  const auto r = compute_qd(grid, probs);
  CHECK(r.p0 == 0.25);
  CHECK(r.p_max == 0.8);
  CHECK(r.s_max == 0.5);
  CHECK(r.p_end == 0.1);
  CHECK(r.chi == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(r.qd == doctest::Approx((4.0 / 3.0) * 0.55 * 0.7).epsilon(1e-12));
}

TEST_CASE("detour score vanishes for monotone and flat series") {
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  CHECK(compute_qd(grid, {0.1, 0.4, 0.9}).qd == doctest::Approx(0.0));  // ends at max
  CHECK(compute_qd(grid, {0.3, 0.3, 0.3}).qd == doctest::Approx(0.0));  // never rises
  const auto falling = compute_qd(grid, {0.9, 0.5, 0.2});
  CHECK(falling.qd == doctest::Approx(0.0));
  CHECK(falling.s_max == 0.0);  // max is the first point
}

TEST_CASE("ties in the maximum keep the earliest grid point") {
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto r = compute_qd(grid, {0.1, 0.6, 0.3, 0.6, 0.2});
  CHECK(r.s_max == 0.25);
}

TEST_CASE("detour score rejects corrupt input") {
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  CHECK_THROWS_AS(compute_qd(grid, {1.0, 0.5, 0.2}), DataError);   // P(0) = 1
  CHECK_THROWS_AS(compute_qd(grid, {0.2, 1.5, 0.2}), DataError);   // out of range
  CHECK_THROWS_AS(compute_qd(grid, {0.2, -0.5, 0.2}), DataError);  // out of range
  CHECK_THROWS_AS(compute_qd(grid, {0.2, 0.5}), DataError);        // length mismatch
  CHECK_NOTHROW(compute_qd(grid, {0.2, 1.0 + 1e-10, 0.2}));        // roundoff slack
}

TEST_CASE("binning groups by floor(x/width) with half-open edges") {
  const auto bins = bin_aggregate({0.003, 0.007, -0.004, 0.012}, {0.5, 0.7, 1.0, 2.0}, 0.01);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].center == doctest::Approx(-0.005));
  CHECK(bins[0].count == 1);
  CHECK(bins[0].mean == doctest::Approx(1.0));
  CHECK(bins[0].stddev == doctest::Approx(0.0));
  CHECK(bins[1].center == doctest::Approx(0.005));
  CHECK(bins[1].count == 2);
  CHECK(bins[1].mean == doctest::Approx(0.6));
  CHECK(bins[1].stddev == doctest::Approx(0.1));
  CHECK(bins[2].center == doctest::Approx(0.015));
  CHECK(bins[2].count == 1);
}

TEST_CASE("binning validates its arguments") {
  CHECK_THROWS_AS(bin_aggregate({1.0}, {1.0, 2.0}, 0.1), DataError);
  CHECK_THROWS_AS(bin_aggregate({1.0}, {1.0}, 0.0), DataError);
  CHECK_THROWS_AS(bin_aggregate({1.0}, {1.0}, -0.5), DataError);
  CHECK(bin_aggregate({}, {}, 0.1).empty());
}

TEST_CASE("rank correlation endpoints") {
  const std::vector<double> up = {1.0, 2.0, 5.0, 9.0};
  const std::vector<double> also_up = {0.1, 0.4, 0.5, 3.0};
  CHECK(spearman(up, also_up) == doctest::Approx(1.0));
  std::vector<double> down(also_up.rbegin(), also_up.rend());
  CHECK(spearman(up, down) == doctest::Approx(-1.0));
  // monotone in rank regardless of spacing
  CHECK(spearman({1.0, 10.0, 100.0}, {2.0, 2.1, 2.2}) == doctest::Approx(1.0));
}

TEST_CASE("rank correlation averages tied ranks") {
  // a ranks: {1, 2.5, 2.5, 4}; Pearson against {1,2,3,4} is sqrt(0.9).
  CHECK(spearman({1.0, 2.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0}) ==
        doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
}

TEST_CASE("rank correlation rejects degenerate input") {
  CHECK_THROWS_AS(spearman({1.0, 2.0}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(spearman({1.0, 2.0, 3.0}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(spearman({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), DataError);
}
