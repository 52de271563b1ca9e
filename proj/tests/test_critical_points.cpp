#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "kcover/critical_points.hpp"
#include "kcover/errors.hpp"
#include "oracles.hpp"

using kcover::CriticalPoint;
using kcover::EnumerationWindow;
using kcover::SpatialIndex;

namespace {

EnumerationWindow full_window() {
  EnumerationWindow w;
  w.r_min = 0.0;
  w.r_max = kcover::kRMax;
  w.mu_min = 0;
  w.mu_max = kcover::kMaxDim;
  return w;
}

}  // namespace

TEST_CASE("antipodal pair on the circle yields both midpoints") {
  const auto cloud = oracles::cloud_from({0.0, 0.5}, 1);
  const SpatialIndex index(cloud, 0.25);

  const auto crits = kcover::enumerate_critical_points(index, 1, full_window());
  REQUIRE(crits.size() == 2);
  std::set<double> centers;
  for (const auto& cp : crits) {
    CHECK(cp.rho == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cp.mu == 1);
    CHECK(cp.delta == 1);
    CHECK(cp.interior_count == 0);
    CHECK(cp.generators == std::vector<std::uint32_t>{0, 1});
    centers.insert(cp.center.x[0]);
  }
  CHECK(centers.count(0.25) == 1);
  CHECK(centers.count(0.75) == 1);

  // k = 2: both midpoints become index-0 minima of the second NN distance.
  const auto crits2 =
      kcover::enumerate_critical_points(index, 2, full_window());
  REQUIRE(crits2.size() == 2);
  for (const auto& cp : crits2) {
    CHECK(cp.mu == 0);
    CHECK(cp.rho == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("count_by_index on crafted circle configurations") {
  {
    const auto cloud = oracles::cloud_from({0.0, 0.5}, 1);
    const SpatialIndex index(cloud, 0.25);
    CHECK(kcover::count_by_index(index, 1, 0.2) ==
          std::vector<std::int64_t>{0, 2});
    CHECK(kcover::count_by_index(index, 1, 0.2, 1) == 2);
    CHECK(kcover::count_by_index(index, 1, 0.25) ==
          std::vector<std::int64_t>{0, 0});
  }
  {
    // Four equally spaced points, k = 2: minima at the gap midpoints
    // (rho = 0.125) and maxima at the sample points themselves (rho = 0.25,
    // reached through antipodal generator pairs).
    const auto cloud = oracles::cloud_from({0.0, 0.25, 0.5, 0.75}, 1);
    const SpatialIndex index(cloud, 0.25);
    CHECK(kcover::count_by_index(index, 2, 0.2) ==
          std::vector<std::int64_t>{0, 4});
    CHECK(kcover::count_by_index(index, 2, 0.1) ==
          std::vector<std::int64_t>{4, 4});
  }
}

TEST_CASE("classification of planar pair and triangle configurations") {
  // Pair with one point inside its diametral ball: critical for k = 2 but
  // not for k = 1.
  const auto cloud = oracles::cloud_from(
      {0.45, 0.5, 0.55, 0.5, 0.5, 0.51, 0.9, 0.9}, 2);
  const SpatialIndex index(cloud, 0.25);

  CHECK_FALSE(kcover::classify_subset({0, 1}, index, 1).has_value());
  const auto cp = kcover::classify_subset({0, 1}, index, 2);
  REQUIRE(cp.has_value());
  CHECK(cp->rho == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(cp->center.x[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cp->center.x[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cp->mu == 1);
  CHECK(cp->interior_count == 1);
  CHECK(cp->delta == 1);

  // The third point pairs with each of the first two as a k = 1 maximum
  // candidate only if its diametral ball is empty; point 0 is inside the
  // {1,2} ball? Verify directly against first principles.
  for (const std::vector<std::uint32_t> sub :
       {std::vector<std::uint32_t>{0, 2}, std::vector<std::uint32_t>{1, 2}}) {
    const auto got = kcover::classify_subset(sub, index, 1);
    double mid[2];
    for (int c = 0; c < 2; ++c)
      mid[c] = 0.5 * (cloud.point(sub[0])[c] + cloud.point(sub[1])[c]);
    const double rho = 0.5 * oracles::dist(cloud.point(sub[0]),
                                           cloud.point(sub[1]), 2);
    const int interior = oracles::count_strict(cloud, mid, rho, sub);
    CAPTURE(sub[0]);
    CAPTURE(sub[1]);
    CHECK(got.has_value() == (interior == 0));
  }
}

TEST_CASE("acute triangles are critical for k=1, right and obtuse are not") {
  // Acute: equilateral-ish.
  const auto acute = oracles::cloud_from({0.5, 0.5, 0.56, 0.5, 0.53, 0.55}, 2);
  const SpatialIndex ia(acute, 0.25);
  const auto cp = kcover::classify_subset({0, 1, 2}, ia, 1);
  REQUIRE(cp.has_value());
  CHECK(cp->mu == 2);
  CHECK(cp->delta == 1);
  CHECK(cp->interior_count == 0);
  for (std::uint32_t g : {0u, 1u, 2u})
    CHECK(oracles::dist(cp->center.x.data(), acute.point(g), 2) ==
          doctest::Approx(cp->rho).epsilon(1e-9));

  // Right triangle: circumcenter on the hypotenuse, not in the open simplex.
  const auto right = oracles::cloud_from({0.5, 0.5, 0.6, 0.5, 0.5, 0.6}, 2);
  const SpatialIndex ir(right, 0.25);
  CHECK_FALSE(kcover::classify_subset({0, 1, 2}, ir, 1).has_value());

  // Obtuse triangle: circumcenter outside.
  const auto obtuse = oracles::cloud_from({0.5, 0.5, 0.62, 0.5, 0.56, 0.51}, 2);
  const SpatialIndex io(obtuse, 0.25);
  CHECK_FALSE(kcover::classify_subset({0, 1, 2}, io, 1).has_value());
}

TEST_CASE("classify_subset validates input") {
  const auto cloud = oracles::cloud_from({0.1, 0.1, 0.2, 0.2, 0.3, 0.35}, 2);
  const SpatialIndex index(cloud, 0.25);
  CHECK_THROWS_AS(kcover::classify_subset({0}, index, 1), kcover::config_error);
  CHECK_THROWS_AS(kcover::classify_subset({0, 1, 2, 0}, index, 1),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::classify_subset({0, 0}, index, 1),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::classify_subset({0, 9}, index, 1),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::classify_subset({0, 1}, index, 0),
                  kcover::config_error);
}

TEST_CASE("tetrahedron critical point in three dimensions") {
  // Near-regular tetrahedron around (0.5, 0.5, 0.5).
  const double s = 0.08;
  const auto cloud = oracles::cloud_from(
      {0.5 + s, 0.5 + s, 0.5 + s, 0.5 + s, 0.5 - s, 0.5 - s, 0.5 - s, 0.5 + s,
       0.5 - s, 0.5 - s, 0.5 - s, 0.5 + s},
      3);
  const SpatialIndex index(cloud, 0.25);
  const auto cp = kcover::classify_subset({0, 1, 2, 3}, index, 1);
  REQUIRE(cp.has_value());
  CHECK(cp->mu == 3);
  CHECK(cp->rho == doctest::Approx(s * std::sqrt(3.0)).epsilon(1e-10));
  for (int c = 0; c < 3; ++c)
    CHECK(cp->center.x[c] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("enumeration satisfies structural invariants on random clouds") {
  for (const int d : {1, 2, 3}) {
    const std::size_t n = d == 3 ? 40 : 60;
    const auto cloud = oracles::random_cloud(n, d, 300 + static_cast<unsigned>(d));
    const SpatialIndex index(cloud, SpatialIndex::default_cell_size(n, 2, d));
    for (const int k : {1, 2, 3}) {
      const auto crits =
          kcover::enumerate_critical_points(index, k, full_window());
      CAPTURE(d);
      CAPTURE(k);
      CHECK(!crits.empty());
      std::set<std::pair<double, double>> seen;
      for (const auto& cp : crits) {
        // Generators all lie at distance rho.
        for (const auto g : cp.generators)
          CHECK(oracles::dist(cp.center.x.data(), cloud.point(g), d) ==
                doctest::Approx(cp.rho).epsilon(1e-9));
        // Interior count is exact and consistent with the index formula.
        CHECK(cp.interior_count ==
              oracles::count_strict(cloud, cp.center.x.data(), cp.rho,
                                    cp.generators));
        CHECK(cp.mu == static_cast<int>(cp.generators.size()) +
                           cp.interior_count - k);
        CHECK(cp.mu >= (k == 1 ? 1 : 0));
        CHECK(cp.mu <= d);
        CHECK(cp.rho > 0.0);
        CHECK(cp.rho <= kcover::kRMax);
        CHECK(std::is_sorted(cp.generators.begin(), cp.generators.end()));
        seen.insert({cp.rho, cp.center.x[0]});
      }
      CHECK(seen.size() == crits.size());
      // Ordered output.
      for (std::size_t i = 1; i < crits.size(); ++i)
        CHECK(crits[i - 1].rho <= crits[i].rho);

      // Windowing is a pure filter.
      EnumerationWindow narrow = full_window();
      narrow.r_min = 0.05;
      narrow.r_max = 0.15;
      const auto sub =
          kcover::enumerate_critical_points(index, k, narrow);
      std::size_t expect = 0;
      for (const auto& cp : crits)
        if (cp.rho > narrow.r_min && cp.rho <= narrow.r_max) ++expect;
      CHECK(sub.size() == expect);

      // Index filters match post-filtering.
      EnumerationWindow only_max = full_window();
      only_max.mu_min = d;
      only_max.mu_max = d;
      const auto maxima =
          kcover::enumerate_critical_points(index, k, only_max);
      std::size_t expect_max = 0;
      for (const auto& cp : crits)
        if (cp.mu == d) ++expect_max;
      CHECK(maxima.size() == expect_max);

      // Every enumerated subset classifies identically through the public
      // entry point (no antipodal ties in random data).
      for (const auto& cp : crits) {
        const auto again = kcover::classify_subset(cp.generators, index, k);
        REQUIRE(again.has_value());
        CHECK(again->rho == doctest::Approx(cp.rho).epsilon(1e-13));
        CHECK(again->mu == cp.mu);
      }
    }
  }
}

TEST_CASE("circle gaps for k=1 appear as index-1 midpoints") {
  const auto cloud = oracles::random_cloud(24, 1, 1234);
  const SpatialIndex index(cloud, 0.25);
  // Sorted coordinates -> gap midpoints are the only candidates.
  std::vector<double> xs(cloud.coords());
  std::sort(xs.begin(), xs.end());
  std::size_t expected = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double next = i + 1 < xs.size() ? xs[i + 1] : xs[0] + 1.0;
    if ((next - xs[i]) / 2.0 <= kcover::kRMax) ++expected;
  }
  const auto crits = kcover::enumerate_critical_points(index, 1, full_window());
  CHECK(crits.size() == expected);
  for (const auto& cp : crits) CHECK(cp.mu == 1);
}

TEST_CASE("duplicate points poison enumeration as degenerate") {
  const auto cloud = oracles::cloud_from({0.2, 0.2, 0.2, 0.2, 0.7, 0.7}, 2);
  const SpatialIndex index(cloud, 0.25);
  CHECK_THROWS_AS(
      kcover::enumerate_critical_points(index, 1, full_window()),
      kcover::degenerate_error);
}

TEST_CASE("critical point jsonl round trip") {
  const auto cloud = oracles::random_cloud(50, 2, 8888);
  const SpatialIndex index(cloud, SpatialIndex::default_cell_size(50, 2, 2));
  const auto crits = kcover::enumerate_critical_points(index, 2, full_window());
  REQUIRE(!crits.empty());
  std::stringstream ss;
  kcover::write_critical_jsonl(crits, ss);
  const auto back = kcover::read_critical_jsonl(ss, 2);
  REQUIRE(back.size() == crits.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].rho == crits[i].rho);
    CHECK(back[i].mu == crits[i].mu);
    CHECK(back[i].center.x == crits[i].center.x);
    CHECK(back[i].generators == crits[i].generators);
    CHECK(back[i].delta == crits[i].delta);
  }
}

TEST_CASE("ceiling bounds the k-NN maximum from above and tightly") {
  for (const int d : {1, 2}) {
    const auto cloud = oracles::random_cloud(120, d, 42 + static_cast<unsigned>(d));
    const SpatialIndex index(cloud, SpatialIndex::default_cell_size(120, 2, d));
    for (const int k : {1, 3}) {
      const auto ub = kcover::critical_value_ceiling(index, k);
      CAPTURE(d);
      CAPTURE(k);
      CHECK(ub.upper >= ub.max_node);
      // The lattice max is a genuine function value.
      CHECK(ub.max_node ==
            doctest::Approx(index.knn_distance(ub.arg_max, k)).epsilon(1e-12));
      // Every critical value respects the bound.
      const auto crits =
          kcover::enumerate_critical_points(index, k, full_window());
      for (const auto& cp : crits) CHECK(cp.rho <= ub.upper + 1e-15);
      // Tightness: the bound is within the documented slack fraction.
      CHECK(ub.upper <= std::max(ub.max_node * 1.15,
                                 ub.max_node + ub.spacing * std::sqrt(d)));
    }
  }
}

TEST_CASE("enumeration window validation") {
  const auto cloud = oracles::random_cloud(10, 2, 5);
  const SpatialIndex index(cloud, 0.25);
  EnumerationWindow bad = full_window();
  bad.r_max = 0.3;
  CHECK_THROWS_AS(kcover::enumerate_critical_points(index, 1, bad),
                  kcover::config_error);
  bad = full_window();
  bad.r_min = -0.1;
  CHECK_THROWS_AS(kcover::enumerate_critical_points(index, 1, bad),
                  kcover::config_error);
  EnumerationWindow empty = full_window();
  empty.r_min = empty.r_max = 0.2;
  CHECK(kcover::enumerate_critical_points(index, 1, empty).empty());
}

TEST_CASE("focused window enumeration matches the plain enumeration") {
  for (const int d : {1, 2}) {
    for (const int k : {1, 2, 3}) {
      for (int seed = 0; seed < 8; ++seed) {
        const auto cloud = oracles::random_cloud(250, d, 6100 + 10 * d + seed);
        const SpatialIndex index(
            cloud, SpatialIndex::default_cell_size(cloud.size(), k, d));
        const auto ub = kcover::critical_value_ceiling(index, k);

        // Floors spanning empty tops, thin slivers, and wide windows.
        const double floors[] = {0.9 * ub.max_node, 0.6 * ub.max_node,
                                 0.25 * ub.max_node};
        for (const double r_min : floors) {
          EnumerationWindow win = full_window();
          win.r_min = r_min;
          win.mu_min = 0;
          win.mu_max = d;
          const auto high = kcover::enumerate_high_window(index, k, win);
          CHECK(high.bound.upper == ub.upper);
          CHECK(high.bound.max_node == ub.max_node);

          EnumerationWindow capped = win;
          capped.r_max = std::min(win.r_max, ub.upper);
          const auto plain =
              capped.r_max > capped.r_min
                  ? kcover::enumerate_critical_points(index, k, capped)
                  : std::vector<CriticalPoint>{};
          REQUIRE(high.crits.size() == plain.size());
          for (std::size_t i = 0; i < plain.size(); ++i) {
            CHECK(high.crits[i].rho == plain[i].rho);
            CHECK(high.crits[i].mu == plain[i].mu);
            CHECK(high.crits[i].delta == plain[i].delta);
            CHECK(high.crits[i].generators == plain[i].generators);
            CHECK(high.crits[i].center.x == plain[i].center.x);
            CHECK(high.crits[i].interior_count == plain[i].interior_count);
          }
        }
      }
    }
  }
}

TEST_CASE("focused window keeps antipodal wrap pockets") {
  const auto cloud = oracles::cloud_from({0.0, 0.5}, 1);
  const SpatialIndex index(cloud, 0.25);
  EnumerationWindow win = full_window();
  win.r_min = 0.2;
  win.mu_min = 1;
  win.mu_max = 1;
  const auto high = kcover::enumerate_high_window(index, 1, win);
  REQUIRE(high.crits.size() == 2);
  CHECK(high.crits[0].rho == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(high.crits[1].rho == doctest::Approx(0.25).epsilon(1e-14));

  // A floor above the certificate leaves nothing.
  win.r_min = std::nextafter(high.bound.upper, 1.0);
  if (win.r_min <= kcover::kRMax) {
    const auto none = kcover::enumerate_high_window(index, 1, win);
    CHECK(none.crits.empty());
  }
}
