#include "dirmax/geometry.hpp"
#include "dirmax/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dirmax;

namespace {

Rect random_rect(Rng& rng) {
    return make_rect({rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)}, rng.uniform(0.1, 0.6), rng.uniform(0.05, 1.0),
                     rng.uniform(0.0, std::numbers::pi));
}

// Monte Carlo area of r1 ∩ r2 over the bounding box of r1; returns {estimate, box area}.
std::pair<double, double> mc_area(const Rect& r1, const Rect& r2, int samples, Rng& rng) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Vec2& c : r1.corners()) {
        x0 = std::min(x0, c.x), x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y), y1 = std::max(y1, c.y);
    }
    const double box = (x1 - x0) * (y1 - y0);
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        const Vec2 p{rng.uniform(x0, x1), rng.uniform(y0, y1)};
        if (rect_contains(r1, p) && rect_contains(r2, p)) ++hits;
    }
    return {box * hits / samples, box};
}

// Standard error of the estimator when the true area is `area`.
double mc_sigma(double area, double box, int samples) {
    const double q = area / box;
    return box * std::sqrt(q * (1 - q) / samples);
}

}  // namespace

TEST_CASE("rect_contains") {
    const Rect r = make_rect({0, 0}, 2, 0.5, 0);
    CHECK(rect_contains(r, {0, 0}));
    CHECK_FALSE(rect_contains(r, {1.01, 0}));
    CHECK(rect_contains(r, {1.0, 0.5}));
    const Rect q = make_rect({0, 0}, 2, 0.5, std::numbers::pi / 2);
    // Turned by 90 degrees the half-width 0.5 lies along x.
    CHECK(rect_contains(q, {0.4, 0}));
    CHECK_FALSE(rect_contains(q, {0.6, 0}));
    CHECK(rect_contains(q, {0, 0.9}));
    CHECK_FALSE(rect_contains(q, {0, 1.01}));
}

TEST_CASE("make_rect rejects bad parameters") {
    CHECK_THROWS_AS(make_rect({0, 0}, -1, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_rect({0, 0}, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_rect({0, 0}, 1, 1.5, 0), std::invalid_argument);
}

TEST_CASE("intersection area examples") {
    const Rect sq = make_rect({0, 0}, 1, 1, 0);
    CHECK(rect_intersection_area(sq, sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rect_intersection_area(sq, make_rect({10, 0}, 1, 1, 0)) == 0.0);
    const Rect turned = make_rect({0, 0}, 1, 1, std::numbers::pi / 4);
    const double a = rect_intersection_area(sq, turned);
    CHECK(a == doctest::Approx(2 * (std::sqrt(2.0) - 1)).epsilon(1e-12));
    Rng rng(7);
    const auto [est, box] = mc_area(sq, turned, 1000000, rng);
    CHECK(std::abs(est - a) <= 3 * mc_sigma(a, box, 1000000));
    // Edge contact only.
    CHECK(rect_intersection_area(sq, make_rect({1, 0}, 1, 1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("intersection area invariants on random pairs") {
    Rng rng(11);
    for (int t = 0; t < 500; ++t) {
        const Rect a = random_rect(rng);
        const Rect b = random_rect(rng);
        const double ab = rect_intersection_area(a, b);
        const double ba = rect_intersection_area(b, a);
        CHECK(std::abs(ab - ba) <= 1e-12 * std::max(1.0, std::abs(ab)) + 1e-15);
        CHECK(ab >= 0.0);
        CHECK(ab <= std::min(a.area(), b.area()) * (1 + 1e-12));
        CHECK(rect_intersection_area(a, a) == doctest::Approx(a.area()).epsilon(1e-12));
        CHECK(ab <= rect_intersection_area(rect_double(a), b) * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("clipping agrees with Monte Carlo on random pairs") {
    Rng rng(13);
    int outside = 0;
    const int pairs = 10000;
    const int samples = 2000;
    for (int t = 0; t < pairs; ++t) {
        const Rect a = random_rect(rng);
        const Rect b = random_rect(rng);
        const auto [est, box] = mc_area(a, b, samples, rng);
        const double exact = rect_intersection_area(a, b);
        const double sigma = mc_sigma(exact, box, samples);
        if (std::abs(est - exact) > (sigma > 0 ? 3 * sigma : 1e-12)) ++outside;
    }
    // 3-sigma excursions of a correct area occur for about 0.3% of pairs.
    CHECK(outside <= pairs / 100);
}

TEST_CASE("doubling and reslope") {
    const Rect r = make_rect({0.3, 0.4}, 1, 0.5, 0.7);
    const Rect d = rect_double(r);
    CHECK(d.center == r.center);
    CHECK(d.h == 2.0);
    CHECK(d.ecc == 0.5);
    CHECK(d.theta == r.theta);
    CHECK(d.area() == doctest::Approx(4 * r.area()));
    CHECK(rect_intersection_area(r, d) == doctest::Approx(r.area()).epsilon(1e-12));

    const Rect s = make_rect({0.1, 0.2}, 0.5, 0.25, 0.3);
    const Rect t = rect_reslope(s, 0.1);
    CHECK(t.center == s.center);
    CHECK(t.h == 1.0);
    CHECK(t.theta == 0.1);
    const Rect same = rect_reslope(s, s.theta);
    const Rect dbl = rect_double(s);
    CHECK(same.h == dbl.h);
    CHECK(same.theta == dbl.theta);
    CHECK(same.ecc == dbl.ecc);
    CHECK(rect_reslope(rect_reslope(s, 0.1), s.theta).h == 4 * s.h);
}

TEST_CASE("direction sets") {
    const DirectionSet u = make_directions(Uniform{4}, AllAnchors{});
    CHECK(u.slopes() == std::vector<double>{1.0, 0.75, 0.5, 0.25});
    CHECK(u.angles()[0] == doctest::Approx(std::numbers::pi / 4));

    const DirectionSet l = make_directions(Lacunary{0.5, 3}, AllAnchors{});
    CHECK(l.slopes() == std::vector<double>{0.5, 0.25, 0.125});

    const DirectionSet e = make_directions(ExplicitSlopes{{0.9, 0.5, 0.1}}, ExplicitAnchors{{0.9, 0.1}});
    CHECK(e.sector_of()[1] == e.sector_of()[0]);
    CHECK(e.sector_of()[2] != e.sector_of()[0]);
    CHECK(e.sector_of_slope(0.5) == e.sector_of()[0]);

    CHECK_THROWS_AS(make_directions(ExplicitSlopes{{}}, AllAnchors{}), std::invalid_argument);
    CHECK_THROWS_AS(make_directions(ExplicitSlopes{{1.5, 0.2}}, AllAnchors{}), std::invalid_argument);
    CHECK_THROWS_AS(make_directions(ExplicitSlopes{{0.2, 0.5}}, AllAnchors{}), std::invalid_argument);
    CHECK_THROWS_AS(make_directions(Uniform{0}, AllAnchors{}), std::invalid_argument);
    CHECK_THROWS_AS(make_directions(Lacunary{1.5, 3}, AllAnchors{}), std::invalid_argument);
}

TEST_CASE("sectors partition the slopes") {
    for (int k : {1, 2, 3, 5}) {
        const DirectionSet d = make_directions(Uniform{17}, EveryKth{k});
        std::vector<int> seen(d.size(), 0);
        for (int s = 0; s < d.sector_count(); ++s)
            for (int i : d.sector_members(s)) {
                ++seen[i];
                CHECK(d.sector_of()[i] == s);
            }
        for (int c : seen) CHECK(c == 1);
        // Each anchor opens its own sector; non-anchors join the larger anchor.
        for (int i = 0; i < d.size(); ++i) {
            int larger = -1;
            for (int a : d.anchors())
                if (d.slopes()[a] >= d.slopes()[i]) larger = a;
            if (larger >= 0) CHECK(d.sector_of()[i] == d.sector_of()[larger]);
        }
    }
}
