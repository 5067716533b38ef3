#include "dirmax/grid.hpp"
#include "dirmax/lattice.hpp"
#include "dirmax/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dirmax;

namespace {

GridField random_field(int n, std::uint64_t seed) {
    Rng rng(seed);
    GridField f(n);
    for (double& v : f.values()) v = rng.uniform();
    return f;
}

// Direct enumeration: sum over pixel centers in r, divided by the continuous area.
double brute_average(const GridField& f, const Rect& r) {
    const int n = f.n();
    double s = 0.0;
    bool any = false;
    for (int i = -n; i < 2 * n; ++i)
        for (int j = -n; j < 2 * n; ++j)
            if (rect_contains(r, {(i + 0.5) / n, (j + 0.5) / n})) {
                any = true;
                s += f.value_or_zero(i, j);
            }
    if (!any) return bilinear(f, r.center);
    return s / (n * n) / r.area();
}

}  // namespace

TEST_CASE("summed-area table") {
    const int n = 20;
    const SummedAreaTable c = sat_build(GridField(n, 1.0));
    CHECK(c.box_sum(0, n, 0, n) == n * n);

    GridField one(n);
    one(4, 7) = 1.0;
    const SummedAreaTable s1 = sat_build(one);
    CHECK(s1.box_sum(0, 5, 0, 8) == 1.0);
    CHECK(s1.box_sum(5, n, 0, n) == 0.0);
    CHECK(s1.box_sum(4, 5, 7, 8) == 1.0);

    const GridField f = random_field(n, 3);
    const SummedAreaTable st = sat_build(f);
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        int i0 = rng.index(n + 1), i1 = rng.index(n + 1), j0 = rng.index(n + 1), j1 = rng.index(n + 1);
        if (i0 > i1) std::swap(i0, i1);
        if (j0 > j1) std::swap(j0, j1);
        double direct = 0.0;
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) direct += f(i, j);
        CHECK(st.box_sum(i0, i1, j0, j1) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("exact rectangle averages") {
    const int n = 64;
    const Rect r = make_rect({0.5, 0.5}, 0.5, 0.5, 0.3);
    const double quant = 2.0 / (n * r.width());
    CHECK(rect_average_exact(GridField(n, 1.0), r) == doctest::Approx(1.0).epsilon(quant));

    GridField ramp(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) ramp(i, j) = (i + 0.5) / n;
    CHECK(std::abs(rect_average_exact(ramp, make_rect({0.5, 0.5}, 0.4, 1.0, 0)) - 0.5) <= quant);

    GridField half(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n / 2; ++i) half(i, j) = 1.0;
    CHECK(std::abs(rect_average_exact(half, make_rect({0.5, 0.5}, 1.0, 1.0, 0)) - 0.5) <= 2.0 / n);

    CHECK(rect_average_exact(GridField(n, 1.0), make_rect({3.0, 3.0}, 0.2, 0.5, 0.4)) == 0.0);

    // A rectangle between pixel centers falls back to bilinear interpolation.
    const GridField f = random_field(n, 9);
    const Rect tiny = make_rect({0.5, 0.5}, 0.2 / n, 1.0, 0);
    CHECK(rect_average_exact(f, tiny) == doctest::Approx(bilinear(f, tiny.center)));
}

TEST_CASE("exact averages match enumeration, linearity, monotonicity, doubling") {
    const int n = 24;
    const GridField f = random_field(n, 21);
    const GridField g = random_field(n, 22);
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        const Rect r = make_rect({rng.uniform(-0.1, 1.1), rng.uniform(-0.1, 1.1)}, rng.uniform(0.1, 0.7),
                                 rng.uniform(0.1, 1.0), rng.uniform(0.0, std::numbers::pi));
        const double af = rect_average_exact(f, r);
        CHECK(af == doctest::Approx(brute_average(f, r)).epsilon(1e-12));
        const double ag = rect_average_exact(g, r);
        CHECK(rect_average_exact(2.0 * f + 3.0 * g, r) == doctest::Approx(2 * af + 3 * ag).epsilon(1e-9));
        CHECK(rect_average_exact(f, r) <= rect_average_exact(f + g, r));
        CHECK(af <= 4 * rect_average_exact(f, rect_double(r)) * (1 + 1e-12));
    }
}

TEST_CASE("fast averages") {
    const int n = 64;
    const GridField f = random_field(n, 31);
    const std::vector<double> thetas{0.0, 0.4, 1.1, 2.5};
    const SatBundle bundle(f, thetas);

    const Rect axis = make_rect({0.5, 0.5}, 0.25, 0.5, 0.0);
    const SummedAreaTable st = sat_build(f);
    const double corners = st.integral(0.375, 0.625, 0.4375, 0.5625) / axis.area();
    CHECK(rect_average_fast(bundle, axis) == doctest::Approx(corners).epsilon(1e-9));

    const SatBundle ones(GridField(n, 1.0), thetas);
    for (double th : thetas)
        CHECK(rect_average_fast(ones, make_rect({0.5, 0.5}, 0.3, 0.3, th)) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(rect_average_fast(bundle, make_rect({0.5, 0.5}, 0.3, 0.3, 0.7)), DirectionNotPrepared);

    // Smooth field: the fast path stays within 3 spacing / short side of the exact one.
    GridField smooth(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 p = smooth.pixel_center(i, j);
            smooth(i, j) = 1.0 + 0.5 * std::sin(5 * p.x) * std::cos(3 * p.y);
        }
    const SatBundle sb(smooth, thetas);
    Rng rng(37);
    for (int t = 0; t < 200; ++t) {
        const double h = rng.uniform(0.15, 0.5);
        const double ecc = rng.uniform(4.0 / (n * h), 1.0);
        const Rect r = make_rect({rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)}, h, std::min(ecc, 1.0),
                                 thetas[rng.index(4)]);
        const double exact = rect_average_exact(smooth, r);
        const double bound = 3.0 / n / r.width();
        CHECK(std::abs(rect_average_fast(sb, r) - exact) <= bound * exact);
    }
}

TEST_CASE("serialization round trip") {
    const GridField f = random_field(7, 41);
    std::stringstream text;
    write_text(text, f);
    CHECK(text.str().rfind("n=7\n", 0) == 0);
    const GridField g = read_text(text);
    CHECK(g.values() == f.values());

    std::stringstream bin;
    write_binary(bin, f);
    CHECK(read_binary(bin).values() == f.values());
}

TEST_CASE("field helpers") {
    GridField f(4, 2.0);
    CHECK(f.l2_norm() == doctest::Approx(2.0));
    CHECK(inner(f, f) == doctest::Approx(4.0));
    CHECK(normalized(f).l2_norm() == doctest::Approx(1.0));
    CHECK(normalized(GridField(4)).l2_norm() == 0.0);
    CHECK(bilinear(f, {0.5, 0.5}) == doctest::Approx(2.0));
    CHECK(bilinear(f, {5.0, 5.0}) == 0.0);
}
