#include "dirmax/kernels.hpp"
#include "dirmax/normest.hpp"
#include "dirmax/operators.hpp"
#include "dirmax/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace dirmax;

namespace {

GridField random_field(int n, std::uint64_t seed) {
    Rng rng(seed);
    GridField f(n);
    for (double& v : f.values()) v = rng.uniform();
    return f;
}

double offset_value(int o, int P) { return P == 1 ? 0.0 : (o - (P - 1) / 2.0) / (P - 1); }

// Supremum over every admissible rectangle containing the pixel, enumerated directly.
GridField brute_maximal(const GridField& f, const DirectionSet& dirs, const ScaleGrid& scales) {
    const int n = f.n();
    const int P = scales.offsets_per_axis;
    GridField out(n);
    for (int p = 0; p < n * n; ++p) {
        const Vec2 x = f.pixel_center(p);
        double best = 0.0;
        for (double theta : dirs.angles())
            for (const ScaleTerm& st : scales.admissible(n))
                for (int oa = 0; oa < P; ++oa)
                    for (int ob = 0; ob < P; ++ob) {
                        const Vec2 u{std::cos(theta), std::sin(theta)};
                        const Vec2 v{-std::sin(theta), std::cos(theta)};
                        const Vec2 c = x + u * (-offset_value(oa, P) * 0.5 * st.h) +
                                       v * (-offset_value(ob, P) * 0.5 * st.ecc * st.h);
                        best = std::max(best, st.weight * rect_average_exact(f, make_rect(c, st.h, st.ecc, theta)));
                    }
        out[p] = best;
    }
    return out;
}

double interior_max_error(const GridField& a, double value, double margin) {
    const int n = a.n();
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 c = a.pixel_center(i, j);
            if (c.x < margin || c.y < margin || c.x > 1 - margin || c.y > 1 - margin) continue;
            err = std::max(err, std::abs(a(i, j) - value));
        }
    return err;
}

bool pointwise_le(const GridField& a, const GridField& b, double rel = 1e-12) {
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] > b[p] * (1 + rel) + 1e-14) return false;
    return true;
}

}  // namespace

TEST_CASE("maximal operator on constants") {
    const int n = 32;
    const DirectionSet dirs = make_directions(Uniform{5}, EveryKth{2});
    const ScaleGrid scales = dyadic_scale_grid(0.25, 2, 2);
    for (Averaging mode : {Averaging::exact, Averaging::lattice}) {
        const GridField m = maximal_directional(GridField(n, 1.0), dirs, scales, {}, mode);
        CHECK(interior_max_error(m, 1.0, 0.25 + 1e-9) <= 2.0 / (n * 0.0625));
    }
}

TEST_CASE("exact maximal matches direct enumeration") {
    const int n = 16;
    const DirectionSet dirs = make_directions(Uniform{3}, EveryKth{2});
    const ScaleGrid scales = dyadic_scale_grid(0.5, 2, 2);
    const GridField f = random_field(n, 3);
    const GridField m = maximal_directional(f, dirs, scales, {}, Averaging::exact);
    const GridField b = brute_maximal(f, dirs, scales);
    for (std::size_t p = 0; p < m.size(); ++p) CHECK(m[p] == doctest::Approx(b[p]).epsilon(1e-12));

    GridField one(32);
    one(16, 16) = 1.0;
    const DirectionSet flat = make_directions(ExplicitSlopes{{0.0}}, AllAnchors{});
    const ScaleGrid single{{0.25}, {0.25}, 3};
    const GridField mo = maximal_directional(one, flat, single, {}, Averaging::exact);
    const GridField bo = brute_maximal(one, flat, single);
    for (std::size_t p = 0; p < mo.size(); ++p) CHECK(mo[p] == doctest::Approx(bo[p]).epsilon(1e-12));
    CHECK(mo(16, 16) >= 1.0 / (32.0 * 32.0 * 0.25 * 0.0625) * (1 - 1e-12));
}

TEST_CASE("maximal operator is monotone and sublinear") {
    const int n = 32;
    const DirectionSet small = make_directions(ExplicitSlopes{{1.0, 0.5}}, AllAnchors{});
    const DirectionSet big = make_directions(ExplicitSlopes{{1.0, 0.75, 0.5, 0.25}}, AllAnchors{});
    const ScaleGrid scales = dyadic_scale_grid(0.5, 2, 3);
    const GridField f = random_field(n, 5);
    const GridField g = random_field(n, 6);
    for (Averaging mode : {Averaging::exact, Averaging::lattice}) {
        const GridField ms = maximal_directional(f, small, scales, {}, mode);
        const GridField mb = maximal_directional(f, big, scales, {}, mode);
        CHECK(pointwise_le(ms, mb));
        const GridField mg = maximal_directional(g, big, scales, {}, mode);
        const GridField mfg = maximal_directional(f + g, big, scales, {}, mode);
        CHECK(pointwise_le(mfg, mb + mg, 1e-9));
        CHECK(pointwise_le(mb, mfg));
        const GridField m3 = maximal_directional(-3.0 * f, big, scales, {}, mode);
        for (std::size_t p = 0; p < m3.size(); ++p) CHECK(m3[p] == doctest::Approx(3 * mb[p]).epsilon(1e-9));
    }
}

TEST_CASE("eccentricity and grand maximal operators") {
    const int n = 64;
    const DirectionSet dirs = make_directions(Uniform{4}, AllAnchors{});
    const std::vector<double> heights{0.5, 0.25};
    const GridField one(n, 1.0);
    const GridField me = maximal_eccentricity(one, 0.25, dirs, heights, 3, Averaging::exact);
    CHECK(interior_max_error(me, 1.0, 0.5) <= 2.0 / (n * 0.0625));
    CHECK_THROWS_AS(maximal_eccentricity(one, 1.0 / 128, dirs, heights), std::invalid_argument);

    const GridField sq = maximal_eccentricity(random_field(n, 2), 1.0, dirs, heights, 3, Averaging::exact);
    const GridField sq2 = maximal_directional(random_field(n, 2), dirs, ScaleGrid{heights, {1.0}, 3}, {},
                                              Averaging::exact);
    CHECK(sq.values() == sq2.values());

    const std::vector<double> eccs{0.25, 0.125};
    const GridField gm = grand_maximal(one, eccs, dirs, heights, 3, Averaging::exact);
    CHECK(interior_max_error(gm, 1.0 / (2 * std::log(2.0)), 0.5) <= 2.0 / (n * 0.0625));
    CHECK_THROWS_AS(grand_maximal(one, {0.5, 0.25}, dirs, heights), std::invalid_argument);

    const GridField f = random_field(n, 4);
    const GridField g1 = grand_maximal(f, {0.25}, dirs, heights);
    const GridField g2 = grand_maximal(f, {0.25, 0.125}, dirs, heights);
    CHECK(pointwise_le(g1, g2));
}

TEST_CASE("linearized operator reproduces the maximal function") {
    const int n = 32;
    const DirectionSet dirs = make_directions(Uniform{6}, EveryKth{3});
    const ScaleGrid scales = dyadic_scale_grid(0.5, 2, 3);
    const GridField f = random_field(n, 8);
    for (Averaging mode : {Averaging::exact, Averaging::lattice}) {
        const MaximalFamily fam = directional_family(dirs, scales, n, {}, mode);
        const Selector phi = linearize(fam, f);
        const GridField m = maximal(fam, f);
        CHECK(apply_T(phi, f).values() == m.values());
        for (int p = 0; p < n * n; ++p) {
            CHECK(phi.rects[p].theta == dirs.angles()[phi.direction[p]]);
            CHECK(phi.sector[p] == dirs.sector_of()[phi.direction[p]]);
        }
        // Any other selector over the family stays below the maximal function.
        const Selector other = linearize(fam, random_field(n, 9));
        CHECK(pointwise_le(apply_T(other, f), m));
    }
    // On a zero field every rectangle ties; the first direction, height, ecc and offset win.
    const MaximalFamily fam = directional_family(dirs, scales, n, {}, Averaging::exact);
    const Selector tie = linearize(fam, GridField(n));
    const int center = GridField(n).index(n / 2, n / 2);
    const Rect& r = tie.rects[center];
    CHECK(tie.direction[center] == 0);
    CHECK(r.h == 0.5);
    CHECK(r.ecc == 0.5);
    const Vec2 shift = r.center - GridField(n).pixel_center(center);
    CHECK(shift.dot(r.axis()) == doctest::Approx(0.125));
    CHECK(shift.dot(r.normal()) == doctest::Approx(0.0625));
}

TEST_CASE("T and its adjoint against dense matrices") {
    const int n = 16;
    const DirectionSet dirs = make_directions(Uniform{4}, EveryKth{2});
    const ScaleGrid scales = dyadic_scale_grid(0.5, 2, 2);
    const MaximalFamily fam = directional_family(dirs, scales, n, {}, Averaging::exact);
    const Selector phi = linearize(fam, random_field(n, 12));
    const Matrix T = dense_T(phi);
    const GridField f = random_field(n, 13);
    const GridField g = random_field(n, 14);
    const Eigen::Map<const Eigen::VectorXd> fv(f.values().data(), n * n);
    const Eigen::Map<const Eigen::VectorXd> gv(g.values().data(), n * n);
    const Eigen::VectorXd tf = T * fv;
    const Eigen::VectorXd tg = T.transpose() * gv;
    const GridField Tf = apply_T(phi, f);
    const GridField Tsg = apply_T_adjoint(phi, g);
    for (int p = 0; p < n * n; ++p) {
        CHECK(Tf[p] == doctest::Approx(tf(p)).epsilon(1e-12));
        CHECK(Tsg[p] == doctest::Approx(tg(p)).epsilon(1e-12));
    }
    CHECK(apply_T_adjoint(phi, GridField(n)).l2_norm() == 0.0);

    // Doubled rectangles via the dense assembly of the same selector.
    Selector doubled = phi;
    for (Rect& r : doubled.rects) r = rect_double(r);
    const Matrix Td = dense_T(doubled);
    const Eigen::VectorXd tdf = Td * fv;
    const GridField Ttf = apply_Ttilde(phi, f);
    for (int p = 0; p < n * n; ++p) CHECK(Ttf[p] == doctest::Approx(tdf(p)).epsilon(1e-12));
    CHECK(pointwise_le(Tf, 4.0 * Ttf));
}

TEST_CASE("adjoint identity on larger grids") {
    const int n = 32;
    const DirectionSet dirs = make_directions(Uniform{7}, EveryKth{3});
    const ScaleGrid scales = dyadic_scale_grid(0.5, 3, 3);
    const GridField f = random_field(n, 15);
    const GridField g = random_field(n, 16);
    for (Averaging mode : {Averaging::exact, Averaging::lattice}) {
        const Selector phi = linearize(directional_family(dirs, scales, n, {}, mode), random_field(n, 17));
        const double lhs = inner(apply_T(phi, f), g);
        const double rhs = inner(f, apply_T_adjoint(phi, g));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        const RectOperator T0 = T0_operator(phi, dirs);
        CHECK(inner(T0.apply(f), g) == doctest::Approx(inner(f, T0.adjoint(g))).epsilon(1e-9));
    }
}

TEST_CASE("T0 uses the sector endpoint slopes") {
    const int n = 64;
    const DirectionSet dirs = make_directions(Uniform{6}, EveryKth{3});
    const ScaleGrid scales = dyadic_scale_grid(0.25, 2, 2);
    const Selector phi = linearize(directional_family(dirs, scales, n, {}, Averaging::exact), random_field(n, 18));
    const GridField t0 = apply_T0(phi, dirs, GridField(n, 1.0));
    CHECK(interior_max_error(t0, 2.0, 0.4) <= 4.0 / (n * 0.125));

    const DirectionSet single = make_directions(ExplicitSlopes{{0.5, 0.25}}, ExplicitAnchors{{0.5}});
    const Selector ps = linearize(directional_family(single, scales, n, {}, Averaging::exact), random_field(n, 19));
    Selector turned = ps;
    for (Rect& r : turned.rects) r.theta = single.angles()[0];
    const GridField f = random_field(n, 20);
    const GridField a = apply_T0(ps, single, f);
    const GridField b = 2.0 * apply_Ttilde(turned, f);
    for (std::size_t p = 0; p < a.size(); ++p) CHECK(a[p] == doctest::Approx(b[p]).epsilon(1e-12));

    CHECK_THROWS(apply_T0(ps, make_directions(ExplicitSlopes{{0.5, 0.25}}, ExplicitAnchors{{}}), f));
}

TEST_CASE("centered averages") {
    const int n = 128;
    const GridField one(n, 1.0);
    const RectParam m3{0.25, 0.05, std::exp(-3.0)};
    CHECK(interior_max_error(apply_Tm(m3, one), 0.25, 0.3) <= 0.25 * 2.0 / (n * m3.h * m3.ecc));
    const RectParam m1{0.25, 0.05, std::exp(-1.0)};
    CHECK(interior_max_error(apply_Sm(m1, one), 0.5, 0.3) <= 0.5 * 2.0 / (n * m1.h * m1.ecc));
    const RectParam m1d{0.5, 0.05, std::exp(-1.0)};
    CHECK(apply_Sm(m1, random_field(n, 3)).values() == apply_Tm(m1d, random_field(n, 3)).values());

    const GridField f = random_field(n, 21);
    const GridField g = random_field(n, 22);
    const RectParam m{0.125, 0.07, 0.25};
    CHECK(inner(apply_Tm(m, f), g) == doctest::Approx(inner(f, apply_Tm(m, g))).epsilon(1e-9));
    CHECK(inner(apply_Sm(m, f), g) == doctest::Approx(inner(f, apply_Sm(m, g))).epsilon(1e-9));
    for (int j = 1; j <= wn_terms(m); ++j)
        CHECK(inner(apply_Hnj(m, j, f), g) == doctest::Approx(inner(f, apply_Hnj(m, j, g))).epsilon(1e-9));
    CHECK(inner(apply_Wn(m, f), g) == doctest::Approx(inner(f, apply_Wn(m, g))).epsilon(1e-9));

    const RectParam shortm{0.0625, 0.0, 0.25};
    CHECK(interior_max_error(apply_Wn(shortm, one), 1.0, 0.45) <= 1e-12);
    CHECK(interior_max_error(apply_Hnj(shortm, 1, one), 1.0, 0.45) <= 1e-12);
    CHECK(interior_max_error(maximal_y(one, dyadic_radii(n)), 1.0, 0.45) <= 1e-12);

    const GridField my = maximal_y(f, dyadic_radii(n));
    GridField hmax(n);
    for (int j = 1; j <= wn_terms(m); ++j) hmax = pointwise_max(hmax, apply_Hnj(m, j, f));
    CHECK(pointwise_le(apply_Wn(m, f), hmax, 1e-12));
}

TEST_CASE("H_{n,j} and M^y against one-dimensional enumeration") {
    const int n = 64;
    GridField row(n);
    for (int i = 0; i < n; ++i) row(i, 32) = 1.0;
    const std::vector<double> radii = dyadic_radii(n);
    const GridField my = maximal_y(row, radii);
    for (int d = 0; d < 20; ++d) {
        // Overlap of [d - R, d + R] with the lit pixel [-1/2, 1/2], in pixel units.
        double best = 0.0;
        for (double rho : radii) {
            const double R = rho * n;
            const double overlap = std::max(0.0, std::min(d + R, 0.5) - std::max(d - R, -0.5));
            best = std::max(best, overlap / (2 * R));
        }
        CHECK(my(10, 32 + d) == doctest::Approx(best).epsilon(1e-12));
    }
    // Centered vertical averages dominate H_{n,j}, and M^y dominates the averages.
    const GridField f = random_field(n, 40);
    const RectParam m{0.125, 0.0, 0.125};
    const GridField myf = maximal_y(f, radii);
    for (int j = 1; j <= wn_terms(m); ++j) CHECK(pointwise_le(apply_Hnj(m, j, f), myf, 1e-12));
}

TEST_CASE("centered operators and the grand maximal function") {
    const int n = 64;
    const GridField f = random_field(n, 50);
    const double theta = std::atan(0.1);
    const DirectionSet dirs = make_directions(ExplicitSlopes{{0.1}}, AllAnchors{});
    const std::vector<double> eccs{0.25, 0.125};
    const GridField gm = grand_maximal(f, eccs, dirs, {0.5, 0.25}, 3, Averaging::exact);
    for (double ecc : eccs) {
        const RectParam m{0.25, theta, ecc};
        // l_m^{-1} <= 1/|log ecc|, and the doubled rectangle is in the family.
        CHECK(pointwise_le(apply_Sm(m, f), gm, 1e-12));
        CHECK(pointwise_le(apply_Tm(m, f), gm, 1e-12));
    }
}
