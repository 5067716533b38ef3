#include "dirmax/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirmax {

DirectionNotPrepared::DirectionNotPrepared(double theta)
    : std::out_of_range("direction not prepared: theta = " + std::to_string(theta)) {}

RotatedLattice::RotatedLattice(int n, double theta) : n_(n), theta_(normalize_angle(theta)) {
    if (n < 1) throw std::invalid_argument("lattice: n must be >= 1");
    s_ = 1.0 / n;
    inv_s_ = static_cast<double>(n);
    // Covers [-s, 1+s]^2 around a pixel-center origin.
    K_ = static_cast<int>(std::ceil(std::sqrt(0.5) * n + 3.0));
    L_ = 2 * K_ + 1;
    u_ = {std::cos(theta_), std::sin(theta_)};
    v_ = {-std::sin(theta_), std::cos(theta_)};
    const double c = (n / 2 + 0.5) * s_;
    origin_ = {c, c};
}

AxisOffsets axis_offsets(double half) {
    const double c0 = 0.5 - half;
    const double c1 = 0.5 + half;
    const double f0 = std::floor(c0);
    const double f1 = std::floor(c1);
    return {static_cast<int>(f0), c0 - f0, static_cast<int>(f1), c1 - f1};
}

AxisTaps general_taps(double boundary_lo, double boundary_hi, int L) {
    const double f0 = std::floor(boundary_lo);
    const double f1 = std::floor(boundary_hi);
    return {clamp_tap(static_cast<int>(f0), boundary_lo - f0, L), clamp_tap(static_cast<int>(f1), boundary_hi - f1, L)};
}

namespace {

AxisTaps axis_taps(double coord, double half, int K, int L) {
    const double r = std::round(coord);
    if (std::abs(coord - r) < kSnapTol) return snapped_taps(static_cast<int>(r) + K, axis_offsets(half), L);
    const double base = coord + K + 0.5;
    return general_taps(base - half, base + half, L);
}

// Visits the (up to) four in-grid pixels of the bilinear stencil at world point (x, y).
template <class Fn>
inline void for_bilinear_taps(int n, double x, double y, Fn&& fn) {
    const double px = x * n - 0.5;
    const double py = y * n - 0.5;
    if (px <= -1.0 || py <= -1.0 || px >= n || py >= n) return;
    const int i0 = static_cast<int>(std::floor(px));
    const int j0 = static_cast<int>(std::floor(py));
    const double fx = px - i0;
    const double fy = py - j0;
    const bool i0_ok = i0 >= 0, i1_ok = i0 + 1 < n, j0_ok = j0 >= 0, j1_ok = j0 + 1 < n;
    if (j0_ok) {
        if (i0_ok) fn(j0 * n + i0, (1.0 - fx) * (1.0 - fy));
        if (i1_ok) fn(j0 * n + i0 + 1, fx * (1.0 - fy));
    }
    if (j1_ok) {
        if (i0_ok) fn((j0 + 1) * n + i0, (1.0 - fx) * fy);
        if (i1_ok) fn((j0 + 1) * n + i0 + 1, fx * fy);
    }
}

}  // namespace

RectTaps rect_taps(const RotatedLattice& lat, const Rect& r) {
    const HalfExtents he = lattice_halves(r.h, r.ecc, lat.n());
    const Vec2 ab = lat.to_lattice(r.center);
    return {axis_taps(ab.x, he.along, lat.half(), lat.extent()), axis_taps(ab.y, he.across, lat.half(), lat.extent()),
            1.0 / (4.0 * he.along * he.across)};
}

// ---------------------------------------------------------------------------

DirectionalSat::DirectionalSat(const GridField& f, double theta) : lat_(f.n(), theta) {
    const int L = lat_.extent();
    const int K = lat_.half();
    const int n = f.n();
    const double s = lat_.spacing();
    const Vec2 u = lat_.u();
    const Vec2 v = lat_.v();
    const Vec2 o = lat_.origin();
    const std::vector<double>& fv = f.values();

    samples_.assign(static_cast<std::size_t>(L) * L, 0.0);
    for (int ib = 0; ib < L; ++ib) {
        const double bs = (ib - K) * s;
        double* row = samples_.data() + static_cast<std::size_t>(ib) * L;
        for (int ia = 0; ia < L; ++ia) {
            const double as = (ia - K) * s;
            const double x = o.x + u.x * as + v.x * bs;
            const double y = o.y + u.y * as + v.y * bs;
            double acc = 0.0;
            for_bilinear_taps(n, x, y, [&](int p, double w) { acc += w * fv[p]; });
            row[ia] = acc;
        }
    }

    const std::size_t m = static_cast<std::size_t>(L) + 1;
    sums_.assign(m * m, 0.0);
    for (int ib = 0; ib < L; ++ib) {
        double run = 0.0;
        const double* src = samples_.data() + static_cast<std::size_t>(ib) * L;
        const double* prev = sums_.data() + static_cast<std::size_t>(ib) * m;
        double* dst = sums_.data() + static_cast<std::size_t>(ib + 1) * m;
        for (int ia = 0; ia < L; ++ia) {
            run += src[ia];
            dst[ia + 1] = prev[ia + 1] + run;
        }
    }
}

double DirectionalSat::average(const Rect& r) const {
    if (std::abs(normalize_angle(r.theta) - lat_.theta()) > 1e-12) throw DirectionNotPrepared(r.theta);
    return average(rect_taps(lat_, r));
}

// ---------------------------------------------------------------------------

LatticeSplat::LatticeSplat(int n, double theta) : lat_(n, theta) {
    const std::size_t m = static_cast<std::size_t>(lat_.extent()) + 1;
    coeff_.assign(m * m, 0.0);
}

void LatticeSplat::add_corner(Tap a, Tap b, double c) {
    const std::size_t m = static_cast<std::size_t>(lat_.extent()) + 1;
    double* row0 = coeff_.data() + static_cast<std::size_t>(b.index) * m + a.index;
    double* row1 = row0 + m;
    row0[0] += c * (1.0 - b.weight) * (1.0 - a.weight);
    row0[1] += c * (1.0 - b.weight) * a.weight;
    row1[0] += c * b.weight * (1.0 - a.weight);
    row1[1] += c * b.weight * a.weight;
}

void LatticeSplat::add(const RectTaps& t, double weight) {
    const double c = weight * t.inv_norm;
    add_corner(t.a.hi, t.b.hi, c);
    add_corner(t.a.lo, t.b.hi, -c);
    add_corner(t.a.hi, t.b.lo, -c);
    add_corner(t.a.lo, t.b.lo, c);
}

void LatticeSplat::finish_into(GridField& out) const {
    if (out.n() != lat_.n()) throw std::invalid_argument("splat: grid size mismatch");
    const int L = lat_.extent();
    const int K = lat_.half();
    const int n = out.n();
    const std::size_t m = static_cast<std::size_t>(L) + 1;
    // Suffix sums: T[j][i] = sum over j' >= j, i' >= i; sample (ia, ib) sees T[ib+1][ia+1].
    std::vector<double> t = coeff_;
    for (int j = L; j >= 0; --j) {
        double run = 0.0;
        for (int i = L; i >= 0; --i) {
            run += t[static_cast<std::size_t>(j) * m + i];
            const double below = (j < L) ? t[static_cast<std::size_t>(j + 1) * m + i] : 0.0;
            t[static_cast<std::size_t>(j) * m + i] = run + below;
        }
    }
    const double s = lat_.spacing();
    const Vec2 u = lat_.u();
    const Vec2 v = lat_.v();
    const Vec2 o = lat_.origin();
    std::vector<double>& ov = out.values();
    for (int ib = 0; ib < L; ++ib) {
        const double bs = (ib - K) * s;
        for (int ia = 0; ia < L; ++ia) {
            const double g = t[static_cast<std::size_t>(ib + 1) * m + ia + 1];
            if (g == 0.0) continue;
            const double as = (ia - K) * s;
            const double x = o.x + u.x * as + v.x * bs;
            const double y = o.y + u.y * as + v.y * bs;
            for_bilinear_taps(n, x, y, [&](int p, double w) { ov[p] += w * g; });
        }
    }
}

// ---------------------------------------------------------------------------

SatBundle::SatBundle(const GridField& f, const std::vector<double>& thetas, double exact_below_px)
    : f_(f), exact_below_px_(exact_below_px) {
    for (double t : thetas) {
        if (has_direction(t)) continue;
        sats_.emplace_back(f, t);
    }
}

bool SatBundle::has_direction(double theta) const {
    const double t = normalize_angle(theta);
    return std::any_of(sats_.begin(), sats_.end(),
                       [&](const DirectionalSat& d) { return std::abs(d.lattice().theta() - t) <= 1e-12; });
}

const DirectionalSat& SatBundle::direction(double theta) const {
    const double t = normalize_angle(theta);
    for (const auto& d : sats_)
        if (std::abs(d.lattice().theta() - t) <= 1e-12) return d;
    throw DirectionNotPrepared(theta);
}

double SatBundle::average(const Rect& r) const {
    const DirectionalSat& d = direction(r.theta);
    if (r.width() < exact_below_px_ * f_.spacing()) return rect_average_exact(f_, r);
    return d.average(r);
}

double rect_average_fast(const SatBundle& bundle, const Rect& r) { return bundle.average(r); }

}  // namespace dirmax
