/**
 * @file lattice.hpp
 * @brief Per-direction resampled summed-area tables for rotated rectangles.
 *
 * For a direction theta the field is resampled (bilinear, zero extension) on
 * a square lattice whose axes are (cos theta, sin theta) and its normal, with
 * the grid spacing and an origin at a pixel center, so theta = 0 reproduces
 * the pixel grid. Each lattice sample owns a unit cell; the field is treated
 * as constant on cells and rectangle integrals use fractional cell coverage,
 * which makes every average an O(1) lookup of four bilinear corner values in
 * the cell-boundary summed-area table.
 *
 * Coordinates: a world point p has lattice coordinates
 * (alpha, beta) = ((p - origin).u / s, (p - origin).v / s); the sample with
 * array index ia sits at alpha = ia - K and owns boundary interval
 * [ia, ia + 1] of the table.
 *
 * Lattice centers that are integers to within kSnapTol are snapped, so
 * rectangles produced by scanning integer centers evaluate bit-identically
 * through the generic Rect path.
 */
#pragma once

#include "dirmax/geometry.hpp"
#include "dirmax/grid.hpp"

#include <stdexcept>
#include <vector>

namespace dirmax {

inline constexpr double kSnapTol = 1e-7;

class DirectionNotPrepared : public std::out_of_range {
public:
    explicit DirectionNotPrepared(double theta);
};

class RotatedLattice {
public:
    RotatedLattice(int n, double theta);

    int n() const { return n_; }
    int half() const { return K_; }
    int extent() const { return L_; }
    double spacing() const { return s_; }
    double theta() const { return theta_; }
    Vec2 u() const { return u_; }
    Vec2 v() const { return v_; }
    Vec2 origin() const { return origin_; }

    Vec2 to_lattice(Vec2 p) const {
        const Vec2 d = p - origin_;
        return {d.dot(u_) * inv_s_, d.dot(v_) * inv_s_};
    }
    Vec2 to_world(double alpha, double beta) const { return origin_ + u_ * (alpha * s_) + v_ * (beta * s_); }

private:
    int n_;
    int K_;
    int L_;
    double s_;
    double inv_s_;
    double theta_;
    Vec2 u_;
    Vec2 v_;
    Vec2 origin_;
};

/// Half extents of a rectangle in lattice units: {h/(2s), w/(2s)}.
struct HalfExtents {
    double along;
    double across;
};
inline HalfExtents lattice_halves(double h, double ecc, int n) {
    const double half_n = 0.5 * n;
    return {h * half_n, (ecc * h) * half_n};
}

/// One boundary of a box along an axis as a bilinear tap into the table.
struct Tap {
    int index;
    double weight;
};
struct AxisTaps {
    Tap lo;
    Tap hi;
};

/// Fixed floor/fraction split of the two box boundaries relative to an
/// integer lattice center, shared by all snapped centers of one box size.
struct AxisOffsets {
    int floor_lo;
    double frac_lo;
    int floor_hi;
    double frac_hi;
};
AxisOffsets axis_offsets(double half);

inline Tap clamp_tap(int index, double weight, int L) {
    if (index < 0) return {0, 0.0};
    if (index >= L) return {L - 1, 1.0};
    return {index, weight};
}

inline AxisTaps snapped_taps(int base, const AxisOffsets& off, int L) {
    return {clamp_tap(base + off.floor_lo, off.frac_lo, L), clamp_tap(base + off.floor_hi, off.frac_hi, L)};
}

AxisTaps general_taps(double boundary_lo, double boundary_hi, int L);

/// Box taps plus the 1/(4 ha hb) normalizer of a rectangle on a lattice.
struct RectTaps {
    AxisTaps a;
    AxisTaps b;
    double inv_norm;
};
RectTaps rect_taps(const RotatedLattice& lat, const Rect& r);

/// Resampled field and its cell-boundary summed-area table for one direction.
class DirectionalSat {
public:
    DirectionalSat(const GridField& f, double theta);

    const RotatedLattice& lattice() const { return lat_; }

    /// Interpolated cell-boundary row b of the table at column index i.
    double row_value(Tap b, int i) const {
        const std::size_t m = static_cast<std::size_t>(lat_.extent()) + 1;
        const double* r0 = sums_.data() + static_cast<std::size_t>(b.index) * m + i;
        return (1.0 - b.weight) * r0[0] + b.weight * r0[m];
    }
    /// D[i] = row_value(b.hi, i) - row_value(b.lo, i) for i = 0..L.
    void row_difference(const AxisTaps& b, double* D) const {
        const int L = lat_.extent();
        for (int i = 0; i <= L; ++i) D[i] = row_value(b.hi, i) - row_value(b.lo, i);
    }
    static double column_value(const double* D, Tap a) {
        return (1.0 - a.weight) * D[a.index] + a.weight * D[a.index + 1];
    }
    double box_integral(const AxisTaps& a, const AxisTaps& b) const {
        const double d[4] = {row_value(b.hi, a.hi.index) - row_value(b.lo, a.hi.index),
                             row_value(b.hi, a.hi.index + 1) - row_value(b.lo, a.hi.index + 1),
                             row_value(b.hi, a.lo.index) - row_value(b.lo, a.lo.index),
                             row_value(b.hi, a.lo.index + 1) - row_value(b.lo, a.lo.index + 1)};
        return ((1.0 - a.hi.weight) * d[0] + a.hi.weight * d[1]) - ((1.0 - a.lo.weight) * d[2] + a.lo.weight * d[3]);
    }
    double average(const RectTaps& t) const { return box_integral(t.a, t.b) * t.inv_norm; }

    /// Lattice-path average; r.theta must equal the prepared direction.
    double average(const Rect& r) const;

    /// Resampled sample value (for tests).
    double sample(int ia, int ib) const { return samples_[static_cast<std::size_t>(ib) * lat_.extent() + ia]; }

private:
    RotatedLattice lat_;
    std::vector<double> samples_;
    std::vector<double> sums_;
};

/// Transpose of DirectionalSat::average: accumulates weight * d(average)/d(f).
class LatticeSplat {
public:
    LatticeSplat(int n, double theta);

    const RotatedLattice& lattice() const { return lat_; }
    void add(const RectTaps& t, double weight);
    void add(const Rect& r, double weight) { add(rect_taps(lat_, r), weight); }
    /// out += B^T G where G are the per-sample coefficients.
    void finish_into(GridField& out) const;

private:
    void add_corner(Tap a, Tap b, double c);

    RotatedLattice lat_;
    std::vector<double> coeff_;
};

/// Direction-keyed collection of DirectionalSat plus the exact fallback.
class SatBundle {
public:
    SatBundle(const GridField& f, const std::vector<double>& thetas, double exact_below_px = 3.0);

    bool has_direction(double theta) const;
    const DirectionalSat& direction(double theta) const;
    /// Lattice average, or the exact average when the short side is below
    /// the configured pixel count.
    double average(const Rect& r) const;

private:
    GridField f_;
    std::vector<DirectionalSat> sats_;
    double exact_below_px_;
};

double rect_average_fast(const SatBundle& bundle, const Rect& r);

}  // namespace dirmax
