/**
 * @file grid.hpp
 * @brief Raster functions on the unit square and exact rectangle averages.
 *
 * Pixel (i, j) covers [i/n, (i+1)/n) x [j/n, (j+1)/n); i runs along x.
 * Values are stored row-major with rows indexed by j. Functions are
 * extended by zero outside the unit square.
 */
#pragma once

#include "dirmax/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dirmax {

class GridField {
public:
    GridField() = default;
    explicit GridField(int n, double value = 0.0);
    GridField(int n, std::vector<double> values);

    int n() const { return n_; }
    double spacing() const { return 1.0 / n_; }
    std::size_t size() const { return values_.size(); }
    int index(int i, int j) const { return j * n_ + i; }
    Vec2 pixel_center(int i, int j) const { return {(i + 0.5) / n_, (j + 0.5) / n_}; }
    Vec2 pixel_center(int p) const { return pixel_center(p % n_, p / n_); }

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(j) * n_ + i]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * n_ + i]; }
    double& operator[](std::size_t p) { return values_[p]; }
    double operator[](std::size_t p) const { return values_[p]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Zero-extended value at pixel indices that may lie outside the grid.
    double value_or_zero(int i, int j) const {
        return (i < 0 || j < 0 || i >= n_ || j >= n_) ? 0.0 : (*this)(i, j);
    }

    double l2_norm() const;
    double max_value() const;
    bool all_finite() const;

private:
    int n_ = 0;
    std::vector<double> values_;
};

/// L2 inner product with the spacing^2 quadrature weight.
double inner(const GridField& a, const GridField& b);
GridField abs(const GridField& f);
GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double c, const GridField& f);
GridField pointwise_max(const GridField& a, const GridField& b);
/// Scales f to unit L2 norm; a zero field is returned unchanged.
GridField normalized(const GridField& f);

/// Bilinear interpolation between pixel centers, zero outside the grid.
double bilinear(const GridField& f, Vec2 p);

/// The in-grid pixels and weights that bilinear() combines at p.
struct PixelWeight {
    int pixel;
    double weight;
};
std::vector<PixelWeight> bilinear_weights(int n, Vec2 p);

/// Integer-box cumulative sums: S(i, j) = sum of values(i', j') for i' < i, j' < j.
class SummedAreaTable {
public:
    explicit SummedAreaTable(const GridField& f);

    int n() const { return n_; }
    double at(int i, int j) const { return sums_[static_cast<std::size_t>(j) * (n_ + 1) + i]; }
    /// Sum over pixels i0 <= i < i1, j0 <= j < j1 (indices clamped to the grid).
    double box_sum(int i0, int i1, int j0, int j1) const;
    /// Integral of the pixelwise-constant field over [x0,x1] x [y0,y1] (domain units).
    double integral(double x0, double x1, double y0, double y1) const;

private:
    double cumulative(double x, double y) const;

    int n_ = 0;
    std::vector<double> sums_;
};

SummedAreaTable sat_build(const GridField& f);

/// Mean of f over the pixel centers inside r, normalized by the continuous
/// area of r. Falls back to bilinear(f, r.center) when r contains no pixel
/// center at all (including virtual centers outside the grid).
double rect_average_exact(const GridField& f, const Rect& r);

/// Pixels whose centers lie in r, restricted to the grid. Empty result with
/// `any_center == false` means r contains no lattice center at all.
struct PixelCover {
    std::vector<int> pixels;
    bool any_center = false;
};
PixelCover rect_pixels(int n, const Rect& r);

// Serialization: a header line "n=<int>" then n rows of n values (text), or
// the same header followed by n*n little-endian doubles (binary).
void write_text(std::ostream& os, const GridField& f);
GridField read_text(std::istream& is);
void write_binary(std::ostream& os, const GridField& f);
GridField read_binary(std::istream& is);

}  // namespace dirmax
