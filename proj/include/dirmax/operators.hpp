/**
 * @file operators.hpp
 * @brief Directional maximal operators, their linearizations and the
 * centered averaging operators T_m, S_m, H_{n,j}, W_n, M^y.
 *
 * Two averaging backends are available. `Averaging::exact` counts pixel
 * centers inside each rectangle and divides by the continuous area; it is
 * the reference used for small grids. `Averaging::lattice` evaluates
 * averages on per-direction rotated lattices (see lattice.hpp); rectangle
 * centers produced by the lattice scan sit on lattice points, so linearized
 * operators reproduce the maximal values bit for bit.
 *
 * Maximal operators are suprema over a finite MaximalFamily: a set of
 * directions, a list of (height, eccentricity, weight) scale terms and an odd
 * number of translates per rectangle axis. The translates realize the
 * constraint x in R: offsets t in [-1/2, 1/2] of the half sides, t = 0
 * included.
 */
#pragma once

#include "dirmax/geometry.hpp"
#include "dirmax/grid.hpp"

#include <vector>

namespace dirmax {

enum class Averaging { exact, lattice };

/// One admissible rectangle shape with its multiplicative weight.
struct ScaleTerm {
    double h = 1.0;
    double ecc = 1.0;
    double weight = 1.0;
    int height_index = 0;
    int ecc_index = 0;
};

struct ScaleGrid {
    std::vector<double> heights;  ///< descending
    std::vector<double> eccs;     ///< descending, in (0, 1]
    int offsets_per_axis = 3;     ///< odd

    void validate() const;
    /// Pairs with ecc * h >= 1/n, ordered by height index then ecc index.
    std::vector<ScaleTerm> admissible(int n) const;
};

/// heights h_max * 2^-k (k < height_count), eccs 2^-k (k = 1..ecc_count).
ScaleGrid dyadic_scale_grid(double h_max, int height_count, int ecc_count, int offsets_per_axis = 3);

struct DirectionFilter {
    enum class Kind { all, sector, anchors };
    Kind kind = Kind::all;
    int sector = 0;

    static DirectionFilter everything() { return {}; }
    static DirectionFilter only_sector(int s) { return {Kind::sector, s}; }
    static DirectionFilter only_anchors() { return {Kind::anchors, 0}; }
};

/// Direction indices admitted by the filter; throws if none remain.
std::vector<int> filter_directions(const DirectionSet& dirs, DirectionFilter filter);

struct MaximalFamily {
    DirectionSet dirs;
    std::vector<int> directions;  ///< indices into dirs, scan order
    std::vector<ScaleTerm> scales;
    int offsets_per_axis = 3;
    Averaging mode = Averaging::lattice;
};

MaximalFamily directional_family(const DirectionSet& dirs, const ScaleGrid& scales, int n,
                                 DirectionFilter filter = {}, Averaging mode = Averaging::lattice);
/// Fixed eccentricity, all directions, the given heights.
MaximalFamily eccentricity_family(const DirectionSet& dirs, double ecc, const std::vector<double>& heights, int n,
                                  int offsets_per_axis = 3, Averaging mode = Averaging::lattice);
/// Union over ecc in ecc_list of the eccentricity families, weighted by 1/|log ecc|.
MaximalFamily grand_family(const DirectionSet& dirs, const std::vector<double>& ecc_list,
                           const std::vector<double>& heights, int n, int offsets_per_axis = 3,
                           Averaging mode = Averaging::lattice);

/// Per-pixel choice x -> R_x with its weight, direction index and sector.
struct Selector {
    int n = 0;
    Averaging mode = Averaging::lattice;
    std::vector<Rect> rects;
    std::vector<double> weights;
    std::vector<int> direction;
    std::vector<int> sector;
};

/// Pointwise supremum of weight * average(|f|, R) over the family.
GridField maximal(const MaximalFamily& family, const GridField& f);

/// Argmax selector: for each pixel the first (direction, height, ecc,
/// offset) attaining the maximum.
Selector linearize(const MaximalFamily& family, const GridField& f);

/// Selector built from per-pixel (direction slot, scale term, offset code)
/// choices of a family; offset code = oa * P + ob.
Selector selector_from_choices(const MaximalFamily& family, int n, const std::vector<int>& slot,
                               const std::vector<int>& term, const std::vector<int>& offset);

GridField maximal_directional(const GridField& f, const DirectionSet& dirs, const ScaleGrid& scales,
                              DirectionFilter filter = {}, Averaging mode = Averaging::lattice);
GridField maximal_eccentricity(const GridField& f, double ecc, const DirectionSet& dirs,
                               const std::vector<double>& heights, int offsets_per_axis = 3,
                               Averaging mode = Averaging::lattice);
GridField grand_maximal(const GridField& f, const std::vector<double>& ecc_list, const DirectionSet& dirs,
                        const std::vector<double>& heights, int offsets_per_axis = 3,
                        Averaging mode = Averaging::lattice);

// ---------------------------------------------------------------------------
// Linear operators built from (pixel, rectangle, weight) terms
// ---------------------------------------------------------------------------

class RectOperator {
public:
    RectOperator(int n, Averaging mode) : n_(n), mode_(mode) {}

    void add(int pixel, const Rect& r, double weight);

    int n() const { return n_; }
    Averaging mode() const { return mode_; }
    std::size_t term_count() const { return terms_.size(); }

    /// (Af)(x) = sum over terms at x of weight * average(f, R).
    GridField apply(const GridField& f) const;
    /// Exact adjoint of apply with respect to the spacing^2 inner product.
    GridField adjoint(const GridField& g) const;

private:
    struct Term {
        int pixel;
        Rect rect;
        double weight;
    };
    std::vector<std::vector<int>> groups() const;

    int n_;
    Averaging mode_;
    std::vector<Term> terms_;
};

RectOperator T_operator(const Selector& phi);
/// Doubled rectangles, same center and slope.
RectOperator Ttilde_operator(const Selector& phi);
/// Doubled rectangles turned to the two anchor slopes bounding each sector.
RectOperator T0_operator(const Selector& phi, const DirectionSet& dirs);

GridField apply_T(const Selector& phi, const GridField& f);
GridField apply_T_adjoint(const Selector& phi, const GridField& g);
GridField apply_Ttilde(const Selector& phi, const GridField& f);
GridField apply_T0(const Selector& phi, const DirectionSet& dirs, const GridField& f);

/// Same-sector part of TT*: sum_i chi_{A_i} T T* (chi_{A_i} f).
GridField apply_T1(const Selector& phi, const GridField& f);

// ---------------------------------------------------------------------------
// Centered averages
// ---------------------------------------------------------------------------

/// Pixel offsets whose centers lie in a rectangle placed relative to a
/// pixel; stored as one contiguous run per row, rows ascending.
struct Stencil {
    struct Run {
        int dj;
        int lo;
        int hi;
    };
    std::vector<Run> runs;
    double area = 1.0;  ///< continuous normalizer
};

/// Offsets d with d * spacing inside r, where r.center is the displacement
/// of the rectangle center from the pixel center.
Stencil make_stencil(int n, const Rect& r);

/// out(x) = scale * spacing^2 / area * sum of f over x + stencil.
GridField stencil_average(const GridField& f, const Stencil& st, double scale = 1.0);

/// m = (h, theta, ecc) with weight l_m = 1 + |log ecc|.
struct RectParam {
    double h = 1.0;
    double theta = 0.0;
    double ecc = 1.0;

    double l() const { return 1.0 + std::abs(std::log(ecc)); }
    Rect shape() const { return Rect{{0.0, 0.0}, h, ecc, normalize_angle(theta)}; }
};

GridField apply_Tm(const RectParam& m, const GridField& f);
GridField apply_Sm(const RectParam& m, const GridField& f);

/// Number of H_{n,j} terms averaged by W_n: floor(2 l_n), at least 1.
int wn_terms(const RectParam& m);
/// Vertical half-length eta k 2^j, clamped to 1.
double hnj_radius(const RectParam& m, int j);
GridField apply_Hnj(const RectParam& m, int j, const GridField& f);
GridField apply_Wn(const RectParam& m, const GridField& f);

/// Dyadic radii spacing * 2^k up to 1.
std::vector<double> dyadic_radii(int n);
/// Integral of the pixelwise-constant field over the vertical interval of
/// half-length rho centered at each pixel center, divided by 2 rho.
GridField vertical_average(const GridField& f, double rho);
GridField maximal_y(const GridField& f, const std::vector<double>& radii);

}  // namespace dirmax
