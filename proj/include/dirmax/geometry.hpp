/**
 * @file geometry.hpp
 * @brief Rotated rectangles and finite slope sets.
 *
 * A Rect is described by its center, the length h of its longest side, the
 * eccentricity ecc = width / h and the angle theta in [0, pi) of the long
 * side. All quantities are in domain units (the unit square).
 *
 * DirectionSet stores a finite set of slopes in [0, 1] in strictly
 * descending order together with a distinguished anchor subset. Slopes are
 * converted to angles once, at construction.
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace dirmax {

inline constexpr double kClipEps = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    constexpr bool operator==(const Vec2&) const = default;
};

struct Rect {
    Vec2 center;
    double h = 1.0;      ///< longest side
    double ecc = 1.0;    ///< width / h, in (0, 1]
    double theta = 0.0;  ///< angle of the long side, in [0, pi)

    double width() const { return ecc * h; }
    double area() const { return ecc * h * h; }
    Vec2 axis() const { return {std::cos(theta), std::sin(theta)}; }
    Vec2 normal() const { return {-std::sin(theta), std::cos(theta)}; }

    /// Corners in counter-clockwise order.
    std::array<Vec2, 4> corners() const;
};

/// Wraps an angle into [0, pi).
double normalize_angle(double theta);

/// Validating constructor; throws std::invalid_argument on bad parameters.
Rect make_rect(Vec2 center, double h, double ecc, double theta);

bool rect_contains(const Rect& r, Vec2 p);

/// Area of r1 ∩ r2 by clipping r1 against the four half-planes of r2.
double rect_intersection_area(const Rect& r1, const Rect& r2);

/// Part of a convex polygon inside r (Sutherland-Hodgman against r's four sides).
std::vector<Vec2> clip_to_rect(std::vector<Vec2> poly, const Rect& r);

/// Area of r1 ∩ r2 ∩ [0, 1]^2.
double rect_intersection_area_in_domain(const Rect& r1, const Rect& r2);

/// Same center and slope, both sides doubled.
Rect rect_double(const Rect& r);

/// Same center, both sides doubled, long side turned to new_theta.
Rect rect_reslope(const Rect& r, double new_theta);

double polygon_area(const std::vector<Vec2>& poly);

// ---------------------------------------------------------------------------
// Direction sets
// ---------------------------------------------------------------------------

struct Uniform {
    int count = 1;
};
struct Lacunary {
    double ratio = 0.5;
    int count = 1;
};
struct ExplicitSlopes {
    std::vector<double> slopes;
};
using DirectionKind = std::variant<Uniform, Lacunary, ExplicitSlopes>;

struct EveryKth {
    int k = 1;
};
struct ExplicitAnchors {
    std::vector<double> slopes;
};
struct AllAnchors {};
using AnchorRule = std::variant<EveryKth, ExplicitAnchors, AllAnchors>;

/// Finite slope set with anchors and the sector partition they induce.
///
/// Sector numbering: a slope t lies in sector c = #{anchors with slope >= t}.
/// Sector c >= 1 is opened by the c-th largest anchor and contains that
/// anchor together with every slope strictly between it and the next anchor.
/// Sector 0 holds slopes above the largest anchor (possibly none). Outermost
/// sectors have a single anchor endpoint which serves as both endpoints.
class DirectionSet {
public:
    DirectionSet() = default;
    DirectionSet(std::vector<double> slopes, std::vector<int> anchors);

    int size() const { return static_cast<int>(slopes_.size()); }
    const std::vector<double>& slopes() const { return slopes_; }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<int>& anchors() const { return anchors_; }
    const std::vector<int>& sector_of() const { return sector_of_; }
    int sector_count() const { return static_cast<int>(anchors_.size()) + 1; }
    bool is_anchor(int index) const;

    /// Direction indices whose slope lies in the given sector.
    std::vector<int> sector_members(int sector) const;
    /// Indices of the two anchors bounding a sector (upper, lower).
    std::pair<int, int> sector_endpoints(int sector) const;
    /// Sector of an arbitrary slope value under the same convention.
    int sector_of_slope(double slope) const;

    std::vector<int> all_indices() const;

private:
    std::vector<double> slopes_;
    std::vector<double> angles_;
    std::vector<int> anchors_;
    std::vector<int> sector_of_;
};

DirectionSet make_directions(const DirectionKind& kind, const AnchorRule& anchors);

}  // namespace dirmax
