#include "dirmax/geometry.hpp"

#include <algorithm>
#include <string>

namespace dirmax {

std::array<Vec2, 4> Rect::corners() const {
    const Vec2 a = axis() * (0.5 * h);
    const Vec2 b = normal() * (0.5 * width());
    return {center - a - b, center + a - b, center + a + b, center - a + b};
}

double normalize_angle(double theta) {
    constexpr double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    if (t >= pi) t = 0.0;
    return t;
}

Rect make_rect(Vec2 center, double h, double ecc, double theta) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("rect: h must be positive");
    if (!(ecc > 0.0) || ecc > 1.0) throw std::invalid_argument("rect: ecc must lie in (0, 1]");
    if (!std::isfinite(center.x) || !std::isfinite(center.y))
        throw std::invalid_argument("rect: center must be finite");
    return Rect{center, h, ecc, normalize_angle(theta)};
}

bool rect_contains(const Rect& r, Vec2 p) {
    const Vec2 d = p - r.center;
    const double c = std::cos(r.theta);
    const double s = std::sin(r.theta);
    const double along = d.x * c + d.y * s;
    const double across = -d.x * s + d.y * c;
    return std::abs(along) <= 0.5 * r.h + kClipEps && std::abs(across) <= 0.5 * r.width() + kClipEps;
}

double polygon_area(const std::vector<Vec2>& poly) {
    const std::size_t m = poly.size();
    if (m < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < m; ++i) twice += poly[i].cross(poly[(i + 1) % m]);
    return 0.5 * std::abs(twice);
}

namespace {

// Keeps the part of a convex polygon with dot(p - origin, n) <= limit.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 origin, Vec2 n, double limit) {
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    out.reserve(m + 2);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        const double da = (a - origin).dot(n) - limit;
        const double db = (b - origin).dot(n) - limit;
        const bool ina = da <= kClipEps;
        const bool inb = db <= kClipEps;
        if (ina) out.push_back(a);
        if (ina != inb) {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

}  // namespace

std::vector<Vec2> clip_to_rect(std::vector<Vec2> poly, const Rect& r) {
    const Vec2 u = r.axis();
    const Vec2 v = r.normal();
    const double hu = 0.5 * r.h;
    const double hv = 0.5 * r.width();
    poly = clip_half_plane(poly, r.center, u, hu);
    poly = clip_half_plane(poly, r.center, u * -1.0, hu);
    poly = clip_half_plane(poly, r.center, v, hv);
    poly = clip_half_plane(poly, r.center, v * -1.0, hv);
    return poly;
}

double rect_intersection_area(const Rect& r1, const Rect& r2) {
    const double reach = 0.5 * (r1.h + r2.h) * std::sqrt(2.0);
    const Vec2 d = r1.center - r2.center;
    if (d.dot(d) > reach * reach) return 0.0;
    const auto c = r1.corners();
    const double a = polygon_area(clip_to_rect({c.begin(), c.end()}, r2));
    return std::clamp(a, 0.0, std::min(r1.area(), r2.area()));
}

double rect_intersection_area_in_domain(const Rect& r1, const Rect& r2) {
    const double reach = 0.5 * (r1.h + r2.h) * std::sqrt(2.0);
    const Vec2 d = r1.center - r2.center;
    if (d.dot(d) > reach * reach) return 0.0;
    const auto c = r1.corners();
    const Rect unit{{0.5, 0.5}, 1.0, 1.0, 0.0};
    const double a = polygon_area(clip_to_rect(clip_to_rect({c.begin(), c.end()}, r2), unit));
    return std::clamp(a, 0.0, std::min(r1.area(), r2.area()));
}

Rect rect_double(const Rect& r) { return Rect{r.center, 2.0 * r.h, r.ecc, r.theta}; }

Rect rect_reslope(const Rect& r, double new_theta) {
    return Rect{r.center, 2.0 * r.h, r.ecc, normalize_angle(new_theta)};
}

// ---------------------------------------------------------------------------

DirectionSet::DirectionSet(std::vector<double> slopes, std::vector<int> anchors)
    : slopes_(std::move(slopes)), anchors_(std::move(anchors)) {
    if (slopes_.empty()) throw std::invalid_argument("direction set: empty slope list");
    for (std::size_t i = 0; i < slopes_.size(); ++i) {
        const double t = slopes_[i];
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("direction set: slope outside [0, 1]");
        if (i > 0 && !(t < slopes_[i - 1]))
            throw std::invalid_argument("direction set: slopes must be strictly descending");
    }
    std::sort(anchors_.begin(), anchors_.end());
    anchors_.erase(std::unique(anchors_.begin(), anchors_.end()), anchors_.end());
    for (int a : anchors_)
        if (a < 0 || a >= size()) throw std::invalid_argument("direction set: anchor index out of range");

    angles_.reserve(slopes_.size());
    for (double t : slopes_) angles_.push_back(std::atan(t));

    sector_of_.assign(slopes_.size(), 0);
    for (int i = 0; i < size(); ++i) sector_of_[i] = sector_of_slope(slopes_[i]);
}

bool DirectionSet::is_anchor(int index) const {
    return std::binary_search(anchors_.begin(), anchors_.end(), index);
}

int DirectionSet::sector_of_slope(double slope) const {
    int c = 0;
    for (int a : anchors_)
        if (slopes_[a] >= slope) ++c;
    return c;
}

std::vector<int> DirectionSet::sector_members(int sector) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (sector_of_[i] == sector) out.push_back(i);
    return out;
}

std::pair<int, int> DirectionSet::sector_endpoints(int sector) const {
    if (anchors_.empty()) throw std::invalid_argument("direction set has no anchors");
    if (sector < 0 || sector > static_cast<int>(anchors_.size()))
        throw std::out_of_range("sector index out of range");
    const int last = static_cast<int>(anchors_.size());
    if (sector == 0) return {anchors_.front(), anchors_.front()};
    if (sector == last) return {anchors_.back(), anchors_.back()};
    return {anchors_[sector - 1], anchors_[sector]};
}

std::vector<int> DirectionSet::all_indices() const {
    std::vector<int> out(slopes_.size());
    for (int i = 0; i < size(); ++i) out[i] = i;
    return out;
}

namespace {

std::vector<double> slopes_for(const DirectionKind& kind) {
    return std::visit(
        [](const auto& k) -> std::vector<double> {
            using K = std::decay_t<decltype(k)>;
            std::vector<double> out;
            if constexpr (std::is_same_v<K, Uniform>) {
                if (k.count < 1) throw std::invalid_argument("uniform: N must be >= 1");
                for (int i = k.count; i >= 1; --i) out.push_back(static_cast<double>(i) / k.count);
            } else if constexpr (std::is_same_v<K, Lacunary>) {
                if (k.count < 1) throw std::invalid_argument("lacunary: N must be >= 1");
                if (!(k.ratio > 0.0 && k.ratio < 1.0)) throw std::invalid_argument("lacunary: ratio must lie in (0, 1)");
                double t = 1.0;
                for (int i = 1; i <= k.count; ++i) {
                    t *= k.ratio;
                    out.push_back(t);
                }
            } else {
                out = k.slopes;
            }
            return out;
        },
        kind);
}

}  // namespace

DirectionSet make_directions(const DirectionKind& kind, const AnchorRule& rule) {
    std::vector<double> slopes = slopes_for(kind);
    if (slopes.empty()) throw std::invalid_argument("direction set: empty slope list");

    std::vector<int> anchors;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, EveryKth>) {
                if (r.k < 1) throw std::invalid_argument("anchor rule: k must be >= 1");
                for (int i = 0; i < static_cast<int>(slopes.size()); i += r.k) anchors.push_back(i);
            } else if constexpr (std::is_same_v<R, ExplicitAnchors>) {
                for (double a : r.slopes) {
                    auto it = std::find(slopes.begin(), slopes.end(), a);
                    if (it == slopes.end())
                        throw std::invalid_argument("anchor rule: anchor " + std::to_string(a) + " is not a slope");
                    anchors.push_back(static_cast<int>(it - slopes.begin()));
                }
            } else {
                for (int i = 0; i < static_cast<int>(slopes.size()); ++i) anchors.push_back(i);
            }
        },
        rule);
    return DirectionSet(std::move(slopes), std::move(anchors));
}

}  // namespace dirmax
