#include "dirmax/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirmax {

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::bump: return "bump";
        case FamilyKind::ball: return "ball";
        case FamilyKind::strip: return "strip";
        case FamilyKind::kakeya_fan: return "kakeya-fan";
    }
    return "?";
}

FamilyKind parse_family(const std::string& name) {
    for (FamilyKind k : all_families())
        if (family_name(k) == name) return k;
    throw std::invalid_argument("unknown function family: " + name);
}

const std::vector<FamilyKind>& all_families() {
    static const std::vector<FamilyKind> kinds{FamilyKind::bump, FamilyKind::ball, FamilyKind::strip,
                                               FamilyKind::kakeya_fan};
    return kinds;
}

GridField ball_indicator(int n, Vec2 center, double radius) {
    GridField f(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 d = f.pixel_center(i, j) - center;
            if (d.dot(d) <= radius * radius) f(i, j) = 1.0;
        }
    return f;
}

GridField strip_indicator(int n, Vec2 center, double length, double width, double theta) {
    const Rect r{center, length, std::min(1.0, width / length), normalize_angle(theta)};
    GridField f(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (rect_contains(r, f.pixel_center(i, j))) f(i, j) = 1.0;
    return f;
}

GridField make_bump(int n, Rng& rng) {
    GridField f(n, 0.0);
    const int count = 1 + rng.index(3);
    for (int k = 0; k < count; ++k) {
        const Vec2 c{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        const double sigma = rng.uniform(0.03, 0.12);
        const double amp = rng.uniform(0.5, 1.5);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec2 d = f.pixel_center(i, j) - c;
                f(i, j) += amp * std::exp(-d.dot(d) / (2.0 * sigma * sigma));
            }
    }
    return normalized(f);
}

GridField make_ball(int n, Rng& rng) {
    const Vec2 c{rng.uniform(0.35, 0.65), rng.uniform(0.35, 0.65)};
    const double r = std::max(rng.uniform(0.03, 0.15), 1.5 / n);
    return normalized(ball_indicator(n, c, r));
}

GridField make_strip(int n, Rng& rng, double ecc) {
    const Vec2 c{rng.uniform(0.4, 0.6), rng.uniform(0.4, 0.6)};
    const double length = rng.uniform(0.3, 0.6);
    const double width = std::max(ecc * length, 1.5 / n);
    const double theta = rng.uniform(0.0, std::numbers::pi);
    return normalized(strip_indicator(n, c, length, width, theta));
}

GridField make_kakeya_fan(int n, double ecc, double rotation, int count, double length) {
    if (!(ecc > 0.0 && ecc <= 1.0)) throw std::invalid_argument("kakeya-fan: ecc must lie in (0, 1]");
    const int K = count > 0 ? count : std::max(1, static_cast<int>(std::lround(1.0 / ecc)));
    const double width = std::max(ecc * length, 1.0 / n);
    GridField f(n, 0.0);
    for (int k = 0; k < K; ++k) {
        const double theta = rotation + k * std::numbers::pi / K;
        const GridField s = strip_indicator(n, {0.5, 0.5}, length, width, theta);
        for (std::size_t p = 0; p < f.size(); ++p) f[p] += s[p];
    }
    return normalized(f);
}

GridField sample_family(FamilyKind kind, int n, Rng& rng, double ecc) {
    switch (kind) {
        case FamilyKind::bump: return make_bump(n, rng);
        case FamilyKind::ball: return make_ball(n, rng);
        case FamilyKind::strip: return make_strip(n, rng, ecc);
        case FamilyKind::kakeya_fan: return make_kakeya_fan(n, ecc, rng.uniform(0.0, std::numbers::pi));
    }
    throw std::invalid_argument("unknown function family");
}

}  // namespace dirmax
