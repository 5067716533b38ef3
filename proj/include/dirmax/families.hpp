/**
 * @file families.hpp
 * @brief Nonnegative test functions of unit L2 norm.
 *
 * kakeya-fan: the normalized sum of K ≈ 1/ecc thin strips of eccentricity
 * ecc through the center, in K equally spaced directions.
 */
#pragma once

#include "dirmax/grid.hpp"
#include "dirmax/random.hpp"

#include <string>
#include <vector>

namespace dirmax {

enum class FamilyKind { bump, ball, strip, kakeya_fan };

std::string family_name(FamilyKind kind);
FamilyKind parse_family(const std::string& name);
const std::vector<FamilyKind>& all_families();

GridField ball_indicator(int n, Vec2 center, double radius);
GridField strip_indicator(int n, Vec2 center, double length, double width, double theta);

GridField make_bump(int n, Rng& rng);
GridField make_ball(int n, Rng& rng);
GridField make_strip(int n, Rng& rng, double ecc);
/// count = 0 picks round(1/ecc) strips.
GridField make_kakeya_fan(int n, double ecc, double rotation = 0.0, int count = 0, double length = 0.5);

/// One random member of the family (kakeya-fan gets a random rotation).
GridField sample_family(FamilyKind kind, int n, Rng& rng, double ecc);

}  // namespace dirmax
