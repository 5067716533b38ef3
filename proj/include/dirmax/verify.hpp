/**
 * @file verify.hpp
 * @brief Named pointwise and norm inequality checks.
 *
 * Every check samples a family of inputs and reports the largest ratio
 * lhs / rhs it observed (the empirical constant). Checks with an exact
 * discrete constant compare against it; the others compare against a
 * regression bound fixed at 1.25 times the first observed value.
 */
#pragma once

#include "dirmax/normest.hpp"
#include "dirmax/operators.hpp"
#include "dirmax/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dirmax {

struct VerifyConfig {
    // Sector-split pointwise checks (lattice averaging).
    int n = 64;
    int directions = 12;
    int anchor_every = 4;
    std::vector<double> heights{0.25, 0.125, 0.0625};
    std::vector<double> eccs{0.5, 0.25, 0.125, 0.0625};
    int offsets_per_axis = 3;
    int samples_per_family = 3;
    int random_fields = 8;  ///< extra uniform random fields
    double family_ecc = 0.0625;
    int enlarged_offsets = 5;

    // Dense block check.
    int dense_n = 16;
    int dense_directions = 8;
    int dense_anchor_every = 3;
    std::vector<double> dense_heights{0.5, 0.25};
    std::vector<double> dense_eccs{0.5, 0.25, 0.125};

    // Rectangle-replacement check.
    int rect_pairs = 10000;

    // Centered composition checks.
    int composition_n = 128;
    std::vector<double> composition_heights{0.25, 0.125, 0.0625};
    std::vector<double> composition_eccs{0.5, 0.25, 0.125, 0.0625, 0.03125};
    int composition_samples = 1000;
    double slope_max = 0.1;
    int composition_directions = 10;

    // Norm checks.
    int thm1_configs = 4;
    int norm_rounds = 2;
    int norm_max_iter = 60;
    std::vector<double> gm_delta0{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> gm_heights{1.0, 0.5, 0.25, 0.125};
    int gm_directions = 8;
};

struct CheckReport {
    std::string name;
    int samples = 0;
    double max_ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string location;  ///< where the maximal ratio occurred
};

const std::vector<std::string>& check_names();
bool is_check_name(const std::string& name);

/// Seeded regression bound for a check (exact constant for "eq6").
double regression_bound(const std::string& name);

/// Throws std::invalid_argument for an unknown name or an infeasible config.
CheckReport run_check(const std::string& name, const VerifyConfig& config, std::uint64_t seed);

std::string check_csv_header();
std::string check_csv_row(const CheckReport& r);

/// One sector-split configuration: norms of M over Omega, over each sector and
/// over the anchors, and the implied constant (clamped at 0).
struct SectorSplitSample {
    double norm_omega = 0.0;
    double sup_sector = 0.0;
    double norm_anchor = 0.0;
    double implied_C = 0.0;
};
SectorSplitSample sector_split_sample(const DirectionSet& dirs, const ScaleGrid& scales, int n, Averaging mode,
                               const MaximalOptions& opt);

/// Random direction set for sector-split sweeps: `count` distinct slopes k/64
/// in [0, 1] with every `anchor_every`-th slope an anchor.
DirectionSet random_direction_set(Rng& rng, int count, int anchor_every);

/// Relative level below which lhs values count as summation noise.
inline constexpr double kRatioNoise = 1e-12;

/// Largest lhs/rhs over pixels at distance >= margin from the boundary,
/// skipping pixels where lhs <= kRatioNoise * max|lhs|. A remaining positive
/// lhs over a zero rhs yields +inf. Returns the pixel index via
/// `where` (or -1 when every lhs vanishes).
double max_pointwise_ratio(const GridField& lhs, const GridField& rhs, double margin, int* where = nullptr);

}  // namespace dirmax
