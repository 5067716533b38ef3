#include "dirmax/verify.hpp"

#include "dirmax/families.hpp"
#include "dirmax/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace dirmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
    std::string family;
    GridField f;
};

std::vector<Sample> field_pool(int n, int per_family, int random_count, double ecc, Rng& rng) {
    std::vector<Sample> pool;
    for (FamilyKind k : all_families())
        for (int i = 0; i < per_family; ++i) pool.push_back({family_name(k), sample_family(k, n, rng, ecc)});
    for (int i = 0; i < random_count; ++i) pool.push_back({"random", random_positive(n, rng.next())});
    return pool;
}

struct Tracker {
    double max = 0.0;
    std::string where;
    int samples = 0;

    void offer(double ratio, const std::string& loc) {
        if (ratio > max || (std::isnan(ratio) && !std::isnan(max))) {
            max = ratio;
            where = loc;
        }
    }
};

std::string pixel_text(int n, int p) {
    if (p < 0) return "none";
    return "(" + std::to_string(p % n) + "," + std::to_string(p / n) + ")";
}

std::string field_loc(int k, const Sample& s, const std::string& extra, int n, int p) {
    std::string out = "sample=" + std::to_string(k) + " family=" + s.family;
    if (!extra.empty()) out += " " + extra;
    return out + " pixel=" + pixel_text(n, p);
}

// ---------------------------------------------------------------------------
// Sector-split setup

struct T1Setup {
    DirectionSet dirs;
    ScaleGrid base;
    ScaleGrid enlarged;
    double margin = 0.0;
};

T1Setup t1_setup(const VerifyConfig& c) {
    T1Setup s;
    s.dirs = make_directions(Uniform{c.directions}, EveryKth{c.anchor_every});
    s.base = {c.heights, c.eccs, c.offsets_per_axis};
    s.base.validate();
    std::set<double, std::greater<>> hs(c.heights.begin(), c.heights.end());
    for (double h : c.heights) hs.insert(std::min(1.0, 2.0 * h));
    s.enlarged = {{hs.begin(), hs.end()}, c.eccs, c.enlarged_offsets};
    s.enlarged.validate();
    s.margin = c.heights.front();
    return s;
}

Selector random_selector(const MaximalFamily& fam, int n, Rng& rng) {
    const std::size_t np = static_cast<std::size_t>(n) * n;
    const int P = fam.offsets_per_axis;
    std::vector<int> slot(np), term(np), offset(np);
    for (std::size_t p = 0; p < np; ++p) {
        slot[p] = rng.index(static_cast<int>(fam.directions.size()));
        term[p] = rng.index(static_cast<int>(fam.scales.size()));
        offset[p] = rng.index(P * P);
    }
    return selector_from_choices(fam, n, slot, term, offset);
}

// Pointwise check of lhs(phi, f) against rhs(f) over argmax and random selectors.
using SelectorLhs = std::function<GridField(const Selector&, const GridField&)>;

Tracker selector_check(const VerifyConfig& c, std::uint64_t seed, const SelectorLhs& lhs,
                       const std::function<GridField(const GridField&)>& rhs, double margin) {
    const T1Setup st = t1_setup(c);
    Rng rng(seed);
    const std::vector<Sample> pool = field_pool(c.n, c.samples_per_family, c.random_fields, c.family_ecc, rng);
    const MaximalFamily fam = directional_family(st.dirs, st.base, c.n);
    Tracker t;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const GridField af = abs(pool[k].f);
        const GridField r = rhs(af);
        const Selector chosen[2] = {linearize(fam, af), random_selector(fam, c.n, rng)};
        for (int v = 0; v < 2; ++v) {
            int where = -1;
            const double ratio = max_pointwise_ratio(lhs(chosen[v], af), r, margin, &where);
            t.offer(ratio, field_loc(static_cast<int>(k), pool[k], v == 0 ? "selector=argmax" : "selector=random",
                                     c.n, where));
            ++t.samples;
        }
    }
    return t;
}

Tracker check_eq6(const VerifyConfig& c, std::uint64_t seed) {
    const T1Setup st = t1_setup(c);
    const MaximalFamily fam = directional_family(st.dirs, st.base, c.n);
    return selector_check(
        c, seed, [](const Selector& phi, const GridField& f) { return apply_T(phi, f); },
        [&](const GridField& f) { return maximal(fam, f); }, 0.0);
}

Tracker check_eq5(const VerifyConfig& c, std::uint64_t seed) {
    const T1Setup st = t1_setup(c);
    const MaximalFamily anchors = directional_family(st.dirs, st.enlarged, c.n, DirectionFilter::only_anchors());
    return selector_check(
        c, seed, [&](const Selector& phi, const GridField& f) { return apply_T0(phi, st.dirs, f); },
        [&](const GridField& f) { return maximal(anchors, f); }, st.margin);
}

Tracker check_eq7(const VerifyConfig& c, std::uint64_t seed) {
    const T1Setup st = t1_setup(c);
    const MaximalFamily enlarged = directional_family(st.dirs, st.enlarged, c.n);
    return selector_check(
        c, seed, [](const Selector& phi, const GridField& f) { return apply_Ttilde(phi, f); },
        [&](const GridField& f) { return maximal(enlarged, f); }, st.margin);
}

// Cross-sector part of T T* f: sum_i chi_{A_i} T T* (chi_{not A_i} f).
GridField cross_sector(const Selector& phi, const RectOperator& T, const GridField& f) {
    const int n = f.n();
    GridField out(n, 0.0);
    std::set<int> sectors(phi.sector.begin(), phi.sector.end());
    for (int s : sectors) {
        GridField g = f;
        for (std::size_t p = 0; p < g.size(); ++p)
            if (phi.sector[p] == s) g[p] = 0.0;
        const GridField t = T.apply(T.adjoint(g));
        for (std::size_t p = 0; p < out.size(); ++p)
            if (phi.sector[p] == s) out[p] = t[p];
    }
    return out;
}

Tracker check_tt11(const VerifyConfig& c, std::uint64_t seed) {
    const T1Setup st = t1_setup(c);
    Rng rng(seed);
    const std::vector<Sample> pool = field_pool(c.n, c.samples_per_family, c.random_fields, c.family_ecc, rng);
    const MaximalFamily fam = directional_family(st.dirs, st.base, c.n);
    Tracker t;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const GridField af = abs(pool[k].f);
        const Selector chosen[2] = {linearize(fam, af), random_selector(fam, c.n, rng)};
        for (int v = 0; v < 2; ++v) {
            const Selector& phi = chosen[v];
            const RectOperator T = T_operator(phi);
            const RectOperator Tt = Ttilde_operator(phi);
            const RectOperator T0 = T0_operator(phi, st.dirs);
            const GridField lhs = cross_sector(phi, T, af);
            const GridField rhs = Tt.apply(T0.adjoint(af)) + T0.apply(Tt.adjoint(af));
            int where = -1;
            const double ratio = max_pointwise_ratio(lhs, rhs, st.margin, &where);
            t.offer(ratio, field_loc(static_cast<int>(k), pool[k], v == 0 ? "selector=argmax" : "selector=random",
                                     c.n, where));
            ++t.samples;
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Kernel checks

double kernel_value(const Rect& a, const Rect& b) { return rect_intersection_area(a, b) / (a.area() * b.area()); }

Tracker check_geom10(const VerifyConfig& c, std::uint64_t seed) {
    if (c.rect_pairs < 1) throw std::invalid_argument("geom10: rect_pairs must be >= 1");
    const DirectionSet dirs = make_directions(Uniform{16}, EveryKth{4});
    const std::vector<double> heights{0.25, 0.125, 0.0625, 0.03125};
    const std::vector<double> eccs{0.5, 0.25, 0.125, 0.0625};
    Rng rng(seed);
    Tracker t;
    auto draw_rect = [&](Vec2 y, int d) {
        const double h = heights[rng.index(static_cast<int>(heights.size()))];
        const double e = eccs[rng.index(static_cast<int>(eccs.size()))];
        Rect r{{0.0, 0.0}, h, e, normalize_angle(dirs.angles()[d])};
        const double ta = rng.uniform(-1.0, 1.0);
        const double tb = rng.uniform(-1.0, 1.0);
        r.center = y - (r.axis() * (0.5 * ta * r.h) + r.normal() * (0.5 * tb * r.width()));
        return r;
    };
    for (int k = 0; k < c.rect_pairs; ++k) {
        const int dx = rng.index(dirs.size());
        int dz = rng.index(dirs.size());
        while (dirs.sector_of()[dz] == dirs.sector_of()[dx]) dz = rng.index(dirs.size());
        const Vec2 y{rng.uniform(0.25, 0.75), rng.uniform(0.25, 0.75)};
        const Rect rx = draw_rect(y, dx);
        const Rect rz = draw_rect(y, dz);
        const double K = kernel_value(rx, rz);
        const auto ex = dirs.sector_endpoints(dirs.sector_of()[dx]);
        const auto ez = dirs.sector_endpoints(dirs.sector_of()[dz]);
        double best = 0.0;
        for (int a : {ex.first, ex.second})
            best = std::max(best, kernel_value(rect_reslope(rx, dirs.angles()[a]), rect_double(rz)));
        for (int b : {ez.first, ez.second})
            best = std::max(best, kernel_value(rect_double(rx), rect_reslope(rz, dirs.angles()[b])));
        const double ratio = K > 0.0 ? (best > 0.0 ? K / best : kInf) : 0.0;
        t.offer(ratio, "pair=" + std::to_string(k) + " dirs=(" + std::to_string(dx) + "," + std::to_string(dz) + ")");
        ++t.samples;
    }
    return t;
}

Tracker check_tt9(const VerifyConfig& c, std::uint64_t seed) {
    const int n = c.dense_n;
    const DirectionSet dirs = make_directions(Uniform{c.dense_directions}, EveryKth{c.dense_anchor_every});
    const ScaleGrid grid{c.dense_heights, c.dense_eccs, c.offsets_per_axis};
    Rng rng(seed);
    const std::vector<Sample> pool = field_pool(n, c.samples_per_family, 0, c.family_ecc, rng);

    MaximalOptions opt;
    opt.rounds = c.norm_rounds;
    opt.max_iter = c.norm_max_iter;
    opt.seed = rng.next();
    for (const Sample& s : pool) opt.starts.push_back(abs(s.f));
    double sup = 0.0;
    for (int s = 0; s < dirs.sector_count(); ++s) {
        if (dirs.sector_members(s).empty()) continue;
        const MaximalFamily fam = directional_family(dirs, grid, n, DirectionFilter::only_sector(s), Averaging::exact);
        sup = std::max(sup, estimate_maximal_norm(fam, n, opt).value);
    }
    const double bound = sup * sup;

    const MaximalFamily fam = directional_family(dirs, grid, n, {}, Averaging::exact);
    Tracker t;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const Selector phi = linearize(fam, abs(pool[k].f));
        const KernelSplit split = split_K(phi, ttstar_matrix(phi));
        const double ratio = spectral_norm_sym(split.K1) / bound;
        t.offer(ratio, field_loc(static_cast<int>(k), pool[k], "", n, -1));
        ++t.samples;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Centered compositions

struct Pair {
    RectParam m;
    RectParam n;
};

RectParam draw_param(const VerifyConfig& c, Rng& rng) {
    const int D = c.composition_directions;
    for (int tries = 0; tries < 1000; ++tries) {
        const double h = c.composition_heights[rng.index(static_cast<int>(c.composition_heights.size()))];
        const double e = c.composition_eccs[rng.index(static_cast<int>(c.composition_eccs.size()))];
        const double slope = c.slope_max * rng.index(D + 1) / D;
        if (e * h * c.composition_n >= 2.0 - 1e-9) return {h, std::atan(slope), e};
    }
    throw std::invalid_argument("composition: no rectangle at least two pixels wide in the scale lists");
}

double width_rule(const Pair& p) {
    return std::max({p.n.ecc * p.n.h, p.m.ecc * p.m.h, p.n.h * std::sin(std::abs(p.m.theta - p.n.theta))});
}

bool case1(const Pair& p) {
    return p.m.ecc * p.m.h >= std::max(p.n.ecc * p.n.h, p.n.h * std::sin(std::abs(p.m.theta - p.n.theta)));
}

Pair draw_pair(const VerifyConfig& c, Rng& rng, const std::function<bool(const Pair&)>& accept) {
    for (int tries = 0; tries < 10000; ++tries) {
        Pair p{draw_param(c, rng), draw_param(c, rng)};
        if (accept(p)) return p;
    }
    throw std::invalid_argument("composition: sampler found no admissible (m, n) pair");
}

std::string pair_text(const Pair& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "m=(%.6g,%.6g,%.6g) n=(%.6g,%.6g,%.6g)", p.m.h, std::tan(p.m.theta), p.m.ecc, p.n.h,
                  std::tan(p.n.theta), p.n.ecc);
    return buf;
}

using PairRhs = std::function<GridField(const Pair&, const GridField&)>;

Tracker composition_check(const VerifyConfig& c, std::uint64_t seed, const std::function<bool(const Pair&)>& accept,
                          const PairRhs& rhs) {
    if (c.composition_samples < 1 || c.composition_directions < 1)
        throw std::invalid_argument("composition: sample and direction counts must be >= 1");
    if (!(c.slope_max >= 0.0 && c.slope_max <= 1.0)) throw std::invalid_argument("composition: slope_max outside [0, 1]");
    const int n = c.composition_n;
    Rng rng(seed);
    const std::vector<Sample> pool = field_pool(n, c.samples_per_family, 0, c.family_ecc, rng);
    const double margin = *std::max_element(c.composition_heights.begin(), c.composition_heights.end());
    Tracker t;
    for (int k = 0; k < c.composition_samples; ++k) {
        const Pair p = draw_pair(c, rng, accept);
        const Sample& s = pool[static_cast<std::size_t>(k) % pool.size()];
        const GridField f = abs(s.f);
        const GridField lhs = apply_Tm(p.m, apply_Tm(p.n, f));
        int where = -1;
        const double ratio = max_pointwise_ratio(lhs, rhs(p, f), margin, &where);
        t.offer(ratio, field_loc(k, s, pair_text(p), n, where));
        ++t.samples;
    }
    return t;
}

Tracker check_thm2_18(const VerifyConfig& c, std::uint64_t seed) {
    return composition_check(
        c, seed, [](const Pair& p) { return p.m.h > p.n.h; },
        [](const Pair& p, const GridField& f) {
            const double w = width_rule(p);
            const RectParam r{2.0 * p.m.h, p.m.theta, w / p.m.h};
            return stencil_average(f, make_stencil(f.n(), r.shape()), 1.0 / (p.m.l() * p.n.l()));
        });
}

Tracker check_case1(const VerifyConfig& c, std::uint64_t seed) {
    return composition_check(
        c, seed, [](const Pair& p) { return p.m.h > p.n.h && case1(p); },
        [](const Pair& p, const GridField& f) { return apply_Sm(p.m, f); });
}

Tracker check_case2(const VerifyConfig& c, std::uint64_t seed) {
    return composition_check(
        c, seed, [](const Pair& p) { return p.m.h > p.n.h && !case1(p); },
        [](const Pair& p, const GridField& f) { return apply_Sm(p.m, apply_Wn(p.n, f)); });
}

Tracker check_gg24(const VerifyConfig& c, std::uint64_t seed) {
    return composition_check(
        c, seed, [](const Pair&) { return true; },
        [](const Pair& p, const GridField& f) {
            return apply_Sm(p.m, f) + apply_Sm(p.n, f) + apply_Sm(p.m, apply_Wn(p.n, f)) +
                   apply_Wn(p.m, apply_Sm(p.n, f));
        });
}

// ---------------------------------------------------------------------------
// Norm checks

MaximalOptions norm_options(const VerifyConfig& c, Rng& rng, int n) {
    MaximalOptions opt;
    opt.rounds = c.norm_rounds;
    opt.max_iter = c.norm_max_iter;
    opt.seed = rng.next();
    for (FamilyKind k : all_families()) opt.starts.push_back(abs(sample_family(k, n, rng, c.family_ecc)));
    return opt;
}

Tracker check_thm1(const VerifyConfig& c, std::uint64_t seed) {
    if (c.thm1_configs < 1) throw std::invalid_argument("thm1: thm1_configs must be >= 1");
    const ScaleGrid grid{c.heights, c.eccs, c.offsets_per_axis};
    Rng rng(seed);
    Tracker t;
    for (int k = 0; k < c.thm1_configs; ++k) {
        const int count = 4 + rng.index(9);
        const int every = 2 + rng.index(3);
        const DirectionSet dirs = random_direction_set(rng, count, every);
        const MaximalOptions opt = norm_options(c, rng, c.n);
        const SectorSplitSample s = sector_split_sample(dirs, grid, c.n, Averaging::lattice, opt);
        t.offer(s.implied_C, "config=" + std::to_string(k) + " N=" + std::to_string(count) +
                                 " anchor_every=" + std::to_string(every));
        ++t.samples;
    }
    return t;
}

Tracker check_gm_bounded(const VerifyConfig& c, std::uint64_t seed) {
    if (c.gm_delta0.size() < 2) throw std::invalid_argument("gm_bounded: need at least two delta0 values");
    if (c.gm_directions < 2) throw std::invalid_argument("gm_bounded: gm_directions must be >= 2");
    std::vector<double> deltas = c.gm_delta0;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    std::vector<double> slopes;
    for (int k = c.gm_directions - 1; k >= 0; --k) slopes.push_back(c.slope_max * k / (c.gm_directions - 1));
    const DirectionSet dirs = make_directions(ExplicitSlopes{slopes}, AllAnchors{});
    Rng rng(seed);
    const std::vector<Sample> pool = field_pool(c.n, c.samples_per_family, 0, deltas.back(), rng);
    Tracker t;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const GridField f = abs(pool[k].f);
        const double fn = f.l2_norm();
        GridField running(c.n, 0.0);
        double prev = 0.0;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            running = pointwise_max(running, maximal(grand_family(dirs, {deltas[i]}, c.gm_heights, c.n), f));
            const double ratio = running.l2_norm() / fn;
            if (i > 0) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "delta0=%.6g", deltas[i]);
                t.offer(ratio / prev, field_loc(static_cast<int>(k), pool[k], buf, c.n, -1));
            }
            prev = ratio;
        }
        ++t.samples;
    }
    return t;
}

const std::map<std::string, std::function<Tracker(const VerifyConfig&, std::uint64_t)>>& catalog() {
    static const std::map<std::string, std::function<Tracker(const VerifyConfig&, std::uint64_t)>> m{
        {"eq5", check_eq5},         {"eq6", check_eq6},       {"eq7", check_eq7},
        {"geom10", check_geom10},   {"tt11", check_tt11}, {"tt9", check_tt9},
        {"thm2_18", check_thm2_18}, {"case1_20", check_case1}, {"case2_23", check_case2},
        {"gg24", check_gg24},       {"thm1", check_thm1},     {"gm_bounded", check_gm_bounded}};
    return m;
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"eq5",      "eq6",      "eq7",  "geom10", "tt11", "tt9",
                                                "thm2_18", "case1_20", "case2_23", "gg24", "thm1", "gm_bounded"};
    return names;
}

bool is_check_name(const std::string& name) { return catalog().count(name) > 0; }

double regression_bound(const std::string& name) {
    // eq6 and gm_bounded are fixed thresholds; thm2_18 and case1_20 use the
    // C <= 64 guard. The rest are 1.25 x the value of the seeding run
    // (default config, seed 1).
    static const std::map<std::string, double> bounds{
        {"eq5", 1.25 * 2.7553141672501327},  {"eq6", 1.0},
        {"eq7", 1.25 * 1.0},                 {"geom10", 1.25 * 4.0614005239314643},
        {"tt11", 1.25 * 0.74713349522977635}, {"tt9", 1.25 * 0.8663083066616083},
        {"thm2_18", 64.0},                   {"case1_20", 64.0},
        {"case2_23", 1.25 * 4.9267440169873673}, {"gg24", 1.25 * 1.112906367091546},
        {"thm1", 1.25 * 0.098418731090561193}, {"gm_bounded", 1.10}};
    const auto it = bounds.find(name);
    if (it == bounds.end()) throw std::invalid_argument("unknown check: " + name);
    return it->second;
}

CheckReport run_check(const std::string& name, const VerifyConfig& config, std::uint64_t seed) {
    const auto it = catalog().find(name);
    if (it == catalog().end()) throw std::invalid_argument("unknown check: " + name);
    const std::size_t tag = static_cast<std::size_t>(
        std::find(check_names().begin(), check_names().end(), name) - check_names().begin());
    const Tracker t = it->second(config, mix_seed(seed, tag));
    CheckReport r;
    r.name = name;
    r.samples = t.samples;
    r.max_ratio = t.max;
    r.bound = regression_bound(name);
    r.pass = std::isfinite(t.max) && t.max <= r.bound;
    r.seed = seed;
    r.location = t.where;
    return r;
}

std::string check_csv_header() { return "check,samples,max_ratio,bound,pass,seed"; }

std::string check_csv_row(const CheckReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%s,%llu", r.name.c_str(), r.samples, r.max_ratio, r.bound,
                  r.pass ? "true" : "false", static_cast<unsigned long long>(r.seed));
    return buf;
}

double max_pointwise_ratio(const GridField& lhs, const GridField& rhs, double margin, int* where) {
    if (lhs.n() != rhs.n()) throw std::invalid_argument("pointwise ratio: grid size mismatch");
    const int n = lhs.n();
    double peak = 0.0;
    for (double v : lhs.values()) peak = std::max(peak, std::abs(v));
    const double floor = kRatioNoise * peak;
    double best = 0.0;
    int at = -1;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 x = lhs.pixel_center(i, j);
            if (std::min({x.x, x.y, 1.0 - x.x, 1.0 - x.y}) < margin) continue;
            const double l = lhs(i, j);
            if (!(l > floor)) continue;
            const double r = rhs(i, j);
            const double ratio = r > 0.0 ? l / r : kInf;
            if (at < 0 || ratio > best) {
                best = ratio;
                at = lhs.index(i, j);
            }
        }
    if (where) *where = at;
    return best;
}

SectorSplitSample sector_split_sample(const DirectionSet& dirs, const ScaleGrid& scales, int n, Averaging mode,
                               const MaximalOptions& opt) {
    SectorSplitSample s;
    s.norm_omega = estimate_maximal_norm(directional_family(dirs, scales, n, {}, mode), n, opt).value;
    for (int i = 0; i < dirs.sector_count(); ++i) {
        if (dirs.sector_members(i).empty()) continue;
        const MaximalFamily fam = directional_family(dirs, scales, n, DirectionFilter::only_sector(i), mode);
        s.sup_sector = std::max(s.sup_sector, estimate_maximal_norm(fam, n, opt).value);
    }
    s.norm_anchor =
        estimate_maximal_norm(directional_family(dirs, scales, n, DirectionFilter::only_anchors(), mode), n, opt).value;
    s.implied_C = s.norm_anchor > 0.0 ? std::max(0.0, (s.norm_omega - s.sup_sector) / s.norm_anchor) : kInf;
    return s;
}

DirectionSet random_direction_set(Rng& rng, int count, int anchor_every) {
    if (count < 1 || count > 65) throw std::invalid_argument("random directions: count must lie in [1, 65]");
    std::set<int, std::greater<>> ks;
    while (static_cast<int>(ks.size()) < count) ks.insert(rng.index(65));
    std::vector<double> slopes;
    for (int k : ks) slopes.push_back(k / 64.0);
    return make_directions(ExplicitSlopes{slopes}, EveryKth{anchor_every});
}

}  // namespace dirmax
