#include "dirmax/experiment.hpp"

#include "dirmax/families.hpp"
#include "dirmax/kernels.hpp"
#include "dirmax/lattice.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace dirmax {

// ---------------------------------------------------------------------------
// Configuration text
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || !std::isfinite(v)) throw ConfigError("config: " + key + ": not a number: " + s);
    return v;
}

long long to_integer(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0') throw ConfigError("config: " + key + ": not an integer: " + s);
    return v;
}

// Text form of each supported field type.
std::string show(int v) { return std::to_string(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(double v) { return fmt(v); }
std::string show(const std::string& v) { return v; }
template <class T>
std::string show(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + show(v[i]);
    return out;
}

void read(const std::string& k, const std::string& s, int& v) { v = static_cast<int>(to_integer(k, s)); }
void read(const std::string& k, const std::string& s, std::uint64_t& v) {
    const std::string t = trim(s);
    char* end = nullptr;
    v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || t[0] == '-') throw ConfigError("config: " + k + ": not a seed: " + s);
}
void read(const std::string& k, const std::string& s, double& v) { v = to_double(k, s); }
void read(const std::string&, const std::string& s, std::string& v) { v = trim(s); }
template <class T>
void read(const std::string& k, const std::string& s, std::vector<T>& v) {
    v.clear();
    for (const std::string& item : split_list(s)) {
        T x{};
        read(k, item, x);
        v.push_back(x);
    }
}

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class T>
Field field(const char* section, const char* key, T ExperimentConfig::*m) {
    const std::string name = std::string(section) + "." + key;
    return {section, key, [m](const ExperimentConfig& c) { return show(c.*m); },
            [m, name](ExperimentConfig& c, const std::string& s) { read(name, s, c.*m); }};
}

template <class T>
Field vfield(const char* key, T VerifyConfig::*m) {
    const std::string name = std::string("verify.") + key;
    return {"verify", key, [m](const ExperimentConfig& c) { return show(c.verify.*m); },
            [m, name](ExperimentConfig& c, const std::string& s) { read(name, s, c.verify.*m); }};
}

const std::vector<Field>& fields() {
    using C = ExperimentConfig;
    using V = VerifyConfig;
    static const std::vector<Field> f{
        field("general", "seed", &C::seed),
        field("general", "grid", &C::grid),
        field("general", "threads", &C::threads),
        field("general", "out", &C::out),
        field("norm", "rounds", &C::rounds),
        field("norm", "max_iter", &C::max_iter),
        field("norm", "tol", &C::tol),
        field("scales", "heights", &C::heights),
        field("scales", "eccs", &C::eccs),
        field("scales", "offsets", &C::offsets),
        field("logn", "counts", &C::logn_counts),
        field("lacunary", "ratio", &C::lacunary_ratio),
        field("lacunary", "counts", &C::lacunary_counts),
        field("avs", "configs", &C::avs_configs),
        field("avs", "min_directions", &C::avs_min_directions),
        field("avs", "max_directions", &C::avs_max_directions),
        field("avs", "heights", &C::avs_heights),
        field("avs", "eccs", &C::avs_eccs),
        field("gm", "delta0", &C::gm_delta0),
        field("gm", "heights", &C::gm_heights),
        field("gm", "directions", &C::gm_directions),
        field("gm", "slope_max", &C::slope_max),
        field("gm", "samples", &C::gm_samples),
        field("sharpness", "deltas", &C::sharp_deltas),
        field("sharpness", "heights", &C::sharp_heights),
        field("verify", "checks", &C::checks),
        vfield("n", &V::n),
        vfield("directions", &V::directions),
        vfield("anchor_every", &V::anchor_every),
        vfield("heights", &V::heights),
        vfield("eccs", &V::eccs),
        vfield("offsets", &V::offsets_per_axis),
        vfield("enlarged_offsets", &V::enlarged_offsets),
        vfield("samples_per_family", &V::samples_per_family),
        vfield("random_fields", &V::random_fields),
        vfield("family_ecc", &V::family_ecc),
        vfield("dense_n", &V::dense_n),
        vfield("dense_directions", &V::dense_directions),
        vfield("dense_anchor_every", &V::dense_anchor_every),
        vfield("dense_heights", &V::dense_heights),
        vfield("dense_eccs", &V::dense_eccs),
        vfield("rect_pairs", &V::rect_pairs),
        vfield("composition_n", &V::composition_n),
        vfield("composition_heights", &V::composition_heights),
        vfield("composition_eccs", &V::composition_eccs),
        vfield("composition_samples", &V::composition_samples),
        vfield("slope_max", &V::slope_max),
        vfield("composition_directions", &V::composition_directions),
        vfield("thm1_configs", &V::thm1_configs),
        vfield("norm_rounds", &V::norm_rounds),
        vfield("norm_max_iter", &V::norm_max_iter),
        vfield("gm_delta0", &V::gm_delta0),
        vfield("gm_heights", &V::gm_heights),
        vfield("gm_directions", &V::gm_directions),
        field("oracle", "n", &C::oracle_n),
        field("oracle", "mc_pairs", &C::mc_pairs),
        field("oracle", "mc_samples", &C::mc_samples),
        field("oracle", "mc_samples_single", &C::mc_samples_single),
        field("oracle", "fast_n", &C::fast_n),
    };
    return f;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
}

bool descending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace

void ExperimentConfig::validate() const {
    require(grid >= 8 && grid <= 4096, "general.grid must lie in [8, 4096]");
    require(threads >= 0, "general.threads must be >= 0");
    require(!out.empty(), "general.out must not be empty");
    require(rounds >= 1 && max_iter >= 1 && tol > 0.0, "norm: rounds, max_iter >= 1 and tol > 0");
    require(!heights.empty() && descending(heights) && heights.front() <= 1.0, "scales.heights must descend in (0, 1]");
    require(!eccs.empty() && descending(eccs) && eccs.front() <= 1.0 && eccs.back() > 0.0,
            "scales.eccs must descend in (0, 1]");
    require(offsets >= 1 && offsets % 2 == 1, "scales.offsets must be odd");
    for (const auto* counts : {&logn_counts, &lacunary_counts}) {
        require(!counts->empty(), "direction counts must not be empty");
        for (int nn : *counts) require(nn >= 1 && nn <= 1024, "direction counts must lie in [1, 1024]");
    }
    require(lacunary_ratio > 0.0 && lacunary_ratio < 1.0, "lacunary.ratio must lie in (0, 1)");
    require(avs_configs >= 1, "avs.configs must be >= 1");
    require(avs_min_directions >= 2 && avs_min_directions <= avs_max_directions && avs_max_directions <= 65,
            "avs direction counts must satisfy 2 <= min <= max <= 65");
    require(!avs_heights.empty() && descending(avs_heights), "avs.heights must descend");
    require(!avs_eccs.empty() && descending(avs_eccs), "avs.eccs must descend");
    require(!gm_delta0.empty() && descending(gm_delta0) && gm_delta0.front() < 0.5 && gm_delta0.back() > 0.0,
            "gm.delta0 must descend in (0, 1/2)");
    require(!gm_heights.empty() && descending(gm_heights), "gm.heights must descend");
    require(gm_directions >= 2, "gm.directions must be >= 2");
    require(slope_max > 0.0 && slope_max <= 1.0, "gm.slope_max must lie in (0, 1]");
    require(gm_samples >= 1, "gm.samples must be >= 1");
    require(!sharp_deltas.empty() && descending(sharp_deltas) && sharp_deltas.front() <= 1.0 &&
                sharp_deltas.back() > 0.0,
            "sharpness.deltas must descend in (0, 1]");
    require(!sharp_heights.empty() && descending(sharp_heights), "sharpness.heights must descend");
    for (const std::string& name : checks) require(is_check_name(name), "verify.checks: unknown check '" + name + "'");
    require(oracle_n >= 4 && oracle_n <= kDenseCap, "oracle.n must lie in [4, " + std::to_string(kDenseCap) + "]");
    require(mc_pairs >= 1 && mc_samples >= 1 && mc_samples_single >= 1, "oracle sample counts must be >= 1");
    require(fast_n >= 16, "oracle.fast_n must be >= 16");
}

ExperimentConfig parse_config(std::istream& is) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config: key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const auto& fs = fields();
            const auto it = std::find_if(fs.begin(), fs.end(),
                                         [&](const Field& f) { return f.section == section && f.key == key; });
            if (it == fs.end()) throw ConfigError("config: unknown key " + section + "." + key);
            it->set(c, value.data());
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    return parse_config(is);
}

std::string config_to_text(const ExperimentConfig& c) {
    std::string out;
    std::string section;
    for (const Field& f : fields()) {
        if (f.section != section) {
            out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
            section = f.section;
        }
        out += f.key + " = " + f.get(c) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace {

enum Tag : std::uint64_t { tag_logn = 1, tag_lacunary, tag_avs, tag_gm, tag_sharpness, tag_oracle };

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string seconds_text(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

MaximalOptions norm_options(const ExperimentConfig& c, std::uint64_t seed) {
    MaximalOptions opt;
    opt.rounds = c.rounds;
    opt.tol = c.tol;
    opt.max_iter = c.max_iter;
    opt.seed = seed;
    return opt;
}

// Norm sweep over nested direction sets, warm-started from the previous witness.
CommandOutput direction_sweep(const ExperimentConfig& c, const std::vector<int>& counts,
                              const std::function<DirectionSet(int)>& make, Tag tag) {
    const int n = c.grid;
    const ScaleGrid grid{c.heights, c.eccs, c.offsets};
    const GridField fan = make_kakeya_fan(n, std::max(c.eccs.back(), 1.0 / n));
    CommandOutput out;
    out.csv = "N,norm_est,seconds\n";
    GridField warm;
    for (int count : counts) {
        const Stopwatch sw;
        const MaximalFamily fam = directional_family(make(count), grid, n);
        MaximalOptions opt = norm_options(c, mix_seed(mix_seed(c.seed, tag), count));
        if (warm.n() == n) opt.starts.push_back(warm);
        opt.starts.push_back(fan);
        const NormEstimate est = estimate_maximal_norm(fam, n, opt);
        warm = est.witness;
        out.csv += std::to_string(count) + "," + fmt(est.value) + "," + seconds_text(sw.seconds()) + "\n";
    }
    return out;
}

}  // namespace

CommandOutput cmd_logn(const ExperimentConfig& c) {
    return direction_sweep(
        c, c.logn_counts, [](int count) { return make_directions(Uniform{count}, AllAnchors{}); }, tag_logn);
}

CommandOutput cmd_lacunary(const ExperimentConfig& c) {
    return direction_sweep(
        c, c.lacunary_counts,
        [&](int count) { return make_directions(Lacunary{c.lacunary_ratio, count}, AllAnchors{}); }, tag_lacunary);
}

double avs_regression_bound() { return 1.25 * 0.15319108057184344; }

CommandOutput cmd_avs(const ExperimentConfig& c) {
    const int n = c.grid;
    const ScaleGrid grid{c.avs_heights, c.avs_eccs, c.offsets};
    Rng rng(mix_seed(c.seed, tag_avs));
    const GridField fan = make_kakeya_fan(n, std::max(c.avs_eccs.back(), 1.0 / n));
    CommandOutput out;
    out.csv = "config_id,norm_omega,sup_sector,norm_anchor,implied_C\n";
    out.timing = "row,seconds\n";
    const int span = c.avs_max_directions - c.avs_min_directions + 1;
    for (int k = 0; k < c.avs_configs; ++k) {
        const Stopwatch sw;
        const int count = c.avs_min_directions + rng.index(span);
        DirectionSet dirs;
        if (k == 0) {
            dirs = random_direction_set(rng, count, 1);
        } else if (k == 1) {
            const DirectionSet base = random_direction_set(rng, count, 1);
            dirs = make_directions(ExplicitSlopes{base.slopes()},
                                   ExplicitAnchors{{base.slopes().front(), base.slopes().back()}});
        } else {
            dirs = random_direction_set(rng, count, 2 + rng.index(3));
        }
        MaximalOptions opt = norm_options(c, rng.next());
        opt.starts.push_back(fan);
        const SectorSplitSample s = sector_split_sample(dirs, grid, n, Averaging::lattice, opt);
        out.csv += std::to_string(k) + "," + fmt(s.norm_omega) + "," + fmt(s.sup_sector) + "," +
                   fmt(s.norm_anchor) + "," + fmt(s.implied_C) + "\n";
        out.timing += std::to_string(k) + "," + seconds_text(sw.seconds()) + "\n";
        if (!std::isfinite(s.implied_C)) out.ok = false;
    }
    return out;
}

CommandOutput cmd_grand_maximal(const ExperimentConfig& c) {
    const int n = c.grid;
    std::vector<double> slopes;
    for (int k = c.gm_directions - 1; k >= 0; --k) slopes.push_back(c.slope_max * k / (c.gm_directions - 1));
    const DirectionSet dirs = make_directions(ExplicitSlopes{slopes}, AllAnchors{});
    Rng rng(mix_seed(c.seed, tag_gm));
    struct Member {
        std::string id;
        GridField f;
    };
    std::vector<Member> members;
    for (FamilyKind kind : all_families())
        for (int i = 0; i < c.gm_samples; ++i)
            members.push_back({family_name(kind) + "#" + std::to_string(i),
                               sample_family(kind, n, rng, std::max(c.gm_delta0.back(), 2.0 / n))});

    const std::size_t D = c.gm_delta0.size();
    std::vector<std::vector<double>> ratio(members.size(), std::vector<double>(D));
    std::vector<double> secs(D, 0.0);
    for (std::size_t m = 0; m < members.size(); ++m) {
        const GridField f = abs(members[m].f);
        GridField running(n, 0.0);
        for (std::size_t i = 0; i < D; ++i) {
            const Stopwatch sw;
            std::vector<double> hs;
            for (double h : c.gm_heights)
                if (c.gm_delta0[i] * h >= (1.0 - 1e-12) / n) hs.push_back(h);
            if (hs.empty()) throw ConfigError("gm: no admissible height for delta0 = " + fmt(c.gm_delta0[i]));
            running = pointwise_max(running, maximal(grand_family(dirs, {c.gm_delta0[i]}, hs, n, c.offsets), f));
            ratio[m][i] = running.l2_norm() / f.l2_norm();
            secs[i] += sw.seconds();
        }
    }
    CommandOutput out;
    out.csv = "delta0,family,ratio\n";
    out.timing = "row,seconds\n";
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t m = 0; m < members.size(); ++m)
            out.csv += fmt(c.gm_delta0[i]) + "," + members[m].id + "," + fmt(ratio[m][i]) + "\n";
        out.timing += fmt(c.gm_delta0[i]) + "," + seconds_text(secs[i]) + "\n";
    }
    return out;
}

CommandOutput cmd_sharpness(const ExperimentConfig& c) {
    const int n = c.grid;
    CommandOutput out;
    out.csv = "delta,norm_est\n";
    out.timing = "row,seconds\n";
    GridField warm;
    for (double delta : c.sharp_deltas) {
        const Stopwatch sw;
        const int count = static_cast<int>(std::ceil(1.0 / delta - 1e-9));
        const DirectionSet dirs = make_directions(Uniform{count}, AllAnchors{});
        std::vector<double> hs;
        for (double h : c.sharp_heights)
            if (delta * h >= (1.0 - 1e-12) / n) hs.push_back(h);
        if (hs.empty()) throw ConfigError("sharpness: no admissible height for delta = " + fmt(delta));
        const MaximalFamily fam = eccentricity_family(dirs, delta, hs, n, c.offsets);
        MaximalOptions opt = norm_options(c, mix_seed(mix_seed(c.seed, tag_sharpness), count));
        if (warm.n() == n) opt.starts.push_back(warm);
        opt.starts.push_back(make_kakeya_fan(n, std::max(delta, 2.0 / n)));
        const NormEstimate est = estimate_maximal_norm(fam, n, opt);
        warm = est.witness;
        out.csv += fmt(delta) + "," + fmt(est.value) + "\n";
        out.timing += fmt(delta) + "," + seconds_text(sw.seconds()) + "\n";
    }
    return out;
}

CommandOutput cmd_verify(const ExperimentConfig& c) {
    const std::vector<std::string>& names = c.checks.empty() ? check_names() : c.checks;
    CommandOutput out;
    out.csv = check_csv_header() + "\n";
    out.timing = "row,seconds\n";
    for (const std::string& name : names) {
        if (!is_check_name(name)) throw ConfigError("verify: unknown check '" + name + "'");
        const Stopwatch sw;
        const CheckReport r = run_check(name, c.verify, c.seed);
        out.csv += check_csv_row(r) + "\n";
        out.timing += name + "," + seconds_text(sw.seconds()) + "\n";
        if (!r.pass) out.ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

namespace {

struct OracleRow {
    std::string name;
    double deviation;
    double tolerance;
};

Rect random_rect(Rng& rng, double lo, double hi) {
    const double h = rng.uniform(0.1, 0.5);
    const double e = rng.uniform(0.1, 1.0);
    return Rect{{rng.uniform(lo, hi), rng.uniform(lo, hi)}, h, e, rng.uniform(0.0, std::numbers::pi)};
}

// Fraction of the area of r1 covered by r2 (and the unit square), by uniform points in r1.
double mc_fraction(const Rect& r1, const Rect& r2, bool in_domain, int samples, Rng& rng) {
    int hits = 0;
    const Vec2 u = r1.axis();
    const Vec2 v = r1.normal();
    for (int s = 0; s < samples; ++s) {
        const Vec2 p = r1.center + u * (r1.h * rng.uniform(-0.5, 0.5)) + v * (r1.width() * rng.uniform(-0.5, 0.5));
        if (in_domain && (p.x < 0.0 || p.y < 0.0 || p.x > 1.0 || p.y > 1.0)) continue;
        if (rect_contains(r2, p)) ++hits;
    }
    return static_cast<double>(hits) / samples;
}

// Fraction of pairs whose Monte Carlo intersection area misses the exact one by more than 3 sigma.
double mc_outside_3sigma(const ExperimentConfig& c, bool in_domain, Rng& rng) {
    int outside = 0;
    for (int k = 0; k < c.mc_pairs; ++k) {
        const Rect r1 = in_domain ? random_rect(rng, -0.1, 1.1) : random_rect(rng, 0.3, 0.7);
        const Rect r2 = in_domain ? random_rect(rng, -0.1, 1.1) : random_rect(rng, 0.3, 0.7);
        const double p = mc_fraction(r1, r2, in_domain, c.mc_samples, rng);
        const double exact = in_domain ? rect_intersection_area_in_domain(r1, r2) : rect_intersection_area(r1, r2);
        const double sigma = std::max(r1.area() * std::sqrt(p * (1.0 - p) / c.mc_samples), r1.area() / c.mc_samples);
        if (std::abs(p * r1.area() - exact) > 3.0 * sigma) ++outside;
    }
    return static_cast<double>(outside) / c.mc_pairs;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Selector oracle_selector(int n, Rng& rng) {
    const DirectionSet dirs = make_directions(Uniform{8}, EveryKth{3});
    const ScaleGrid grid{{0.5, 0.25}, {0.5, 0.25}, 3};
    const GridField f = random_positive(n, rng.next());
    return linearize(directional_family(dirs, grid, n, {}, Averaging::exact), f);
}

std::vector<OracleRow> oracle_rows(const ExperimentConfig& c) {
    Rng rng(mix_seed(c.seed, tag_oracle));
    std::vector<OracleRow> rows;
    const int n = c.oracle_n;

    rows.push_back({"mc_intersection", mc_outside_3sigma(c, false, rng), 0.01});
    rows.push_back({"mc_intersection_domain", mc_outside_3sigma(c, true, rng), 0.01});
    {
        const Rect r1{{0.5, 0.5}, 0.6, 0.3, 0.0};
        const Rect r2{{0.55, 0.45}, 0.5, 0.2, std::numbers::pi / 4.0};
        const double p = mc_fraction(r1, r2, false, c.mc_samples_single, rng);
        const double sigma = r1.area() * std::sqrt(p * (1.0 - p) / c.mc_samples_single);
        rows.push_back({"mc_intersection_45deg", std::abs(p * r1.area() - rect_intersection_area(r1, r2)) / sigma, 3.0});
    }

    const Selector phi = oracle_selector(n, rng);
    const RectOperator T = T_operator(phi);
    const Matrix K = ttstar_matrix(phi, KernelAreas::pixelated);
    const Matrix D = dense_T(phi);
    const Matrix Dop = dense_from_apply(T, false);
    const Matrix Dadj = dense_from_apply(T, true);
    rows.push_back({"kernel_vs_composition", relative_frobenius(K, Dop * Dadj), 1e-9});
    {
        const Matrix G = ttstar_matrix(phi, KernelAreas::geometric);
        double min_side = 1.0;
        for (const Rect& r : phi.rects) min_side = std::min(min_side, r.width());
        rows.push_back({"kernel_geometric_vs_pixelated", relative_frobenius(G, K), 3.0 / n / min_side});
    }
    {
        const double norm = spectral_norm_sym(K);
        rows.push_back({"ttstar_symmetric", (K - K.transpose()).norm() / K.norm(), 1e-12});
        rows.push_back({"ttstar_psd", std::max(0.0, -min_eigenvalue_sym(K)) / norm, 1e-8});

        PowerOptions po;
        po.tol = 1e-14;
        po.max_iter = 20000;
        po.seed = rng.next();
        const VecOp apply_K = [&](const std::vector<double>& x) {
            const Eigen::VectorXd y = K * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
            return std::vector<double>(y.data(), y.data() + y.size());
        };
        const SpectralEstimate se = power_iteration(apply_K, flat(random_positive(n, rng.next())), po);
        rows.push_back({"power_vs_eigen_ttstar", relative_gap(se.value, norm), 1e-6});

        PowerOptions lo = po;
        const NormEstimate le = estimate_linear_norm([&](const GridField& f) { return T.apply(f); },
                                                     [&](const GridField& g) { return T.adjoint(g); },
                                                     random_positive(n, rng.next()), lo);
        rows.push_back({"linear_norm_vs_dense", relative_gap(le.value, std::sqrt(norm)), 1e-6});
    }
    {
        const int m = 50;
        Matrix B(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
        const Matrix A = B * B.transpose() / m;
        PowerOptions po;
        po.tol = 1e-14;
        po.max_iter = 20000;
        po.seed = rng.next();
        const VecOp apply_A = [&](const std::vector<double>& x) {
            const Eigen::VectorXd y = A * Eigen::Map<const Eigen::VectorXd>(x.data(), m);
            return std::vector<double>(y.data(), y.data() + y.size());
        };
        std::vector<double> start(m);
        for (double& x : start) x = rng.uniform(0.5, 1.5);
        const SpectralEstimate se = power_iteration(apply_A, start, po);
        rows.push_back({"power_vs_eigen_50", relative_gap(se.value, spectral_norm_sym(A)), 1e-6});
    }
    {
        const GridField f = random_positive(n, rng.next());
        const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.values().data(), n * n);
        const GridField tf = T.apply(f);
        const Eigen::VectorXd dv = D * fv;
        rows.push_back(
            {"apply_T_vs_dense", (Eigen::Map<const Eigen::VectorXd>(tf.values().data(), n * n) - dv).norm() / dv.norm(),
             1e-12});
        const GridField ta = T.adjoint(f);
        const Eigen::VectorXd av = D.transpose() * fv;
        rows.push_back({"apply_T_adjoint_vs_dense",
                        (Eigen::Map<const Eigen::VectorXd>(ta.values().data(), n * n) - av).norm() / av.norm(), 1e-12});
    }
    for (Averaging mode : {Averaging::exact, Averaging::lattice}) {
        const int m = 32;
        const DirectionSet dirs = make_directions(Uniform{8}, EveryKth{3});
        const ScaleGrid grid{{0.5, 0.25, 0.125}, {0.5, 0.25, 0.125}, 3};
        const MaximalFamily fam = directional_family(dirs, grid, m, {}, mode);
        const Selector ph = linearize(fam, random_positive(m, rng.next()));
        const GridField f = random_positive(m, rng.next());
        const GridField g = random_positive(m, rng.next());
        const double lhs = inner(apply_T(ph, f), g);
        const double rhs = inner(f, apply_T_adjoint(ph, g));
        rows.push_back({mode == Averaging::exact ? "adjoint_exact" : "adjoint_lattice", relative_gap(lhs, rhs), 1e-9});
        const GridField mf = maximal(fam, f);
        const GridField tf = apply_T(linearize(fam, f), f);
        double gap = 0.0;
        for (std::size_t p = 0; p < mf.size(); ++p) gap = std::max(gap, std::abs(mf[p] - tf[p]));
        rows.push_back({mode == Averaging::exact ? "scan_vs_linearized_exact" : "scan_vs_linearized_lattice", gap, 0.0});
    }
    {
        // Smooth field, rectangles at least 8 pixels wide.
        const int m = c.fast_n;
        GridField f(m, 0.0);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                const Vec2 x = f.pixel_center(i, j);
                f(i, j) = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x.x) * std::cos(3.0 * std::numbers::pi * x.y);
            }
        std::vector<double> thetas;
        for (int k = 0; k < 16; ++k) thetas.push_back(std::numbers::pi * k / 16.0);
        const SatBundle bundle(f, thetas, 0.0);
        double worst = 0.0;
        const double min_width = 8.0 / m;
        for (int k = 0; k < 1000; ++k) {
            const double h = rng.uniform(std::max(0.25, min_width), 0.6);
            const double e = rng.uniform(min_width / h, 1.0);
            const Rect r{{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)}, h, e, thetas[rng.index(16)]};
            worst = std::max(worst, std::abs(rect_average_exact(f, r) - bundle.average(r)) * r.width() * m);
        }
        rows.push_back({"exact_vs_fast_averaging", worst, 3.0 * f.max_value()});
    }
    return rows;
}

}  // namespace

CommandOutput cmd_oracle(const ExperimentConfig& c) {
    const Stopwatch sw;
    const std::vector<OracleRow> rows = oracle_rows(c);
    CommandOutput out;
    out.csv = "oracle,deviation,tolerance,pass\n";
    out.timing = "row,seconds\ntotal," + seconds_text(sw.seconds()) + "\n";
    for (const OracleRow& r : rows) {
        const bool pass = r.deviation <= r.tolerance;
        out.csv += r.name + "," + fmt(r.deviation) + "," + fmt(r.tolerance) + "," + (pass ? "true" : "false") + "\n";
        if (!pass) out.ok = false;
    }
    return out;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"logn", "lacunary", "avs", "gm", "sharpness", "verify", "oracle"};
    return names;
}

CommandOutput run_command(const std::string& name, const ExperimentConfig& c) {
    static const std::map<std::string, std::function<CommandOutput(const ExperimentConfig&)>> table{
        {"logn", cmd_logn}, {"lacunary", cmd_lacunary},   {"avs", cmd_avs},       {"gm", cmd_grand_maximal},
        {"sharpness", cmd_sharpness}, {"verify", cmd_verify}, {"oracle", cmd_oracle}};
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown command: " + name);
    return it->second(c);
}

}  // namespace dirmax
