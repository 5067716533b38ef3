// Acceptance suite: one PASS/FAIL line per criterion at full desk scale.
// Exit status is 0 when the suite ran to completion; with --strict it is 1
// if any criterion failed. --report PATH also writes the lines to a file.

#include "dirmax/experiment.hpp"
#include "dirmax/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace dirmax;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [x]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& csv) {
    Table rows;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::vector<double> column(const Table& t, std::size_t c) {
    std::vector<double> out;
    for (const auto& r : t) out.push_back(std::stod(r.at(c)));
    return out;
}

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

Selector dense_selector(int n, std::uint64_t seed) {
    Rng rng(seed);
    const DirectionSet dirs = random_direction_set(rng, 8, 3);
    const ScaleGrid scales{{0.5, 0.25}, {0.5, 0.25, 0.125}, 3};
    return linearize(directional_family(dirs, scales, n, {}, Averaging::exact), random_positive(n, rng.next()));
}

VecOp matrix_op(const Matrix& A) {
    return [&A](const std::vector<double>& x) {
        const Eigen::VectorXd y = A * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        return std::vector<double>(y.data(), y.data() + y.size());
    };
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome kernel_consistency() {
    Outcome o;
    const auto t0 = Clock::now();
    const int n = 16;
    double comp = 0.0, geom_excess = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Selector phi = dense_selector(n, seed);
        const Matrix K = ttstar_matrix(phi, KernelAreas::pixelated);
        const RectOperator T = T_operator(phi);
        comp = std::max(comp, relative_frobenius(K, dense_from_apply(T, false) * dense_from_apply(T, true)));
        double min_side = 1.0;
        for (const Rect& r : phi.rects) min_side = std::min(min_side, r.width());
        const double gap = relative_frobenius(ttstar_matrix(phi, KernelAreas::geometric), K);
        geom_excess = std::max(geom_excess, gap / (3.0 / n / min_side));
    }
    const double secs = seconds_since(t0);
    o.require(comp <= 1e-9, "pixelated vs T T* rel. Frobenius " + fmt("%.3g", comp) + " <= 1e-9");
    o.require(geom_excess <= 1.0, "geometric gap / (3 spacing/min side) " + fmt("%.3f", geom_excess) + " <= 1");
    o.require(secs <= 60.0, "runtime " + fmt("%.1f", secs) + " s <= 60 s");
    return o;
}

Outcome spectral_soundness() {
    Outcome o;
    const int n = 16;
    double asym = 0.0, psd = 0.0, power_gap = 0.0;
    PowerOptions po;
    po.tol = 1e-14;
    po.max_iter = 20000;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Matrix K = ttstar_matrix(dense_selector(n, seed + 10));
        const double norm = spectral_norm_sym(K);
        asym = std::max(asym, (K - K.transpose()).norm() / K.norm());
        psd = std::max(psd, std::max(0.0, -min_eigenvalue_sym(K)) / norm);
        po.seed = seed;
        power_gap = std::max(power_gap, rel(power_iteration(matrix_op(K), flat(random_positive(n, seed)), po).value, norm));
    }
    double dense_gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        Matrix B(50, 50);
        for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = rng.uniform(-1.0, 1.0);
        const Matrix A = B * B.transpose() / 50.0;
        po.seed = seed;
        dense_gap = std::max(dense_gap, rel(power_iteration(matrix_op(A), std::vector<double>(50, 1.0), po).value,
                                            spectral_norm_sym(A)));
    }
    o.require(asym == 0.0, "TT* asymmetry " + fmt("%.3g", asym));
    o.require(psd <= 1e-8, "min eigenvalue / |K| " + fmt("%.3g", -psd) + " >= -1e-8");
    o.require(power_gap <= 1e-6, "power vs eigen on n=16 TT* " + fmt("%.3g", power_gap) + " <= 1e-6");
    o.require(dense_gap <= 1e-6, "power vs eigen on 50x50 PSD " + fmt("%.3g", dense_gap) + " <= 1e-6");
    return o;
}

Outcome pointwise_suite() {
    Outcome o;
    const VerifyConfig config;
    const std::uint64_t seed = 1;
    const auto t0 = Clock::now();
    std::vector<CheckReport> first;
    for (const std::string& name : check_names()) first.push_back(run_check(name, config, seed));
    const double secs = seconds_since(t0);
    for (const CheckReport& r : first) {
        static const std::vector<std::string> pointwise{"eq5",  "eq6",     "eq7",      "geom10",   "tt11",
                                                        "thm2_18", "case1_20", "case2_23", "gg24"};
        bool listed = false;
        for (const auto& p : pointwise) listed = listed || p == r.name;
        if (!listed) continue;
        const CheckReport again = run_check(r.name, config, r.seed);
        const bool same = std::memcmp(&again.max_ratio, &r.max_ratio, sizeof(double)) == 0;
        const bool ok = r.name == "eq6" ? r.max_ratio <= 1.0
                                        : std::isfinite(r.max_ratio) && r.max_ratio <= regression_bound(r.name);
        o.require(ok && same, r.name + " C=" + fmt("%.6g", r.max_ratio) + " bound " + fmt("%.6g", r.bound) +
                                  (same ? "" : " (not reproducible)"));
    }
    o.require(secs <= 300.0, "full catalog " + fmt("%.1f", secs) + " s <= 300 s");
    return o;
}

Outcome sector_split() {
    Outcome o;
    ExperimentConfig c;
    double worst = 0.0;
    for (std::uint64_t seed : {1u, 2u}) {
        c.seed = seed;
        const auto t0 = Clock::now();
        const Table t = parse_csv(cmd_avs(c).csv);
        const double secs = seconds_since(t0);
        const std::vector<double> C = column(t, 4);
        double mx = 0.0;
        bool finite = true;
        for (double v : C) {
            finite = finite && std::isfinite(v);
            mx = std::max(mx, v);
        }
        worst = std::max(worst, mx);
        o.require(t.size() >= 20 && finite, "seed " + std::to_string(seed) + ": " + std::to_string(t.size()) +
                                                " configs at n=" + std::to_string(c.grid) + ", all finite, max C " +
                                                fmt("%.4f", mx) + " (" + fmt("%.0f", secs) + " s)");
    }
    o.require(worst <= avs_regression_bound(),
              "max C over seeds " + fmt("%.4f", worst) + " <= bound " + fmt("%.4f", avs_regression_bound()));
    return o;
}

Outcome logn_growth() {
    Outcome o;
    ExperimentConfig c;
    c.logn_counts = {2, 4, 8, 16, 32, 64};
    c.lacunary_counts = {2, 4, 8, 16, 32, 64};
    const auto t0 = Clock::now();
    const Table u = parse_csv(cmd_logn(c).csv);
    const Table l = parse_csv(cmd_lacunary(c).csv);
    const double secs = seconds_since(t0);

    const std::vector<double> N = column(u, 0), est = column(u, 1);
    bool monotone = true;
    for (std::size_t i = 1; i < est.size(); ++i) monotone = monotone && est[i] >= est[i - 1];
    std::vector<double> logN;
    for (double v : N) logN.push_back(std::log(v));
    const Fit fit = least_squares(logN, est);
    o.require(monotone, "uniform estimates nondecreasing in N");
    o.require(fit.r2 >= 0.9, "fit vs log N: R^2 " + fmt("%.4f", fit.r2) + ", slope " + fmt("%.4f", fit.slope));

    const std::vector<double> lac = column(l, 1);
    const double growth = (lac.back() - lac[lac.size() - 2]) / lac[lac.size() - 2];
    o.require(growth <= 0.10, "lacunary last-doubling growth " + fmt("%.4f", 100 * growth) + "% <= 10%");
    o.require(secs <= 600.0, "runtime " + fmt("%.0f", secs) + " s <= 600 s");
    return o;
}

Outcome grand_maximal_plateau() {
    Outcome o;
    ExperimentConfig c;
    const auto t0 = Clock::now();
    const Table gm = parse_csv(cmd_grand_maximal(c).csv);
    // Rows are ordered by delta0, then member; compare each member across consecutive halvings.
    std::vector<std::string> members;
    for (const auto& r : gm)
        if (r[0] == gm.front()[0]) members.push_back(r[1]);
    double worst = 0.0;
    for (const std::string& m : members) {
        std::vector<double> ratios;
        for (const auto& r : gm)
            if (r[1] == m) ratios.push_back(std::stod(r[2]));
        for (std::size_t i = 1; i < ratios.size(); ++i) worst = std::max(worst, ratios[i] / ratios[i - 1] - 1.0);
    }
    o.require(worst <= 0.10, "gm ratio growth per delta0 halving " + fmt("%.4f", 100 * worst) + "% <= 10% over " +
                                 std::to_string(members.size()) + " members");

    const Table sh = parse_csv(cmd_sharpness(c).csv);
    std::vector<double> x, y;
    bool increasing = true;
    for (const auto& r : sh) {
        const double d = std::stod(r[0]);
        if (d > 0.25 || d < 1.0 / 64) continue;
        const double v = std::stod(r[1]);
        if (!y.empty()) increasing = increasing && v > y.back();
        x.push_back(std::log(1.0 / d));
        y.push_back(v);
    }
    const Fit fit = least_squares(x, y);
    const double secs = seconds_since(t0);
    o.require(increasing && fit.slope > 0.0, "sharpness estimates increasing, slope " + fmt("%.4f", fit.slope));
    o.require(fit.r2 >= 0.9, "sharpness fit vs log(1/delta): R^2 " + fmt("%.4f", fit.r2));
    o.require(secs <= 600.0, "runtime " + fmt("%.0f", secs) + " s <= 600 s");
    return o;
}

// Drops the seconds column so the comparison covers the computed values only.
std::string without_seconds(const std::string& csv) {
    std::istringstream is(csv);
    std::string line, out;
    std::getline(is, line);
    const bool has = line.size() >= 8 && line.compare(line.size() - 8, 8, ",seconds") == 0;
    out += line + "\n";
    while (std::getline(is, line)) out += (has ? line.substr(0, line.rfind(',')) : line) + "\n";
    return out;
}

Outcome determinism() {
    Outcome o;
    ExperimentConfig c;
    c.grid = 64;
    c.logn_counts = {1, 2, 4, 8};
    c.lacunary_counts = {1, 2, 4, 8};
    c.avs_configs = 4;
    c.gm_directions = 8;
    c.sharp_deltas = {0.5, 0.25, 0.125};
    c.verify.composition_samples = 200;
    c.verify.rect_pairs = 2000;
    c.verify.thm1_configs = 1;
    for (const std::string& name : command_names()) {
        const std::string a = run_command(name, c).csv;
        const std::string b = run_command(name, c).csv;
        const bool same = without_seconds(a) == without_seconds(b);
        const bool exact = a == b;
        o.require(same, name + (exact ? " byte-identical" : same ? " identical apart from seconds" : " differs"));
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    std::ofstream report;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc)
            report.open(argv[++i]);
        else {
            std::fprintf(stderr, "usage: acceptance [--strict] [--report PATH]\n");
            return 2;
        }
    }
    const auto emit = [&](const std::string& line) {
        std::printf("%s\n", line.c_str());
        std::fflush(stdout);
        if (report) report << line << "\n" << std::flush;
    };
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kernel consistency", kernel_consistency},
        {"spectral soundness", spectral_soundness},
        {"pointwise inequality suite", pointwise_suite},
        {"sector-split implied constant", sector_split},
        {"log N growth and lacunary plateau", logn_growth},
        {"grand maximal plateau and eccentricity sharpness", grand_maximal_plateau},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        if (!o.pass) ++failed;
        emit(std::string(o.pass ? "PASS " : "FAIL ") + name + " (" + fmt("%.0f", seconds_since(t0)) + " s): " + o.detail);
    }
    emit(std::to_string(criteria.size() - failed) + " of " + std::to_string(criteria.size()) + " criteria passed");
    return strict && failed > 0 ? 1 : 0;
}
