#include "dirmax/normest.hpp"

#include "dirmax/random.hpp"

#include <cmath>
#include <string>

namespace dirmax {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

VecOp field_op(int n, FieldOp op) {
    return [n, op = std::move(op)](const std::vector<double>& x) { return flat(op(GridField(n, x))); };
}

}  // namespace

std::vector<double> flat(const GridField& f) { return f.values(); }

GridField random_positive(int n, std::uint64_t seed) {
    Rng rng(seed);
    GridField f(n, 0.0);
    for (double& v : f.values()) v = 0.5 + rng.uniform();
    return f;
}

void check_self_adjoint(const VecOp& apply, std::size_t dim, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xad7));
    for (int k = 0; k < 3; ++k) {
        std::vector<double> u(dim), v(dim);
        for (double& x : u) x = rng.uniform(-1.0, 1.0);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        const std::vector<double> au = apply(u);
        const std::vector<double> av = apply(v);
        const double lhs = dot(au, v);
        const double rhs = dot(u, av);
        const double scale = 0.5 * (norm2(au) * norm2(v) + norm2(u) * norm2(av));
        if (std::abs(lhs - rhs) > 1e-6 * scale + 1e-300)
            throw ContractViolation("power iteration: operator is not self-adjoint (<Au,v> = " + std::to_string(lhs) +
                                    ", <u,Av> = " + std::to_string(rhs) + ")");
    }
}

SpectralEstimate power_iteration(const VecOp& apply, std::vector<double> start, const PowerOptions& opt) {
    if (start.empty()) throw std::invalid_argument("power iteration: empty start vector");
    if (opt.check_adjoint) check_self_adjoint(apply, start.size(), opt.seed);
    SpectralEstimate out;
    double nx = norm2(start);
    if (nx == 0.0) {
        Rng rng(opt.seed);
        for (double& v : start) v = 0.5 + rng.uniform();
        nx = norm2(start);
    }
    std::vector<double> x = std::move(start);
    for (double& v : x) v /= nx;

    double prev = 0.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        std::vector<double> y = apply(x);
        const double rq = dot(x, y);
        out.trace.push_back(rq);
        out.iterations = it + 1;
        out.value = rq;
        const double ny = norm2(y);
        if (ny == 0.0) {
            out.converged = true;
            break;
        }
        if (it > 0 && std::abs(rq - prev) <= opt.tol * std::abs(rq)) {
            out.converged = true;
            break;
        }
        prev = rq;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] /= ny;
        x = std::move(y);
    }
    out.vector = std::move(x);
    return out;
}

NormEstimate estimate_linear_norm(const FieldOp& apply, const FieldOp& adjoint, const GridField& start,
                                  const PowerOptions& opt) {
    const int n = start.n();
    const VecOp aat = field_op(n, [&](const GridField& g) { return apply(adjoint(g)); });
    const SpectralEstimate se = power_iteration(aat, flat(start), opt);
    NormEstimate out;
    out.value = std::sqrt(std::max(0.0, se.value));
    out.trace = se.trace;
    out.converged = se.converged;
    out.iterations = se.iterations;
    out.witness = normalized(adjoint(GridField(n, se.vector)));
    return out;
}

NormEstimate estimate_maximal_norm(const MaximalFamily& family, int n, const MaximalOptions& opt) {
    if (opt.rounds < 1) throw std::invalid_argument("maximal norm estimate: rounds must be >= 1");
    std::vector<GridField> starts;
    for (const GridField& s : opt.starts) {
        if (s.n() != n) throw std::invalid_argument("maximal norm estimate: start field has the wrong size");
        starts.push_back(abs(s));
    }
    if (opt.random_start || starts.empty()) starts.push_back(random_positive(n, mix_seed(opt.seed, 1)));

    NormEstimate best;
    best.value = -1.0;
    bool checked = false;
    for (std::size_t si = 0; si < starts.size(); ++si) {
        GridField f = normalized(starts[si]);
        if (f.l2_norm() == 0.0) continue;
        double prev = -1.0;
        for (int r = 0; r < opt.rounds; ++r) {
            Selector phi = linearize(family, f);
            const RectOperator T = T_operator(phi);
            PowerOptions po;
            po.tol = opt.tol;
            po.max_iter = opt.max_iter;
            po.seed = mix_seed(opt.seed, 100 + si * 31 + r);
            po.check_adjoint = !checked;
            checked = true;
            const VecOp tts = field_op(n, [&](const GridField& g) { return T.apply(T.adjoint(g)); });
            const SpectralEstimate se = power_iteration(tts, flat(T.apply(f)), po);
            const double val = std::sqrt(std::max(0.0, se.value));
            GridField h = normalized(T.adjoint(GridField(n, se.vector)));
            if (val > best.value) {
                best.value = val;
                best.witness = h;
                best.trace = se.trace;
                best.converged = se.converged;
                best.iterations = se.iterations;
                best.selector = std::move(phi);
            }
            if (val <= prev * (1.0 + 1e-9)) break;
            prev = val;
            f = std::move(h);
        }
    }
    if (best.value < 0.0) best.value = 0.0;
    return best;
}

}  // namespace dirmax
