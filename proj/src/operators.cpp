#include "dirmax/operators.hpp"

#include "dirmax/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace dirmax {

void ScaleGrid::validate() const {
    if (heights.empty() || eccs.empty()) throw std::invalid_argument("scale grid: empty heights or eccs");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(heights[i] > 0.0)) throw std::invalid_argument("scale grid: heights must be positive");
        if (i > 0 && !(heights[i] < heights[i - 1])) throw std::invalid_argument("scale grid: heights must descend");
    }
    for (std::size_t i = 0; i < eccs.size(); ++i) {
        if (!(eccs[i] > 0.0 && eccs[i] <= 1.0)) throw std::invalid_argument("scale grid: eccs must lie in (0, 1]");
        if (i > 0 && !(eccs[i] < eccs[i - 1])) throw std::invalid_argument("scale grid: eccs must descend");
    }
    if (offsets_per_axis < 1 || offsets_per_axis % 2 == 0)
        throw std::invalid_argument("scale grid: offsets_per_axis must be odd and >= 1");
}

std::vector<ScaleTerm> ScaleGrid::admissible(int n) const {
    validate();
    const double s = 1.0 / n;
    std::vector<ScaleTerm> out;
    for (std::size_t hi = 0; hi < heights.size(); ++hi)
        for (std::size_t ei = 0; ei < eccs.size(); ++ei)
            if (eccs[ei] * heights[hi] >= s * (1.0 - 1e-12))
                out.push_back({heights[hi], eccs[ei], 1.0, static_cast<int>(hi), static_cast<int>(ei)});
    if (out.empty()) throw std::invalid_argument("scale grid: no (h, ecc) pair is resolvable at this grid size");
    return out;
}

ScaleGrid dyadic_scale_grid(double h_max, int height_count, int ecc_count, int offsets_per_axis) {
    ScaleGrid g;
    for (int k = 0; k < height_count; ++k) g.heights.push_back(std::ldexp(h_max, -k));
    for (int k = 1; k <= ecc_count; ++k) g.eccs.push_back(std::ldexp(1.0, -k));
    g.offsets_per_axis = offsets_per_axis;
    g.validate();
    return g;
}

std::vector<int> filter_directions(const DirectionSet& dirs, DirectionFilter filter) {
    std::vector<int> out;
    switch (filter.kind) {
        case DirectionFilter::Kind::all: out = dirs.all_indices(); break;
        case DirectionFilter::Kind::sector: out = dirs.sector_members(filter.sector); break;
        case DirectionFilter::Kind::anchors: out = dirs.anchors(); break;
    }
    if (out.empty()) throw std::invalid_argument("maximal operator: filtered direction set is empty");
    return out;
}

MaximalFamily directional_family(const DirectionSet& dirs, const ScaleGrid& scales, int n, DirectionFilter filter,
                                 Averaging mode) {
    return {dirs, filter_directions(dirs, filter), scales.admissible(n), scales.offsets_per_axis, mode};
}

MaximalFamily eccentricity_family(const DirectionSet& dirs, double ecc, const std::vector<double>& heights, int n,
                                  int offsets_per_axis, Averaging mode) {
    if (!(ecc > 0.0 && ecc <= 1.0)) throw std::invalid_argument("eccentricity must lie in (0, 1]");
    if (heights.empty()) throw std::invalid_argument("eccentricity family: empty height list");
    const double s = 1.0 / n;
    if (ecc * *std::min_element(heights.begin(), heights.end()) < s * (1.0 - 1e-12))
        throw std::invalid_argument("eccentricity family: ecc * min(height) is below the grid spacing");
    ScaleGrid g{heights, {ecc}, offsets_per_axis};
    return {dirs, dirs.all_indices(), g.admissible(n), offsets_per_axis, mode};
}

MaximalFamily grand_family(const DirectionSet& dirs, const std::vector<double>& ecc_list,
                           const std::vector<double>& heights, int n, int offsets_per_axis, Averaging mode) {
    if (ecc_list.empty()) throw std::invalid_argument("grand maximal: empty eccentricity list");
    for (double e : ecc_list)
        if (!(e > 0.0 && e < 0.5)) throw std::invalid_argument("grand maximal: eccentricities must lie in (0, 1/2)");
    std::vector<double> eccs = ecc_list;
    std::sort(eccs.begin(), eccs.end(), std::greater<>());
    eccs.erase(std::unique(eccs.begin(), eccs.end()), eccs.end());
    ScaleGrid g{heights, eccs, offsets_per_axis};
    std::vector<ScaleTerm> terms = g.admissible(n);
    for (ScaleTerm& t : terms) t.weight = 1.0 / std::abs(std::log(t.ecc));
    return {dirs, dirs.all_indices(), terms, offsets_per_axis, mode};
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

namespace {

double offset_t(int o, int P) { return P == 1 ? 0.0 : (o - (P - 1) / 2.0) / (P - 1); }

// Integer lattice shift for offset t that keeps the pixel inside the box:
// |alpha - round(alpha)| <= 1/2, so |shift| <= half - 1/2 suffices.
int lattice_shift(double t, double half) {
    const double room = std::max(0.0, half - 0.5);
    return t >= 0.0 ? static_cast<int>(std::floor(t * room)) : -static_cast<int>(std::floor(-t * room));
}

struct Best {
    std::vector<double> value;
    std::vector<int> slot;
    std::vector<int> term;
    std::vector<int> offset;
};

void scan_lattice(const MaximalFamily& fam, const GridField& af, Best& best) {
    const int n = af.n();
    const int np = n * n;
    const int P = fam.offsets_per_axis;
    const std::vector<double>& angles = fam.dirs.angles();
    std::vector<int> ra(np), rb(np);
    std::vector<double> A;
    std::vector<AxisTaps> taps;

    for (std::size_t k = 0; k < fam.directions.size(); ++k) {
        const double theta = angles[fam.directions[k]];
        const DirectionalSat sat(af, theta);
        const RotatedLattice& lat = sat.lattice();
        const int K = lat.half();
        const int L = lat.extent();

        int amin = std::numeric_limits<int>::max(), amax = std::numeric_limits<int>::min();
        int bmin = amin, bmax = amax;
        for (int p = 0; p < np; ++p) {
            const Vec2 ab = lat.to_lattice(af.pixel_center(p));
            ra[p] = static_cast<int>(std::lround(ab.x));
            rb[p] = static_cast<int>(std::lround(ab.y));
            amin = std::min(amin, ra[p]);
            amax = std::max(amax, ra[p]);
            bmin = std::min(bmin, rb[p]);
            bmax = std::max(bmax, rb[p]);
        }

        for (std::size_t t = 0; t < fam.scales.size(); ++t) {
            const ScaleTerm& st = fam.scales[t];
            const HalfExtents he = lattice_halves(st.h, st.ecc, n);
            const AxisOffsets offA = axis_offsets(he.along);
            const AxisOffsets offB = axis_offsets(he.across);
            const double inv_norm = 1.0 / (4.0 * he.along * he.across);
            std::vector<int> ka(P), kb(P);
            int sa = 0, sb = 0;
            for (int o = 0; o < P; ++o) {
                ka[o] = lattice_shift(offset_t(o, P), he.along);
                kb[o] = lattice_shift(offset_t(o, P), he.across);
                sa = std::max(sa, std::abs(ka[o]));
                sb = std::max(sb, std::abs(kb[o]));
            }
            const int a0 = amin - sa, a1 = amax + sa;
            const int b0 = bmin - sb, b1 = bmax + sb;
            const int W = a1 - a0 + 1;
            const int H = b1 - b0 + 1;
            taps.resize(W);
            A.resize(static_cast<std::size_t>(W) * H);
            for (int ca = a0; ca <= a1; ++ca) taps[ca - a0] = snapped_taps(ca + K, offA, L);
#pragma omp parallel
            {
                std::vector<double> D(static_cast<std::size_t>(L) + 1);
#pragma omp for schedule(static)
                for (int cb = b0; cb <= b1; ++cb) {
                    sat.row_difference(snapped_taps(cb + K, offB, L), D.data());
                    double* row = A.data() + static_cast<std::size_t>(cb - b0) * W;
                    for (int c = 0; c < W; ++c)
                        row[c] = (DirectionalSat::column_value(D.data(), taps[c].hi) -
                                  DirectionalSat::column_value(D.data(), taps[c].lo)) *
                                 inv_norm;
                }
            }
            const double w = st.weight;
            std::vector<std::ptrdiff_t> delta(static_cast<std::size_t>(P) * P);
            for (int oa = 0; oa < P; ++oa)
                for (int ob = 0; ob < P; ++ob)
                    delta[oa * P + ob] = -static_cast<std::ptrdiff_t>(kb[ob]) * W - ka[oa];
            const double* Ad = A.data();
            const std::ptrdiff_t* dd = delta.data();
            const int PP = P * P;
            double* bv = best.value.data();
            int* bslot = best.slot.data();
            int* bterm = best.term.data();
            int* boff = best.offset.data();
            const int* rap = ra.data();
            const int* rbp = rb.data();
#pragma omp parallel for schedule(static)
            for (int p = 0; p < np; ++p) {
                const double* base = Ad + static_cast<std::ptrdiff_t>(rbp[p] - b0) * W + (rap[p] - a0);
                double cur = bv[p];
                int bo = -1;
                for (int o = 0; o < PP; ++o) {
                    const double v = w * base[dd[o]];
                    if (v > cur) {
                        cur = v;
                        bo = o;
                    }
                }
                if (bo >= 0) {
                    bv[p] = cur;
                    bslot[p] = static_cast<int>(k);
                    bterm[p] = static_cast<int>(t);
                    boff[p] = bo;
                }
            }
        }
    }
}

double stencil_sum(const GridField& f, const Stencil& st, int i, int j) {
    const int n = f.n();
    double sum = 0.0;
    for (const Stencil::Run& r : st.runs) {
        const int jj = j + r.dj;
        if (jj < 0 || jj >= n) continue;
        const int lo = std::max(0, i + r.lo);
        const int hi = std::min(n - 1, i + r.hi);
        const double* row = f.values().data() + static_cast<std::size_t>(jj) * n;
        for (int ii = lo; ii <= hi; ++ii) sum += row[ii];
    }
    return sum;
}

void scan_exact(const MaximalFamily& fam, const GridField& af, Best& best) {
    const int n = af.n();
    const double s = af.spacing();
    const int P = fam.offsets_per_axis;
    const std::vector<double>& angles = fam.dirs.angles();
    for (std::size_t k = 0; k < fam.directions.size(); ++k) {
        const double theta = normalize_angle(angles[fam.directions[k]]);
        for (std::size_t t = 0; t < fam.scales.size(); ++t) {
            const ScaleTerm& st = fam.scales[t];
            const Rect proto{{0.0, 0.0}, st.h, st.ecc, theta};
            const Vec2 u = proto.axis();
            const Vec2 v = proto.normal();
            const double area = proto.area();
            for (int oa = 0; oa < P; ++oa) {
                for (int ob = 0; ob < P; ++ob) {
                    const Vec2 o = u * (-offset_t(oa, P) * 0.5 * st.h) + v * (-offset_t(ob, P) * 0.5 * proto.width());
                    Rect r = proto;
                    r.center = o;
                    const Stencil sten = make_stencil(n, r);
                    const int code = oa * P + ob;
#pragma omp parallel for schedule(static)
                    for (int j = 0; j < n; ++j) {
                        for (int i = 0; i < n; ++i) {
                            const int p = j * n + i;
                            const double avg = stencil_sum(af, sten, i, j) * s * s / area;
                            const double val = st.weight * avg;
                            if (val > best.value[p]) {
                                best.value[p] = val;
                                best.slot[p] = static_cast<int>(k);
                                best.term[p] = static_cast<int>(t);
                                best.offset[p] = code;
                            }
                        }
                    }
                }
            }
        }
    }
}

Best run_scan(const MaximalFamily& fam, const GridField& f) {
    if (fam.directions.empty()) throw std::invalid_argument("maximal operator: empty direction set");
    if (fam.scales.empty()) throw std::invalid_argument("maximal operator: empty scale list");
    if (fam.offsets_per_axis < 1 || fam.offsets_per_axis % 2 == 0)
        throw std::invalid_argument("maximal operator: offsets_per_axis must be odd");
    const GridField af = abs(f);
    const std::size_t np = af.size();
    Best best{std::vector<double>(np, -std::numeric_limits<double>::infinity()), std::vector<int>(np, 0),
              std::vector<int>(np, 0), std::vector<int>(np, 0)};
    if (fam.mode == Averaging::lattice)
        scan_lattice(fam, af, best);
    else
        scan_exact(fam, af, best);
    return best;
}

}  // namespace

GridField maximal(const MaximalFamily& family, const GridField& f) {
    Best best = run_scan(family, f);
    return GridField(f.n(), std::move(best.value));
}

Selector linearize(const MaximalFamily& family, const GridField& f) {
    const Best best = run_scan(family, f);
    return selector_from_choices(family, f.n(), best.slot, best.term, best.offset);
}

Selector selector_from_choices(const MaximalFamily& family, int n, const std::vector<int>& slot,
                               const std::vector<int>& term, const std::vector<int>& offset) {
    const std::size_t np = static_cast<std::size_t>(n) * n;
    if (slot.size() != np || term.size() != np || offset.size() != np)
        throw std::invalid_argument("selector: choice arrays must have one entry per pixel");
    const int P = family.offsets_per_axis;
    Selector phi;
    phi.n = n;
    phi.mode = family.mode;
    phi.rects.resize(np);
    phi.weights.resize(np);
    phi.direction.resize(np);
    phi.sector.resize(np);
    const GridField shape(n, 0.0);
    std::vector<RotatedLattice> lats;
    if (family.mode == Averaging::lattice)
        for (int d : family.directions) lats.emplace_back(n, family.dirs.angles()[d]);
    for (std::size_t p = 0; p < np; ++p) {
        if (slot[p] < 0 || slot[p] >= static_cast<int>(family.directions.size()) || term[p] < 0 ||
            term[p] >= static_cast<int>(family.scales.size()) || offset[p] < 0 || offset[p] >= P * P)
            throw std::out_of_range("selector: choice outside the family");
        const int d = family.directions[slot[p]];
        const ScaleTerm& st = family.scales[term[p]];
        const double theta = normalize_angle(family.dirs.angles()[d]);
        const double ta = offset_t(offset[p] / P, P);
        const double tb = offset_t(offset[p] % P, P);
        const Vec2 x = shape.pixel_center(static_cast<int>(p));
        Vec2 c;
        if (family.mode == Averaging::lattice) {
            const RotatedLattice& lat = lats[slot[p]];
            const HalfExtents he = lattice_halves(st.h, st.ecc, n);
            const Vec2 ab = lat.to_lattice(x);
            c = lat.to_world(std::lround(ab.x) - lattice_shift(ta, he.along),
                             std::lround(ab.y) - lattice_shift(tb, he.across));
        } else {
            const Rect proto{{0.0, 0.0}, st.h, st.ecc, theta};
            c = x + (proto.axis() * (-ta * 0.5 * st.h) + proto.normal() * (-tb * 0.5 * proto.width()));
        }
        phi.rects[p] = Rect{c, st.h, st.ecc, theta};
        phi.weights[p] = st.weight;
        phi.direction[p] = d;
        phi.sector[p] = family.dirs.sector_of()[d];
    }
    return phi;
}

GridField maximal_directional(const GridField& f, const DirectionSet& dirs, const ScaleGrid& scales,
                              DirectionFilter filter, Averaging mode) {
    return maximal(directional_family(dirs, scales, f.n(), filter, mode), f);
}

GridField maximal_eccentricity(const GridField& f, double ecc, const DirectionSet& dirs,
                               const std::vector<double>& heights, int offsets_per_axis, Averaging mode) {
    return maximal(eccentricity_family(dirs, ecc, heights, f.n(), offsets_per_axis, mode), f);
}

GridField grand_maximal(const GridField& f, const std::vector<double>& ecc_list, const DirectionSet& dirs,
                        const std::vector<double>& heights, int offsets_per_axis, Averaging mode) {
    return maximal(grand_family(dirs, ecc_list, heights, f.n(), offsets_per_axis, mode), f);
}

// ---------------------------------------------------------------------------
// RectOperator
// ---------------------------------------------------------------------------

void RectOperator::add(int pixel, const Rect& r, double weight) {
    if (pixel < 0 || pixel >= n_ * n_) throw std::out_of_range("rect operator: pixel index out of range");
    Rect q = r;
    q.theta = normalize_angle(q.theta);
    terms_.push_back({pixel, q, weight});
}

std::vector<std::vector<int>> RectOperator::groups() const {
    std::map<double, std::vector<int>> by_theta;
    for (std::size_t i = 0; i < terms_.size(); ++i) by_theta[terms_[i].rect.theta].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    out.reserve(by_theta.size());
    for (auto& kv : by_theta) out.push_back(std::move(kv.second));
    return out;
}

GridField RectOperator::apply(const GridField& f) const {
    if (f.n() != n_) throw std::invalid_argument("rect operator: grid size mismatch");
    GridField out(n_, 0.0);
    if (mode_ == Averaging::exact) {
        for (const Term& t : terms_) out[t.pixel] += t.weight * rect_average_exact(f, t.rect);
        return out;
    }
    for (const std::vector<int>& g : groups()) {
        const DirectionalSat sat(f, terms_[g.front()].rect.theta);
        for (int i : g) {
            const Term& t = terms_[i];
            out[t.pixel] += t.weight * sat.average(rect_taps(sat.lattice(), t.rect));
        }
    }
    return out;
}

GridField RectOperator::adjoint(const GridField& g) const {
    if (g.n() != n_) throw std::invalid_argument("rect operator: grid size mismatch");
    GridField out(n_, 0.0);
    if (mode_ == Averaging::exact) {
        const double s = 1.0 / n_;
        for (const Term& t : terms_) {
            const double c = g[t.pixel] * t.weight;
            if (c == 0.0) continue;
            const PixelCover cover = rect_pixels(n_, t.rect);
            if (!cover.any_center) {
                for (const PixelWeight& pw : bilinear_weights(n_, t.rect.center)) out[pw.pixel] += c * pw.weight;
                continue;
            }
            const double k = c * s * s / t.rect.area();
            for (int q : cover.pixels) out[q] += k;
        }
        return out;
    }
    for (const std::vector<int>& grp : groups()) {
        LatticeSplat splat(n_, terms_[grp.front()].rect.theta);
        for (int i : grp) {
            const Term& t = terms_[i];
            splat.add(rect_taps(splat.lattice(), t.rect), t.weight * g[t.pixel]);
        }
        splat.finish_into(out);
    }
    return out;
}

RectOperator T_operator(const Selector& phi) {
    RectOperator op(phi.n, phi.mode);
    for (std::size_t p = 0; p < phi.rects.size(); ++p) op.add(static_cast<int>(p), phi.rects[p], phi.weights[p]);
    return op;
}

RectOperator Ttilde_operator(const Selector& phi) {
    RectOperator op(phi.n, phi.mode);
    for (std::size_t p = 0; p < phi.rects.size(); ++p)
        op.add(static_cast<int>(p), rect_double(phi.rects[p]), phi.weights[p]);
    return op;
}

RectOperator T0_operator(const Selector& phi, const DirectionSet& dirs) {
    if (dirs.anchors().empty()) throw std::invalid_argument("T0: direction set has no anchors");
    RectOperator op(phi.n, phi.mode);
    for (std::size_t p = 0; p < phi.rects.size(); ++p) {
        const auto [a, b] = dirs.sector_endpoints(phi.sector[p]);
        op.add(static_cast<int>(p), rect_reslope(phi.rects[p], dirs.angles()[a]), phi.weights[p]);
        op.add(static_cast<int>(p), rect_reslope(phi.rects[p], dirs.angles()[b]), phi.weights[p]);
    }
    return op;
}

GridField apply_T(const Selector& phi, const GridField& f) { return T_operator(phi).apply(f); }
GridField apply_T_adjoint(const Selector& phi, const GridField& g) { return T_operator(phi).adjoint(g); }
GridField apply_Ttilde(const Selector& phi, const GridField& f) { return Ttilde_operator(phi).apply(f); }
GridField apply_T0(const Selector& phi, const DirectionSet& dirs, const GridField& f) {
    return T0_operator(phi, dirs).apply(f);
}

GridField apply_T1(const Selector& phi, const GridField& f) {
    const RectOperator T = T_operator(phi);
    std::vector<int> sectors = phi.sector;
    std::sort(sectors.begin(), sectors.end());
    sectors.erase(std::unique(sectors.begin(), sectors.end()), sectors.end());
    GridField out(phi.n, 0.0);
    for (int sec : sectors) {
        GridField part(phi.n, 0.0);
        for (std::size_t p = 0; p < part.size(); ++p)
            if (phi.sector[p] == sec) part[p] = f[p];
        const GridField h = T.apply(T.adjoint(part));
        for (std::size_t p = 0; p < out.size(); ++p)
            if (phi.sector[p] == sec) out[p] += h[p];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Centered averages
// ---------------------------------------------------------------------------

Stencil make_stencil(int n, const Rect& r) {
    const auto c = r.corners();
    double xmin = c[0].x, xmax = c[0].x, ymin = c[0].y, ymax = c[0].y;
    for (const Vec2& p : c) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double s = 1.0 / n;
    const int i0 = static_cast<int>(std::ceil(xmin * n - 1e-9));
    const int i1 = static_cast<int>(std::floor(xmax * n + 1e-9));
    const int j0 = static_cast<int>(std::ceil(ymin * n - 1e-9));
    const int j1 = static_cast<int>(std::floor(ymax * n + 1e-9));
    Stencil st;
    st.area = r.area();
    for (int dj = j0; dj <= j1; ++dj) {
        int lo = 0, hi = -1;
        bool found = false;
        for (int di = i0; di <= i1; ++di) {
            if (rect_contains(r, {di * s, dj * s})) {
                if (!found) lo = di;
                hi = di;
                found = true;
            } else if (found) {
                break;
            }
        }
        if (found) st.runs.push_back({dj, lo, hi});
    }
    return st;
}

GridField stencil_average(const GridField& f, const Stencil& st, double scale) {
    const int n = f.n();
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<double> prefix(m * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double run = 0.0;
        for (int i = 0; i < n; ++i) {
            run += f(i, j);
            prefix[j * m + i + 1] = run;
        }
    }
    const double s = f.spacing();
    const double k = scale * s * s / st.area;
    GridField out(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (const Stencil::Run& r : st.runs) {
                const int jj = j + r.dj;
                if (jj < 0 || jj >= n) continue;
                const int lo = std::clamp(i + r.lo, 0, n);
                const int hi = std::clamp(i + r.hi + 1, 0, n);
                if (hi > lo) sum += prefix[jj * m + hi] - prefix[jj * m + lo];
            }
            out(i, j) = k * sum;
        }
    }
    return out;
}

GridField apply_Tm(const RectParam& m, const GridField& f) {
    return stencil_average(f, make_stencil(f.n(), m.shape()), 1.0 / m.l());
}

GridField apply_Sm(const RectParam& m, const GridField& f) {
    RectParam d = m;
    d.h *= 2.0;
    return stencil_average(f, make_stencil(f.n(), d.shape()), 1.0 / m.l());
}

int wn_terms(const RectParam& m) { return std::max(1, static_cast<int>(std::floor(2.0 * m.l()))); }

double hnj_radius(const RectParam& m, int j) { return std::min(std::ldexp(m.ecc * m.h, j), 1.0); }

GridField vertical_average(const GridField& f, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("vertical average: radius must be positive");
    const int n = f.n();
    // Interval ends in pixel units relative to row j: j + lo and j + hi.
    const double R = rho * n;
    const double lo = 0.5 - R;
    const double hi = 0.5 + R;
    const double lo_floor = std::floor(lo);
    const double hi_floor = std::floor(hi);
    const int lo_i = static_cast<int>(lo_floor);
    const int hi_i = static_cast<int>(hi_floor);
    const double lo_frac = lo - lo_floor;
    const double hi_frac = hi - hi_floor;
    const double k = 1.0 / (2.0 * R);
    std::vector<double> col(static_cast<std::size_t>(n) + 1);
    GridField out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        col[0] = 0.0;
        for (int j = 0; j < n; ++j) col[j + 1] = col[j] + f(i, j);
        // Integral of the pixelwise-constant column from 0 to m + frac.
        const auto F = [&](int m, double frac) {
            if (m < 0) return 0.0;
            if (m >= n) return col[n];
            return col[m] + frac * f(i, m);
        };
        for (int j = 0; j < n; ++j) out(i, j) = k * (F(j + hi_i, hi_frac) - F(j + lo_i, lo_frac));
    }
    return out;
}

GridField apply_Hnj(const RectParam& m, int j, const GridField& f) {
    if (j < 1) throw std::invalid_argument("H_{n,j}: j must be >= 1");
    return vertical_average(f, hnj_radius(m, j));
}

GridField apply_Wn(const RectParam& m, const GridField& f) {
    const int J = wn_terms(m);
    GridField out(f.n(), 0.0);
    for (int j = 1; j <= J; ++j) {
        const GridField h = apply_Hnj(m, j, f);
        for (std::size_t p = 0; p < out.size(); ++p) out[p] += h[p];
    }
    for (double& v : out.values()) v /= J;
    return out;
}

std::vector<double> dyadic_radii(int n) {
    std::vector<double> out;
    for (double r = 1.0 / n; r <= 1.0 + 1e-12; r *= 2.0) out.push_back(r);
    return out;
}

GridField maximal_y(const GridField& f, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("maximal_y: empty radius list");
    const GridField af = abs(f);
    GridField out(f.n(), 0.0);
    for (double r : radii) out = pointwise_max(out, vertical_average(af, r));
    return out;
}

}  // namespace dirmax
