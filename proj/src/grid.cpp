#include "dirmax/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dirmax {

GridField::GridField(int n, double value) : n_(n) {
    if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
    values_.assign(static_cast<std::size_t>(n) * n, value);
}

GridField::GridField(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
    if (values_.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("grid: value count != n*n");
}

double GridField::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s) * spacing();
}

double GridField::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
}

bool GridField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace {
void require_same(const GridField& a, const GridField& b) {
    if (a.n() != b.n()) throw std::invalid_argument("grid: size mismatch");
}
}  // namespace

double inner(const GridField& a, const GridField& b) {
    require_same(a, b);
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) s += a[p] * b[p];
    return s * a.spacing() * a.spacing();
}

GridField abs(const GridField& f) {
    GridField out = f;
    for (double& v : out.values()) v = std::abs(v);
    return out;
}

GridField operator+(const GridField& a, const GridField& b) {
    require_same(a, b);
    GridField out = a;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += b[p];
    return out;
}

GridField operator-(const GridField& a, const GridField& b) {
    require_same(a, b);
    GridField out = a;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] -= b[p];
    return out;
}

GridField operator*(double c, const GridField& f) {
    GridField out = f;
    for (double& v : out.values()) v *= c;
    return out;
}

GridField pointwise_max(const GridField& a, const GridField& b) {
    require_same(a, b);
    GridField out = a;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::max(a[p], b[p]);
    return out;
}

GridField normalized(const GridField& f) {
    const double nrm = f.l2_norm();
    return nrm > 0.0 ? (1.0 / nrm) * f : f;
}

double bilinear(const GridField& f, Vec2 p) {
    const int n = f.n();
    const double px = p.x * n - 0.5;
    const double py = p.y * n - 0.5;
    if (px <= -1.0 || py <= -1.0 || px >= n || py >= n) return 0.0;
    const int i0 = static_cast<int>(std::floor(px));
    const int j0 = static_cast<int>(std::floor(py));
    const double fx = px - i0;
    const double fy = py - j0;
    return (1.0 - fx) * (1.0 - fy) * f.value_or_zero(i0, j0) + fx * (1.0 - fy) * f.value_or_zero(i0 + 1, j0) +
           (1.0 - fx) * fy * f.value_or_zero(i0, j0 + 1) + fx * fy * f.value_or_zero(i0 + 1, j0 + 1);
}

std::vector<PixelWeight> bilinear_weights(int n, Vec2 p) {
    std::vector<PixelWeight> out;
    const double px = p.x * n - 0.5;
    const double py = p.y * n - 0.5;
    if (px <= -1.0 || py <= -1.0 || px >= n || py >= n) return out;
    const int i0 = static_cast<int>(std::floor(px));
    const int j0 = static_cast<int>(std::floor(py));
    const double fx = px - i0;
    const double fy = py - j0;
    const double w[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
    const int di[4] = {0, 1, 0, 1};
    const int dj[4] = {0, 0, 1, 1};
    for (int k = 0; k < 4; ++k) {
        const int i = i0 + di[k];
        const int j = j0 + dj[k];
        if (i >= 0 && j >= 0 && i < n && j < n) out.push_back({j * n + i, w[k]});
    }
    return out;
}

// ---------------------------------------------------------------------------

SummedAreaTable::SummedAreaTable(const GridField& f) : n_(f.n()) {
    const int m = n_ + 1;
    sums_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < n_; ++j) {
        double row = 0.0;
        for (int i = 0; i < n_; ++i) {
            row += f(i, j);
            sums_[static_cast<std::size_t>(j + 1) * m + i + 1] = sums_[static_cast<std::size_t>(j) * m + i + 1] + row;
        }
    }
}

double SummedAreaTable::box_sum(int i0, int i1, int j0, int j1) const {
    i0 = std::clamp(i0, 0, n_);
    i1 = std::clamp(i1, 0, n_);
    j0 = std::clamp(j0, 0, n_);
    j1 = std::clamp(j1, 0, n_);
    if (i1 <= i0 || j1 <= j0) return 0.0;
    return at(i1, j1) - at(i0, j1) - at(i1, j0) + at(i0, j0);
}

double SummedAreaTable::cumulative(double x, double y) const {
    const double X = std::clamp(x * n_, 0.0, static_cast<double>(n_));
    const double Y = std::clamp(y * n_, 0.0, static_cast<double>(n_));
    const int i = std::min(static_cast<int>(X), n_ - 1);
    const int j = std::min(static_cast<int>(Y), n_ - 1);
    const double fx = X - i;
    const double fy = Y - j;
    return (1.0 - fx) * (1.0 - fy) * at(i, j) + fx * (1.0 - fy) * at(i + 1, j) + (1.0 - fx) * fy * at(i, j + 1) +
           fx * fy * at(i + 1, j + 1);
}

double SummedAreaTable::integral(double x0, double x1, double y0, double y1) const {
    const double cell = 1.0 / (static_cast<double>(n_) * n_);
    return (cumulative(x1, y1) - cumulative(x0, y1) - cumulative(x1, y0) + cumulative(x0, y0)) * cell;
}

SummedAreaTable sat_build(const GridField& f) { return SummedAreaTable(f); }

// ---------------------------------------------------------------------------

PixelCover rect_pixels(int n, const Rect& r) {
    const auto c = r.corners();
    double xmin = c[0].x, xmax = c[0].x, ymin = c[0].y, ymax = c[0].y;
    for (const Vec2& p : c) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const int i_lo = static_cast<int>(std::ceil(xmin * n - 0.5 - 1e-9));
    const int i_hi = static_cast<int>(std::floor(xmax * n - 0.5 + 1e-9));
    const int j_lo = static_cast<int>(std::ceil(ymin * n - 0.5 - 1e-9));
    const int j_hi = static_cast<int>(std::floor(ymax * n - 0.5 + 1e-9));

    PixelCover out;
    const double s = 1.0 / n;
    for (int j = std::max(j_lo, 0); j <= std::min(j_hi, n - 1); ++j)
        for (int i = std::max(i_lo, 0); i <= std::min(i_hi, n - 1); ++i)
            if (rect_contains(r, {(i + 0.5) * s, (j + 0.5) * s})) out.pixels.push_back(j * n + i);
    out.any_center = !out.pixels.empty();
    if (!out.any_center) {
        for (int j = j_lo; j <= j_hi && !out.any_center; ++j)
            for (int i = i_lo; i <= i_hi; ++i)
                if (rect_contains(r, {(i + 0.5) * s, (j + 0.5) * s})) {
                    out.any_center = true;
                    break;
                }
    }
    return out;
}

double rect_average_exact(const GridField& f, const Rect& r) {
    const PixelCover cover = rect_pixels(f.n(), r);
    if (!cover.any_center) return bilinear(f, r.center);
    double sum = 0.0;
    for (int p : cover.pixels) sum += f[p];
    const double s = f.spacing();
    return sum * s * s / r.area();
}

// ---------------------------------------------------------------------------

void write_text(std::ostream& os, const GridField& f) {
    os << "n=" << f.n() << '\n';
    char buf[32];
    for (int j = 0; j < f.n(); ++j) {
        for (int i = 0; i < f.n(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", f(i, j));
            if (i) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

namespace {
int read_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0) throw std::runtime_error("grid file: missing n=<int> header");
    const int n = std::stoi(line.substr(2));
    if (n < 1) throw std::runtime_error("grid file: bad n");
    return n;
}
}  // namespace

GridField read_text(std::istream& is) {
    const int n = read_header(is);
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    for (double& x : v)
        if (!(is >> x)) throw std::runtime_error("grid file: truncated data");
    return GridField(n, std::move(v));
}

void write_binary(std::ostream& os, const GridField& f) {
    static_assert(std::endian::native == std::endian::little, "binary grid format assumes little-endian host");
    os << "n=" << f.n() << '\n';
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
}

GridField read_binary(std::istream& is) {
    const int n = read_header(is);
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("grid file: truncated data");
    return GridField(n, std::move(v));
}

}  // namespace dirmax
