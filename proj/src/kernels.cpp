#include "dirmax/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dirmax {

namespace {

void require_cap(int n, int cap) {
    if (n > cap)
        throw std::invalid_argument("dense assembly refused: n = " + std::to_string(n) + " exceeds the cap of " +
                                    std::to_string(cap));
}

}  // namespace

double ttstar_kernel(const Selector& phi, int x, int z) {
    const Rect& a = phi.rects[x];
    const Rect& b = phi.rects[z];
    return phi.weights[x] * phi.weights[z] * rect_intersection_area(a, b) / (a.area() * b.area());
}

Matrix dense_T(const Selector& phi, int cap) {
    require_cap(phi.n, cap);
    const int np = phi.n * phi.n;
    const double s = 1.0 / phi.n;
    Matrix T = Matrix::Zero(np, np);
    for (int x = 0; x < np; ++x) {
        const PixelCover cover = rect_pixels(phi.n, phi.rects[x]);
        if (!cover.any_center) {
            for (const PixelWeight& pw : bilinear_weights(phi.n, phi.rects[x].center))
                T(x, pw.pixel) += phi.weights[x] * pw.weight;
            continue;
        }
        const double k = phi.weights[x] * s * s / phi.rects[x].area();
        for (int y : cover.pixels) T(x, y) = k;
    }
    return T;
}

Matrix dense_from_apply(const RectOperator& op, bool adjoint, int cap) {
    require_cap(op.n(), cap);
    const int np = op.n() * op.n();
    Matrix M(np, np);
    GridField e(op.n(), 0.0);
    for (int c = 0; c < np; ++c) {
        e[c] = 1.0;
        const GridField col = adjoint ? op.adjoint(e) : op.apply(e);
        for (int r = 0; r < np; ++r) M(r, c) = col[r];
        e[c] = 0.0;
    }
    return M;
}

Matrix ttstar_matrix(const Selector& phi, KernelAreas areas, int cap) {
    require_cap(phi.n, cap);
    const int np = phi.n * phi.n;
    const double s = 1.0 / phi.n;
    Matrix K = Matrix::Zero(np, np);
    if (areas == KernelAreas::geometric) {
#pragma omp parallel for schedule(dynamic)
        for (int x = 0; x < np; ++x) {
            const Rect& a = phi.rects[x];
            for (int z = x; z < np; ++z) {
                const Rect& b = phi.rects[z];
                const double v = phi.weights[x] * phi.weights[z] * rect_intersection_area_in_domain(a, b) /
                                 (a.area() * b.area()) * s * s;
                K(x, z) = v;
                K(z, x) = v;
            }
        }
        return K;
    }
    std::vector<std::vector<int>> covers(np);
    for (int x = 0; x < np; ++x) {
        PixelCover c = rect_pixels(phi.n, phi.rects[x]);
        if (!c.any_center) throw std::invalid_argument("pixelated kernel: a selected rectangle contains no pixel center");
        covers[x] = std::move(c.pixels);
    }
#pragma omp parallel for schedule(dynamic)
    for (int x = 0; x < np; ++x) {
        for (int z = x; z < np; ++z) {
            const std::vector<int>& a = covers[x];
            const std::vector<int>& b = covers[z];
            std::size_t i = 0, j = 0, shared = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] < b[j]) {
                    ++i;
                } else if (b[j] < a[i]) {
                    ++j;
                } else {
                    ++shared;
                    ++i;
                    ++j;
                }
            }
            const double v = phi.weights[x] * phi.weights[z] * (static_cast<double>(shared) * s * s) /
                             (phi.rects[x].area() * phi.rects[z].area()) * s * s;
            K(x, z) = v;
            K(z, x) = v;
        }
    }
    return K;
}

KernelSplit split_K(const Selector& phi, const Matrix& K) {
    KernelSplit out{Matrix::Zero(K.rows(), K.cols()), K};
    for (Eigen::Index x = 0; x < K.rows(); ++x)
        for (Eigen::Index z = 0; z < K.cols(); ++z)
            if (phi.sector[x] == phi.sector[z]) {
                out.K1(x, z) = K(x, z);
                out.K2(x, z) = 0.0;
            }
    return out;
}

double relative_frobenius(const Matrix& a, const Matrix& b) {
    const double denom = std::max(a.norm(), b.norm());
    return denom > 0.0 ? (a - b).norm() / denom : 0.0;
}

double spectral_norm_sym(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

double min_eigenvalue_sym(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return std::sqrt(std::max(0.0, spectral_norm_sym(a * a.transpose())));
}

Matrix sector_block(const Selector& phi, const Matrix& K, int sector) {
    std::vector<int> idx;
    for (std::size_t p = 0; p < phi.sector.size(); ++p)
        if (phi.sector[p] == sector) idx.push_back(static_cast<int>(p));
    Matrix B(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) B(i, j) = K(idx[i], idx[j]);
    return B;
}

void write_triplets(std::ostream& os, const Matrix& m, double drop) {
    char buf[96];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > drop) {
                std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(r), static_cast<long>(c), m(r, c));
                os << buf;
            }
}

}  // namespace dirmax
