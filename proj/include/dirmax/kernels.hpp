/**
 * @file kernels.hpp
 * @brief Dense TT* kernels for small grids.
 *
 * For a selector x -> R_x with weights w_x the operator TT* has kernel
 * K(x, z) = w_x w_z |R_x ∩ R_z| / (|R_x| |R_z|). The dense KernelMatrix stores
 * K(x, z) * spacing^2 so that (TT* f)(x) = sum_z M(x, z) f(z). Intersection
 * areas are either pixelated (shared pixel centers times spacing^2, which
 * reproduces the discrete exact-mode T exactly) or geometric (polygon
 * clipping, restricted to the unit square).
 */
#pragma once

#include "dirmax/operators.hpp"

#include <Eigen/Dense>

#include <iosfwd>

namespace dirmax {

using Matrix = Eigen::MatrixXd;

inline constexpr int kDenseCap = 32;

enum class KernelAreas { pixelated, geometric };

/// Geometric kernel value |R_x ∩ R_z| / (|R_x| |R_z|) with the selector weights.
double ttstar_kernel(const Selector& phi, int x, int z);

/// Dense matrix of T in exact mode: T(x, y) = w_x chi_{R_x}(y) spacing^2 / |R_x|.
Matrix dense_T(const Selector& phi, int cap = kDenseCap);

/// Dense matrix of any RectOperator, column by column from basis vectors.
Matrix dense_from_apply(const RectOperator& op, bool adjoint, int cap = kDenseCap);

Matrix ttstar_matrix(const Selector& phi, KernelAreas areas = KernelAreas::pixelated, int cap = kDenseCap);

struct KernelSplit {
    Matrix K1;  ///< same-sector entries
    Matrix K2;  ///< remainder
};
KernelSplit split_K(const Selector& phi, const Matrix& K);

double relative_frobenius(const Matrix& a, const Matrix& b);
/// Largest |eigenvalue| of a symmetric matrix.
double spectral_norm_sym(const Matrix& a);
double min_eigenvalue_sym(const Matrix& a);
/// Largest singular value of a general matrix.
double spectral_norm(const Matrix& a);
/// Restriction of a symmetric matrix to the rows and columns with the given sector.
Matrix sector_block(const Selector& phi, const Matrix& K, int sector);

/// Plain-text "row col value" lines for entries with |value| > drop.
void write_triplets(std::ostream& os, const Matrix& m, double drop = 0.0);

}  // namespace dirmax
