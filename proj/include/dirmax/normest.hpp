/**
 * @file normest.hpp
 * @brief Power iteration and lower-bound norm estimates for averaging and
 * maximal operators.
 *
 * Maximal norms are estimated by alternating linearization and power
 * iteration: linearize at f, iterate T T* to its top eigenvector g, move to
 * f = T* g / |T* g| and repeat. Every reported value v comes with a witness
 * pair (f, selector) such that |T f| / |f| >= v, hence v <= |M|.
 */
#pragma once

#include "dirmax/operators.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dirmax {

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

using VecOp = std::function<std::vector<double>(const std::vector<double>&)>;
using FieldOp = std::function<GridField(const GridField&)>;

struct PowerOptions {
    double tol = 1e-6;  ///< relative Rayleigh increment
    int max_iter = 500;
    std::uint64_t seed = 1;
    bool check_adjoint = true;
};

struct SpectralEstimate {
    double value = 0.0;  ///< top eigenvalue estimate (final Rayleigh quotient)
    std::vector<double> vector;
    std::vector<double> trace;
    bool converged = false;
    int iterations = 0;
};

/// Throws ContractViolation unless <Au, v> = <u, Av> to 1e-6 on three random pairs.
void check_self_adjoint(const VecOp& apply, std::size_t dim, std::uint64_t seed);

/// Top eigenpair of a self-adjoint positive semidefinite map.
SpectralEstimate power_iteration(const VecOp& apply, std::vector<double> start, const PowerOptions& opt = {});

struct NormEstimate {
    double value = 0.0;
    GridField witness;
    std::vector<double> trace;  ///< Rayleigh quotients of T T*
    bool converged = false;
    int iterations = 0;
    Selector selector;  ///< set by estimate_maximal_norm
};

/// |A| from power iteration on A A*; the witness is A* g normalized.
NormEstimate estimate_linear_norm(const FieldOp& apply, const FieldOp& adjoint, const GridField& start,
                                  const PowerOptions& opt = {});

struct MaximalOptions {
    int rounds = 3;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    int max_iter = 500;
    bool random_start = true;
    std::vector<GridField> starts;  ///< extra nonnegative starting fields
};

NormEstimate estimate_maximal_norm(const MaximalFamily& family, int n, const MaximalOptions& opt = {});

/// Deterministic pseudo-random field with values in [1/2, 3/2).
GridField random_positive(int n, std::uint64_t seed);

std::vector<double> flat(const GridField& f);

}  // namespace dirmax
