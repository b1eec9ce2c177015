// Shared numerical kernels: SVD null spaces, pseudo-inverse solves, peak
// picking with quadratic apex refinement, and a small parallel-for.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "csisense/types.hpp"

namespace csisense {

struct NullSpaceResult {
    Eigen::MatrixXcd basis;           // orthonormal columns spanning the null space
    int numerical_rank = 0;
    Eigen::VectorXd singular_values;  // descending
};

/// Left null space of M: left singular vectors whose singular values fall
/// below rel_tol * sigma_max. An all-zero matrix yields rank 0 and an
/// identity basis.
NullSpaceResult null_space(const Eigen::MatrixXcd& m, double rel_tol);

/// Tolerance raised onto an estimated noise floor: max(rel_tol,
/// 3 * median(smallest quartile of sigma) / sigma_max). Used by the MUSIC
/// estimators when the tensor carries noise.
double noise_adaptive_tol(const Eigen::VectorXd& singular_values, double rel_tol);

struct PinvSolveResult {
    Eigen::VectorXcd x;      // minimum-norm least-squares solution
    double residual = 0.0;   // ||A x - b||
    bool rank_deficient = false;
    double cond = 0.0;       // sigma_max / sigma_min (inf-like for rank deficient)
};

PinvSolveResult pinv_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                           double rel_tol = 1e-12);

struct Peak {
    double location = 0.0;
    double height = 0.0;
};

/// Strict local maxima of values over grid, apex refined by a 3-point
/// quadratic fit (non-uniform grids handled), boundary points excluded,
/// sorted by height descending, top L returned. Throws
/// InsufficientPeaksError when fewer than L exist.
std::vector<Peak> find_peaks(const std::vector<double>& values,
                             const std::vector<double>& grid, int count);

/// Runs fn(i) for i in [0, n) on up to jobs threads. jobs <= 1 runs inline.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace csisense
