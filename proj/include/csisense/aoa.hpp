// AoA recovery from the vectorized spatial D-CSIR manifold via MUSIC, with
// detection of the equal-static-component trivial-solution regime.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "csisense/doppler.hpp"  // SpectrumTrace
#include "csisense/types.hpp"

namespace csisense {

struct AoaConfig {
    std::vector<double> grid;   // spatial-frequency candidates [rad]
    double rank_tol = 1e-3;
    bool adaptive_tol = false;
    int m = 0, g = 0;           // manifold basis indices
    double guard_cov_threshold = 1e-3;  // trivial-solution dispersion test

    static std::vector<double> make_grid(int points = 1801);
    static AoaConfig defaults();
    double grid_step() const;
};

/// N x N matrix with entry (n, n') = psi_{n, n-n'}[m, p, g]; diagonal is
/// exactly zero.
Eigen::MatrixXcd build_manifold(const CsiTensor& y, int m, int p, int g,
                                double floor_rel = 1e-12);

struct SpatialManifold {
    Eigen::MatrixXcd abar;  // N^2 x P, column p-1 = vec(A[m, p, g])
    int m = 0, g = 0;
};

/// Stacks vec(A[m,p,g]) for p = 1..P (column-major vectorization).
SpatialManifold stack_manifold(const CsiTensor& y, const AoaConfig& cfg);

/// Normalized first-order spatial basis: block n' holds
/// [h_{n, n-n'}^{m,g}(phi) e^{j n phi}]_{n=0..N-1}.
Eigen::VectorXcd aoa_basis_d1(double phi, const CsiTensor& y, int m, int g);

/// Normalized second-order spatial basis: block n' holds
/// [H_{n, n-n'}^{m,g}(phi, phi2) e^{j n (phi + phi2)}]_{n=0..N-1}.
/// Callers pass phi2 = phi; harmonic candidates are dismissed.
Eigen::VectorXcd aoa_basis_d2(double phi, double phi2, const CsiTensor& y, int m, int g);

struct TrivialSolutionGuard {
    bool fired = false;
    double dispersion = 0.0;  // coefficient of variation across antennas
    std::string recommendation;
};

/// Fires when L = 1 and the per-antenna time-averaged CSI magnitudes are
/// nearly identical (the regime where phi = 0 is a spurious solution and the
/// joint single-path estimator should be used instead).
TrivialSolutionGuard trivial_solution_guard(const CsiTensor& y, int n_paths,
                                            double cov_threshold = 1e-3);

struct AoaEstimate {
    std::vector<double> phis;  // spatial frequencies, sorted by peak height
    std::vector<double> peak_heights;
    SpectrumTrace trace;       // grid = phi candidates
    TrivialSolutionGuard guard;
    int numerical_rank = 0;
    double tol_used = 0.0;
};

AoaEstimate music_aoa(const SpatialManifold& manifold, const CsiTensor& y, int n_paths,
                      const AoaConfig& cfg);

/// Arrival angle for a spatial frequency (clamped to the visible region).
double theta_from_phi(double phi, const SystemConfig& cfg);

void write_aoa_spectrum_csv(const SpectrumTrace& trace, const SystemConfig& cfg,
                            const std::string& path);

}  // namespace csisense
