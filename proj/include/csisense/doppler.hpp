// Doppler recovery from stacked D-CSIR samples: truncated-Taylor basis
// vectors and a MUSIC grid search with zero-frequency suppression.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "csisense/types.hpp"

namespace csisense {

struct SpectrumTrace {
    std::vector<double> grid;    // candidate parameter values
    std::vector<double> values;  // pseudo-spectrum
};

struct DopplerConfig {
    std::vector<double> grid;   // candidate frequencies [Hz], 0 excluded
    int taylor_orders = 2;      // J
    double rank_tol = 1e-3;     // relative singular-value threshold
    bool adaptive_tol = false;  // raise tolerance onto an estimated noise floor
    double zero_guard_hz = 0.0; // 0 -> one grid step; candidates closer to an
                                // alias of 0 raise ZeroBasisError
    int n = 1, q = 1, g = 0;    // stacking indices

    /// Uniform grid of `points` candidates over [lo, hi] with 0 removed.
    static std::vector<double> make_grid(double lo = -300.0, double hi = 300.0,
                                         int points = 601);
    static DopplerConfig defaults();

    double grid_step() const;
};

/// Normalized first-order basis ([e^{j2pi T_A f}, ..., e^{j2pi P T_A f}]^T - 1).
/// Throws ZeroBasisError when f is within min_offset_hz of an alias of zero
/// (where the unnormalized vector vanishes).
Eigen::VectorXcd doppler_basis_b1(double f, int P, double T_A,
                                  double min_offset_hz = 0.0);

/// Normalized element-wise product of the two unnormalized first-order vectors.
Eigen::VectorXcd doppler_basis_b2(double f, double f2, int P, double T_A,
                                  double min_offset_hz = 0.0);

struct StackedDcsir {
    Eigen::MatrixXcd mat;  // P x (M-P); column m is [psi(m,1), ..., psi(m,P)]^T
    int n = 1, q = 1, g = 0;
    double packet_interval = 1e-3;  // T_A of the source tensor
};

StackedDcsir stack_dcsir(const CsiTensor& y, const DopplerConfig& cfg);

struct DopplerEstimate {
    std::vector<double> freqs_hz;    // sorted by peak height, descending
    std::vector<double> peak_heights;
    SpectrumTrace trace;
    int numerical_rank = 0;
    double tol_used = 0.0;
};

/// MUSIC search: null space of the stack from its left singular vectors,
/// spectrum 1 / ||[b1(f), b2(f,f)]^H N_P||_F^2 over the grid, top L local
/// maxima returned. Throws RankDeficiencyError when the stack has no null
/// space and InsufficientPeaksError when fewer than L peaks exist.
DopplerEstimate music_doppler(const StackedDcsir& stack, const DopplerConfig& cfg,
                              int n_paths);

void write_spectrum_csv(const SpectrumTrace& trace, const std::string& path,
                        const std::string& x_name = "f_hz");

}  // namespace csisense
