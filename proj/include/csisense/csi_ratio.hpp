// CSI ratios, D-CSIR samples, Taylor-series derivative kernels of the ratio,
// and convergence diagnostics.
//
// The ratio between two antennas of one receiver cancels the transmitter's
// timing and carrier-frequency offsets. Its Taylor expansion in the dynamic
// path variables z_l turns the nonlinear ratio into linear forms the
// estimators can search over. The derivative kernels returned here are the
// offset-free factors h, H, f^(k); the unknown offset phasors fold into the
// latent amplitudes z~_l exactly as the estimators consume them.
#pragma once

#include <span>

#include "csisense/types.hpp"

namespace csisense {

inline constexpr double kDefaultDenomFloorRel = 1e-12;

/// xi_{n,n-q}[m,g] = y_n[m,g] / y_{n-q}[m,g]. Throws
/// DegenerateDenominatorError when |y_{n-q}| < floor_rel * tensor RMS.
cplx csi_ratio(const CsiTensor& y, int n, int q, int m, int g,
               double floor_rel = kDefaultDenomFloorRel);

/// psi_{n,q}[m,p,g] = xi_{n,n-q}[m+p,g] - xi_{n,n-q}[m,g].
cplx d_csir(const CsiTensor& y, int n, int q, int m, int p, int g,
            double floor_rel = kDefaultDenomFloorRel);

/// First-order kernel h_{n,q}^{m,g}(phi) = (y_{n-q} - e^{-jq phi} y_n) / y_{n-q}^2.
cplx taylor_deriv_1(const CsiTensor& y, int n, int q, int m, int g, double phi,
                    double floor_rel = kDefaultDenomFloorRel);

/// Second-order kernel H_{n,q}^{m,g}(phi1, phi2)
///   = 2 e^{-jq(phi1+phi2)} y_n / y_{n-q}^3 - (e^{-jq phi1} + e^{-jq phi2}) / y_{n-q}^2.
cplx taylor_deriv_2(const CsiTensor& y, int n, int q, int m, int g, double phi1,
                    double phi2, double floor_rel = kDefaultDenomFloorRel);

/// Generalized k-th kernel,
///   (-1)^k [k! e^{-jq sum(phi)} y_n
///           - (k-1)! sum_i e^{-jq (sum(phi)-phi_i)} y_{n-q}] / y_{n-q}^{k+1}.
/// Specializes to taylor_deriv_1 and taylor_deriv_2 at k = 1, 2.
cplx taylor_deriv_k(const CsiTensor& y, int n, int q, int m, int g,
                    std::span<const double> phis,
                    double floor_rel = kDefaultDenomFloorRel);

/// |y_{n-q}[m,g]| - 2 L max_l |alpha_l| over the dynamic paths; positive
/// means the sufficient convergence condition of the Taylor series holds.
double convergence_margin(const CsiTensor& y, const PathSet& paths, int n, int q,
                          int m, int g);

struct TaylorDiagnostics {
    double error_proportion = 0.0;       // e_Tay(p), mean over counted terms
    double convergence_probability = 1.0;
    double divergent_fraction = 0.0;
};

/// Error proportion of the order-1+2 truncated Taylor reconstruction of the
/// D-CSIR at lag p against ground truth, averaged over antenna pairs
/// (n, n-1), packets, and subcarriers. Second-order cross (harmonic) terms
/// count as error. Terms with normalized squared remainder >= 1 are excluded
/// and reported as divergent_fraction. Requires the true paths (and the
/// offsets the tensor was synthesized with, zeros by default).
TaylorDiagnostics error_proportion(const CsiTensor& y, const PathSet& paths, int p,
                                   const OffsetTrace* offsets = nullptr,
                                   double floor_rel = kDefaultDenomFloorRel);

}  // namespace csisense
