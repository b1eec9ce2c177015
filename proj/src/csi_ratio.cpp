#include "csisense/csi_ratio.hpp"

#include <cmath>
#include <cstdint>

namespace csisense {

namespace {

void check_pair(const CsiTensor& y, int n, int q, int m, int g) {
    if (n < 0 || n >= y.antennas()) throw ConfigError("antenna index n out of range");
    const int nq = n - q;
    if (nq < 0 || nq >= y.antennas())
        throw ConfigError("antenna index n-q out of range");
    if (m < 0 || m >= y.packets()) throw ConfigError("packet index out of range");
    if (g < 0 || g >= y.subcarriers()) throw ConfigError("subcarrier index out of range");
}

cplx denom(const CsiTensor& y, int n, int q, int m, int g, double floor_rel) {
    const cplx d = y.at(m, g, n - q);
    if (std::abs(d) < floor_rel * y.rms())
        throw DegenerateDenominatorError("csi_ratio: |y_{n-q}| below floor at m=" +
                                         std::to_string(m) + " g=" + std::to_string(g));
    return d;
}

}  // namespace

cplx csi_ratio(const CsiTensor& y, int n, int q, int m, int g, double floor_rel) {
    check_pair(y, n, q, m, g);
    return y.at(m, g, n) / denom(y, n, q, m, g, floor_rel);
}

cplx d_csir(const CsiTensor& y, int n, int q, int m, int p, int g, double floor_rel) {
    if (p < 0 || m + p >= y.packets()) throw ConfigError("d_csir: m+p out of range");
    if (p == 0) return cplx(0.0, 0.0);
    return csi_ratio(y, n, q, m + p, g, floor_rel) - csi_ratio(y, n, q, m, g, floor_rel);
}

cplx taylor_deriv_1(const CsiTensor& y, int n, int q, int m, int g, double phi,
                    double floor_rel) {
    check_pair(y, n, q, m, g);
    const cplx yn = y.at(m, g, n);
    const cplx ynq = denom(y, n, q, m, g, floor_rel);
    return (ynq - std::polar(1.0, -q * phi) * yn) / (ynq * ynq);
}

cplx taylor_deriv_2(const CsiTensor& y, int n, int q, int m, int g, double phi1,
                    double phi2, double floor_rel) {
    check_pair(y, n, q, m, g);
    const cplx yn = y.at(m, g, n);
    const cplx ynq = denom(y, n, q, m, g, floor_rel);
    const cplx e1 = std::polar(1.0, -q * phi1);
    const cplx e2 = std::polar(1.0, -q * phi2);
    return 2.0 * e1 * e2 * yn / (ynq * ynq * ynq) - (e1 + e2) / (ynq * ynq);
}

cplx taylor_deriv_k(const CsiTensor& y, int n, int q, int m, int g,
                    std::span<const double> phis, double floor_rel) {
    const int k = static_cast<int>(phis.size());
    if (k < 1) throw ConfigError("taylor_deriv_k: order must be >= 1");
    check_pair(y, n, q, m, g);
    const cplx yn = y.at(m, g, n);
    const cplx ynq = denom(y, n, q, m, g, floor_rel);

    double sum_phi = 0.0;
    for (double phi : phis) sum_phi += phi;
    double fact_k = 1.0, fact_km1 = 1.0;
    for (int i = 2; i <= k; ++i) fact_k *= i;
    for (int i = 2; i <= k - 1; ++i) fact_km1 *= i;

    cplx cross(0.0, 0.0);
    for (int i = 0; i < k; ++i)
        cross += std::polar(1.0, -q * (sum_phi - phis[i]));

    cplx den = ynq;
    for (int i = 0; i < k; ++i) den *= ynq;  // ynq^{k+1}
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign *
           (fact_k * std::polar(1.0, -q * sum_phi) * yn - fact_km1 * cross * ynq) / den;
}

double convergence_margin(const CsiTensor& y, const PathSet& paths, int n, int q, int m,
                          int g) {
    check_pair(y, n, q, m, g);
    double max_gain = 0.0;
    for (const auto& p : paths.dynamic) max_gain = std::max(max_gain, std::abs(p.gain));
    const double L = static_cast<double>(paths.dynamic.size());
    return std::abs(y.at(m, g, n - q)) - 2.0 * L * max_gain;
}

TaylorDiagnostics error_proportion(const CsiTensor& y, const PathSet& paths, int p,
                                   const OffsetTrace* offsets, double floor_rel) {
    const SystemConfig& cfg = y.config();
    if (p < 1 || p >= cfg.packet_count) throw ConfigError("error_proportion: bad lag p");
    const int q = 1;
    const std::size_t L = paths.dynamic.size();

    double acc = 0.0;
    std::int64_t counted = 0, divergent = 0;
    for (int n = 1; n < cfg.antenna_count; ++n) {
        for (int m = 0; m + p < cfg.packet_count; ++m) {
            // offset phasor folded into the latent amplitudes z~_l
            cplx off_m(1.0, 0.0);
            double cfo_phase = 0.0, to_per_g = 0.0;
            if (offsets) {
                cfo_phase = 2.0 * kPi * m * cfg.packet_interval * offsets->cfo[m];
                to_per_g = -2.0 * kPi * offsets->timing[m] / cfg.symbol_duration;
            }
            for (int g = 0; g < cfg.subcarrier_count; ++g) {
                const cplx xi_mp = csi_ratio(y, n, q, m + p, g, floor_rel);
                const cplx psi_true = xi_mp - csi_ratio(y, n, q, m, g, floor_rel);
                off_m = std::polar(1.0, cfo_phase + to_per_g * g);

                cplx recon(0.0, 0.0);
                if (L > 0) {
                    const cplx yn = y.at(m, g, n);
                    const cplx ynq = y.at(m, g, n - q);
                    for (const auto& path : paths.dynamic) {
                        const cplx zt =
                            path.gain * std::polar(1.0, n * path.spatial_freq) *
                            std::polar(1.0, 2.0 * kPi * m * cfg.packet_interval *
                                                path.doppler) *
                            std::polar(1.0, -2.0 * kPi * (g / cfg.symbol_duration) *
                                                path.delay) *
                            off_m;
                        const cplx growth =
                            std::polar(1.0, 2.0 * kPi * p * cfg.packet_interval *
                                                path.doppler) -
                            1.0;
                        const cplx dz = zt * growth;
                        const cplx eq = std::polar(1.0, -q * path.spatial_freq);
                        const cplx h = (ynq - eq * yn) / (ynq * ynq);
                        const cplx H =
                            2.0 * eq * eq * yn / (ynq * ynq * ynq) - 2.0 * eq / (ynq * ynq);
                        recon += h * dz + 0.5 * H * dz * dz;
                    }
                }
                const double err = std::norm(psi_true - recon) / std::norm(xi_mp);
                if (err < 1.0) {
                    acc += err;
                    ++counted;
                } else {
                    ++divergent;
                }
            }
        }
    }
    TaylorDiagnostics out;
    const std::int64_t total = counted + divergent;
    out.error_proportion = counted > 0 ? acc / static_cast<double>(counted) : 0.0;
    out.divergent_fraction =
        total > 0 ? static_cast<double>(divergent) / static_cast<double>(total) : 0.0;
    out.convergence_probability = 1.0 - out.divergent_fraction;
    return out;
}

}  // namespace csisense
