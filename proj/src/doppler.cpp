#include "csisense/doppler.hpp"

#include <cmath>
#include <fstream>

#include "csisense/csi_ratio.hpp"
#include "csisense/numerics.hpp"

namespace csisense {

std::vector<double> DopplerConfig::make_grid(double lo, double hi, int points) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = lo + (hi - lo) * i / (points - 1);
        if (f != 0.0) grid.push_back(f);
    }
    return grid;
}

DopplerConfig DopplerConfig::defaults() {
    DopplerConfig c;
    c.grid = make_grid();
    return c;
}

double DopplerConfig::grid_step() const {
    if (grid.size() < 2) return 0.0;
    double step = std::abs(grid[1] - grid[0]);
    for (size_t i = 2; i < grid.size(); ++i)
        step = std::min(step, std::abs(grid[i] - grid[i - 1]));
    return step;
}

namespace {

Eigen::VectorXcd unnormalized_b1(double f, int P, double T_A) {
    Eigen::VectorXcd v(P);
    for (int p = 1; p <= P; ++p)
        v(p - 1) = std::polar(1.0, 2.0 * kPi * p * T_A * f) - 1.0;
    return v;
}

void check_alias(double f, double T_A, double min_offset_hz) {
    // The unnormalized vector vanishes exactly when f*T_A is an integer.
    if (min_offset_hz <= 0.0) return;
    const double cycles = f * T_A;
    const double dist = std::abs(cycles - std::round(cycles)) / T_A;
    if (dist < min_offset_hz)
        throw ZeroBasisError("doppler basis vanishes near f=" + std::to_string(f) +
                             " Hz (alias of 0)");
}

}  // namespace

Eigen::VectorXcd doppler_basis_b1(double f, int P, double T_A, double min_offset_hz) {
    if (P < 1) throw ConfigError("doppler_basis_b1: P must be >= 1");
    check_alias(f, T_A, min_offset_hz);
    Eigen::VectorXcd v = unnormalized_b1(f, P, T_A);
    const double nrm = v.norm();
    if (nrm < 1e-12)
        throw ZeroBasisError("doppler basis numerically zero at f=" + std::to_string(f));
    return v / nrm;
}

Eigen::VectorXcd doppler_basis_b2(double f, double f2, int P, double T_A,
                                  double min_offset_hz) {
    if (P < 1) throw ConfigError("doppler_basis_b2: P must be >= 1");
    check_alias(f, T_A, min_offset_hz);
    check_alias(f2, T_A, min_offset_hz);
    Eigen::VectorXcd v =
        unnormalized_b1(f, P, T_A).cwiseProduct(unnormalized_b1(f2, P, T_A));
    const double nrm = v.norm();
    if (nrm < 1e-12)
        throw ZeroBasisError("doppler basis numerically zero at f=" + std::to_string(f));
    return v / nrm;
}

StackedDcsir stack_dcsir(const CsiTensor& y, const DopplerConfig& cfg) {
    const int M = y.packets();
    const int P = y.config().taylor_window;
    if (M <= P) throw ConfigError("stack_dcsir: packet count must exceed window P");
    StackedDcsir out;
    out.n = cfg.n;
    out.q = cfg.q;
    out.g = cfg.g;
    out.packet_interval = y.config().packet_interval;
    out.mat.resize(P, M - P);
    for (int m = 0; m < M - P; ++m) {
        const cplx base = csi_ratio(y, cfg.n, cfg.q, m, cfg.g);
        for (int p = 1; p <= P; ++p)
            out.mat(p - 1, m) = csi_ratio(y, cfg.n, cfg.q, m + p, cfg.g) - base;
    }
    return out;
}

DopplerEstimate music_doppler(const StackedDcsir& stack, const DopplerConfig& cfg,
                              int n_paths) {
    if (n_paths < 1) throw ConfigError("music_doppler: need L >= 1");
    if (cfg.grid.empty()) throw ConfigError("music_doppler: empty grid");
    const int P = static_cast<int>(stack.mat.rows());
    if (cfg.taylor_orders * n_paths > P)
        throw ConfigError("music_doppler: J*L exceeds window P");
    for (double f : cfg.grid)
        if (f == 0.0) throw ConfigError("music_doppler: grid must exclude 0");

    NullSpaceResult ns = null_space(stack.mat, cfg.rank_tol);
    double tol = cfg.rank_tol;
    if (cfg.adaptive_tol) {
        tol = noise_adaptive_tol(ns.singular_values, cfg.rank_tol);
        if (tol > cfg.rank_tol) ns = null_space(stack.mat, tol);
    }
    if (ns.basis.cols() == 0)
        throw RankDeficiencyError(
            "music_doppler: stack has full rank; increase P or reduce grid");

    DopplerEstimate out;
    out.numerical_rank = ns.numerical_rank;
    out.tol_used = tol;
    out.trace.grid = cfg.grid;
    out.trace.values.resize(cfg.grid.size());
    const double guard = cfg.zero_guard_hz > 0.0 ? cfg.zero_guard_hz : cfg.grid_step();
    for (size_t i = 0; i < cfg.grid.size(); ++i) {
        const double f = cfg.grid[i];
        const Eigen::VectorXcd b1 = doppler_basis_b1(f, P, stack.packet_interval, guard);
        const Eigen::VectorXcd b2 = doppler_basis_b2(f, f, P, stack.packet_interval, guard);
        const double denom = (b1.adjoint() * ns.basis).squaredNorm() +
                             (b2.adjoint() * ns.basis).squaredNorm();
        out.trace.values[i] = 1.0 / denom;
    }
    const auto peaks = find_peaks(out.trace.values, out.trace.grid, n_paths);
    for (const auto& p : peaks) {
        out.freqs_hz.push_back(p.location);
        out.peak_heights.push_back(p.height);
    }
    return out;
}

void write_spectrum_csv(const SpectrumTrace& trace, const std::string& path,
                        const std::string& x_name) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << x_name << ",spectrum_value\n";
    os.precision(17);
    for (size_t i = 0; i < trace.grid.size(); ++i)
        os << trace.grid[i] << ',' << trace.values[i] << '\n';
}

}  // namespace csisense
