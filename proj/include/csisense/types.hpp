// Core domain types for the uplink CSI-ratio sensing toolkit.
#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csisense {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateDenominatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroBasisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficiencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientPeaksError : std::runtime_error {
    InsufficientPeaksError(const std::string& msg, int found_count)
        : std::runtime_error(msg), found(found_count) {}
    int found;
};

struct IllConditionedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// System configuration

/// Physical, array, and frame constants of the uplink OFDM sensing setup.
struct SystemConfig {
    int antenna_count = 8;          // N, uniform linear array
    int subcarrier_count = 64;      // G
    double symbol_duration = 1e-6;  // T [s], subcarrier spacing is 1/T
    double cp_duration = 0.3e-6;    // T_C [s]
    double packet_interval = 1e-3;  // T_A [s], integer multiple of T
    double carrier_freq = 3e9;      // f_c [Hz]
    double antenna_spacing = 0.0;   // d [m]; 0 means lambda/2
    double wavelength = 0.0;        // lambda [m]; 0 means c/f_c
    int packet_count = 128;         // M
    int taylor_window = 30;         // P, D-CSIR packet lags used by estimators
    std::optional<double> snr_db;   // absent -> noiseless

    // Fills derived fields and checks invariants; throws ConfigError.
    void finalize() {
        if (carrier_freq <= 0.0) throw ConfigError("carrier_freq must be positive");
        if (wavelength == 0.0) wavelength = kSpeedOfLight / carrier_freq;
        if (antenna_spacing == 0.0) antenna_spacing = wavelength / 2.0;
        validate();
    }

    void validate() const {
        if (antenna_count < 2) throw ConfigError("antenna_count must be >= 2");
        if (subcarrier_count < 2) throw ConfigError("subcarrier_count must be >= 2");
        if (taylor_window < 1) throw ConfigError("taylor_window must be >= 1");
        if (packet_count <= taylor_window)
            throw ConfigError("packet_count must exceed taylor_window");
        if (symbol_duration <= 0.0 || packet_interval <= 0.0)
            throw ConfigError("durations must be positive");
        const double ratio = packet_interval / symbol_duration;
        if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio || ratio < 1.0)
            throw ConfigError("packet_interval must be a positive integer multiple of symbol_duration");
        if (wavelength <= 0.0) throw ConfigError("wavelength must be positive");
        const double lam = kSpeedOfLight / carrier_freq;
        if (std::abs(wavelength - lam) > 1e-9 * lam)
            throw ConfigError("wavelength inconsistent with carrier_freq");
        if (antenna_spacing <= 0.0) throw ConfigError("antenna_spacing must be positive");
    }
};

/// Per-element phase progression 2*pi*d/lambda*sin(theta) of a plane wave
/// across the array.
inline double spatial_frequency(double theta, double spacing, double wavelength) {
    if (wavelength <= 0.0) throw ConfigError("wavelength must be positive");
    return 2.0 * kPi * spacing / wavelength * std::sin(theta);
}

/// Array response [e^{j*0*phi}, ..., e^{j*(N-1)*phi}].
inline std::vector<cplx> steering_vector(double phi, int n_antennas) {
    if (n_antennas < 1) throw ConfigError("steering_vector needs N >= 1");
    std::vector<cplx> a(static_cast<size_t>(n_antennas));
    for (int n = 0; n < n_antennas; ++n)
        a[static_cast<size_t>(n)] = std::polar(1.0, n * phi);
    return a;
}

// ---------------------------------------------------------------------------
// Propagation paths

struct Path {
    cplx gain{1.0, 0.0};       // alpha
    double doppler = 0.0;      // f_D [Hz], zero for static paths
    double delay = 0.0;        // tau [s], in [0, T)
    double aoa = 0.0;          // theta [rad], in [-pi/2, pi/2]
    double spatial_freq = 0.0; // phi = 2*pi*d/lambda*sin(theta)

    static Path make(cplx gain, double doppler, double delay, double aoa,
                     const SystemConfig& cfg) {
        Path p;
        p.gain = gain;
        p.doppler = doppler;
        p.delay = delay;
        p.aoa = aoa;
        p.spatial_freq = spatial_frequency(aoa, cfg.antenna_spacing, cfg.wavelength);
        p.validate(cfg);
        return p;
    }

    void validate(const SystemConfig& cfg) const {
        if (delay < 0.0 || delay >= cfg.symbol_duration)
            throw ConfigError("path delay must lie in [0, T)");
        if (std::abs(aoa) > kPi / 2.0 + 1e-12)
            throw ConfigError("path AoA must lie in [-pi/2, pi/2]");
        const double phi = spatial_frequency(aoa, cfg.antenna_spacing, cfg.wavelength);
        if (std::abs(phi - spatial_freq) > 1e-12 * std::max(1.0, std::abs(phi)))
            throw ConfigError("path spatial_freq inconsistent with aoa");
    }
};

struct PathSet {
    std::vector<Path> dynamic;  // L paths, f_D != 0
    std::vector<Path> static_;  // L_S paths, f_D == 0

    void validate(const SystemConfig& cfg) const {
        if (static_.empty()) throw ConfigError("at least one static path required");
        for (const auto& p : static_) {
            p.validate(cfg);
            if (p.doppler != 0.0) throw ConfigError("static path with nonzero Doppler");
        }
        for (const auto& p : dynamic) {
            p.validate(cfg);
            if (p.doppler == 0.0) throw ConfigError("dynamic path with zero Doppler");
        }
    }
};

// Per-packet timing offset and carrier-frequency offset of the asynchronous
// transmitter clock.
struct OffsetTrace {
    std::vector<double> timing;  // tau_O[m] [s]
    std::vector<double> cfo;     // f_O[m] [Hz]

    static OffsetTrace zeros(int packets) {
        OffsetTrace t;
        t.timing.assign(static_cast<size_t>(packets), 0.0);
        t.cfo.assign(static_cast<size_t>(packets), 0.0);
        return t;
    }

    void validate(int packets) const {
        if (static_cast<int>(timing.size()) != packets ||
            static_cast<int>(cfo.size()) != packets)
            throw ConfigError("offset trace length must equal packet count");
    }
};

// ---------------------------------------------------------------------------
// Received frequency-domain samples y_n[m,g], immutable after synthesis.

class CsiTensor {
public:
    CsiTensor() = default;
    CsiTensor(SystemConfig cfg, std::vector<cplx> samples)
        : cfg_(std::move(cfg)), data_(std::move(samples)) {
        const size_t want = static_cast<size_t>(cfg_.packet_count) *
                            static_cast<size_t>(cfg_.subcarrier_count) *
                            static_cast<size_t>(cfg_.antenna_count);
        if (data_.size() != want)
            throw ConfigError("CsiTensor sample count does not match config dims");
        double acc = 0.0;
        for (const auto& v : data_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ConfigError("CsiTensor contains non-finite samples");
            acc += std::norm(v);
        }
        rms_ = std::sqrt(acc / static_cast<double>(data_.size()));
    }

    const SystemConfig& config() const { return cfg_; }
    int packets() const { return cfg_.packet_count; }
    int subcarriers() const { return cfg_.subcarrier_count; }
    int antennas() const { return cfg_.antenna_count; }
    double rms() const { return rms_; }

    // Storage is m-major, then g, then n.
    const cplx& at(int m, int g, int n) const {
        return data_[idx(m, g, n)];
    }
    const std::vector<cplx>& raw() const { return data_; }

private:
    size_t idx(int m, int g, int n) const {
        return (static_cast<size_t>(m) * cfg_.subcarrier_count + g) * cfg_.antenna_count + n;
    }

    SystemConfig cfg_;
    std::vector<cplx> data_;
    double rms_ = 0.0;
};

}  // namespace csisense
