// Frequency-domain synthesis of the asynchronous uplink multipath channel,
// offset-trace generation, and tensor container I/O.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "csisense/types.hpp"

namespace csisense {

struct OffsetModel {
    enum class Kind { Zero, IidUniform, RandomWalk };
    Kind kind = Kind::Zero;
    // iid-uniform bounds
    double timing_lo = 0.0, timing_hi = 0.0;   // [s]
    double cfo_lo = 0.0, cfo_hi = 0.0;         // [Hz]
    // random-walk per-packet step bounds (walk starts at 0)
    double timing_step = 0.0;                  // [s]
    double cfo_step = 0.0;                     // [Hz]

    static OffsetModel zero() { return OffsetModel{}; }
    static OffsetModel iid_uniform(double t_lo, double t_hi, double f_lo, double f_hi) {
        OffsetModel m;
        m.kind = Kind::IidUniform;
        m.timing_lo = t_lo; m.timing_hi = t_hi;
        m.cfo_lo = f_lo; m.cfo_hi = f_hi;
        return m;
    }
    static OffsetModel random_walk(double t_step, double f_step) {
        OffsetModel m;
        m.kind = Kind::RandomWalk;
        m.timing_step = t_step; m.cfo_step = f_step;
        return m;
    }
    static Kind parse_kind(const std::string& name);
};

OffsetTrace generate_offsets(const OffsetModel& model, int packets, std::uint64_t seed);

/// y_n[m,g] = (D_n[m,g] + S_n[g]) e^{j2pi m T_A f_O[m]} e^{-j2pi (g/T) tau_O[m]} + w.
/// Noise w is zero-mean circular complex Gaussian with variance set from
/// snr_db relative to the mean per-sample noiseless power; absent snr_db
/// means w = 0. Deterministic for a given seed.
CsiTensor synthesize_csi(const SystemConfig& cfg, const PathSet& paths,
                         const OffsetTrace& offsets,
                         std::optional<std::uint64_t> noise_seed = std::nullopt);

/// Static component S_n[g] (no offsets, no noise), G x N.
Eigen::MatrixXcd static_component(const PathSet& paths, const SystemConfig& cfg);

/// Dynamic component D_n[m,g] at one packet, G x N.
Eigen::MatrixXcd dynamic_component(const PathSet& paths, const SystemConfig& cfg, int m);

// --------------------------------------------------------------------------
// Container I/O. Binary layout: magic "CSIT", one version byte, dims M,G,N as
// little-endian u64, then row-major (m, then g, then n) complex pairs of
// 64-bit floats. A JSON sidecar carries the SystemConfig.

void write_csit(const CsiTensor& tensor, const std::string& path);
CsiTensor read_csit(const std::string& path);

void write_sidecar(const SystemConfig& cfg, const std::string& path);
SystemConfig read_sidecar(const std::string& path);

/// CSV export with columns m,g,n,re,im.
void write_csv(const CsiTensor& tensor, const std::string& path);

}  // namespace csisense
