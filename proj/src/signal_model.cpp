#include "csisense/signal_model.hpp"

#include <cstring>
#include <fstream>
#include <json.hpp>

#include "csisense/rng.hpp"

namespace csisense {

OffsetModel::Kind OffsetModel::parse_kind(const std::string& name) {
    if (name == "zero") return Kind::Zero;
    if (name == "iid-uniform") return Kind::IidUniform;
    if (name == "random-walk") return Kind::RandomWalk;
    throw ConfigError("unknown offset model '" + name + "'");
}

OffsetTrace generate_offsets(const OffsetModel& model, int packets, std::uint64_t seed) {
    if (packets <= 0) throw ConfigError("generate_offsets: packets must be positive");
    OffsetTrace t = OffsetTrace::zeros(packets);
    Rng rng(seed);
    switch (model.kind) {
        case OffsetModel::Kind::Zero:
            break;
        case OffsetModel::Kind::IidUniform:
            for (int m = 0; m < packets; ++m) {
                t.timing[m] = rng.uniform(model.timing_lo, model.timing_hi);
                t.cfo[m] = rng.uniform(model.cfo_lo, model.cfo_hi);
            }
            break;
        case OffsetModel::Kind::RandomWalk: {
            double tau = 0.0, f = 0.0;
            for (int m = 0; m < packets; ++m) {
                t.timing[m] = tau;
                t.cfo[m] = f;
                tau += rng.uniform(-model.timing_step, model.timing_step);
                f += rng.uniform(-model.cfo_step, model.cfo_step);
            }
            break;
        }
    }
    return t;
}

Eigen::MatrixXcd static_component(const PathSet& paths, const SystemConfig& cfg) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(cfg.subcarrier_count, cfg.antenna_count);
    for (const auto& p : paths.static_) {
        for (int g = 0; g < cfg.subcarrier_count; ++g) {
            const cplx delay_ph =
                std::polar(1.0, -2.0 * kPi * (g / cfg.symbol_duration) * p.delay);
            for (int n = 0; n < cfg.antenna_count; ++n)
                s(g, n) += p.gain * std::polar(1.0, n * p.spatial_freq) * delay_ph;
        }
    }
    return s;
}

Eigen::MatrixXcd dynamic_component(const PathSet& paths, const SystemConfig& cfg, int m) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(cfg.subcarrier_count, cfg.antenna_count);
    for (const auto& p : paths.dynamic) {
        const cplx dop_ph = std::polar(1.0, 2.0 * kPi * m * cfg.packet_interval * p.doppler);
        for (int g = 0; g < cfg.subcarrier_count; ++g) {
            const cplx delay_ph =
                std::polar(1.0, -2.0 * kPi * (g / cfg.symbol_duration) * p.delay);
            for (int n = 0; n < cfg.antenna_count; ++n)
                d(g, n) += p.gain * std::polar(1.0, n * p.spatial_freq) * dop_ph * delay_ph;
        }
    }
    return d;
}

CsiTensor synthesize_csi(const SystemConfig& cfg, const PathSet& paths,
                         const OffsetTrace& offsets,
                         std::optional<std::uint64_t> noise_seed) {
    SystemConfig c = cfg;
    c.validate();
    paths.validate(c);
    offsets.validate(c.packet_count);

    const int M = c.packet_count, G = c.subcarrier_count, N = c.antenna_count;
    std::vector<cplx> y(static_cast<size_t>(M) * G * N);
    const Eigen::MatrixXcd s = static_component(paths, c);

    size_t k = 0;
    double power_acc = 0.0;
    for (int m = 0; m < M; ++m) {
        const Eigen::MatrixXcd d = dynamic_component(paths, c, m);
        const double cfo_phase = 2.0 * kPi * m * c.packet_interval * offsets.cfo[m];
        for (int g = 0; g < G; ++g) {
            const cplx off = std::polar(1.0, cfo_phase) *
                             std::polar(1.0, -2.0 * kPi * (g / c.symbol_duration) *
                                                 offsets.timing[m]);
            for (int n = 0; n < N; ++n, ++k) {
                y[k] = (d(g, n) + s(g, n)) * off;
                power_acc += std::norm(y[k]);
            }
        }
    }

    if (c.snr_db.has_value()) {
        const double mean_power = power_acc / static_cast<double>(y.size());
        const double sigma2 = mean_power / std::pow(10.0, *c.snr_db / 10.0);
        const double scale = std::sqrt(sigma2 / 2.0);
        Rng rng(noise_seed.value_or(0));
        for (auto& v : y) v += cplx(scale * rng.normal(), scale * rng.normal());
    }
    return CsiTensor(c, std::move(y));
}

// --------------------------------------------------------------------------
// I/O

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'T'};
constexpr std::uint8_t kVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw FormatError("csit: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_csit(const CsiTensor& tensor, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os.write(kMagic, 4);
    os.put(static_cast<char>(kVersion));
    put_u64(os, static_cast<std::uint64_t>(tensor.packets()));
    put_u64(os, static_cast<std::uint64_t>(tensor.subcarriers()));
    put_u64(os, static_cast<std::uint64_t>(tensor.antennas()));
    for (const auto& v : tensor.raw()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    if (!os) throw FormatError("write failed: " + path);
}

CsiTensor read_csit(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("csit: bad magic bytes in " + path);
    const int version = is.get();
    if (version != kVersion)
        throw FormatError("csit: unsupported version " + std::to_string(version));
    const auto m = get_u64(is), g = get_u64(is), n = get_u64(is);
    if (m == 0 || g == 0 || n == 0 || m > (1u << 24) || g > (1u << 24) || n > (1u << 16))
        throw FormatError("csit: implausible dimensions");
    // Sidecar carries the full config; the container alone yields a minimal one.
    SystemConfig cfg;
    cfg.packet_count = static_cast<int>(m);
    cfg.subcarrier_count = static_cast<int>(g);
    cfg.antenna_count = static_cast<int>(n);
    cfg.taylor_window = std::min(30, cfg.packet_count - 1);
    cfg.finalize();
    std::vector<cplx> data(static_cast<size_t>(m) * g * n);
    for (auto& v : data) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        v = cplx(re, im);
    }
    return CsiTensor(cfg, std::move(data));
}

namespace {

nlohmann::json config_to_json(const SystemConfig& c) {
    nlohmann::json j{{"antenna_count", c.antenna_count},
                     {"subcarrier_count", c.subcarrier_count},
                     {"symbol_duration_s", c.symbol_duration},
                     {"cp_duration_s", c.cp_duration},
                     {"packet_interval_s", c.packet_interval},
                     {"carrier_freq_hz", c.carrier_freq},
                     {"antenna_spacing_m", c.antenna_spacing},
                     {"wavelength_m", c.wavelength},
                     {"packet_count", c.packet_count},
                     {"taylor_window", c.taylor_window}};
    if (c.snr_db.has_value()) j["snr_db"] = *c.snr_db;
    return j;
}

SystemConfig config_from_json(const nlohmann::json& j) {
    SystemConfig c;
    c.antenna_count = j.at("antenna_count").get<int>();
    c.subcarrier_count = j.at("subcarrier_count").get<int>();
    c.symbol_duration = j.at("symbol_duration_s").get<double>();
    c.cp_duration = j.at("cp_duration_s").get<double>();
    c.packet_interval = j.at("packet_interval_s").get<double>();
    c.carrier_freq = j.at("carrier_freq_hz").get<double>();
    c.antenna_spacing = j.value("antenna_spacing_m", 0.0);
    c.wavelength = j.value("wavelength_m", 0.0);
    c.packet_count = j.at("packet_count").get<int>();
    c.taylor_window = j.at("taylor_window").get<int>();
    if (j.contains("snr_db") && !j.at("snr_db").is_null())
        c.snr_db = j.at("snr_db").get<double>();
    c.finalize();
    return c;
}

}  // namespace

void write_sidecar(const SystemConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << config_to_json(cfg).dump(2) << "\n";
}

SystemConfig read_sidecar(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open: " + path);
    nlohmann::json j;
    try {
        is >> j;
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("sidecar parse error in " + path + ": " + e.what());
    }
}

void write_csv(const CsiTensor& tensor, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << "m,g,n,re,im\n";
    os.precision(17);
    for (int m = 0; m < tensor.packets(); ++m)
        for (int g = 0; g < tensor.subcarriers(); ++g)
            for (int n = 0; n < tensor.antennas(); ++n) {
                const cplx& v = tensor.at(m, g, n);
                os << m << ',' << g << ',' << n << ',' << v.real() << ',' << v.imag()
                   << '\n';
            }
}

}  // namespace csisense
