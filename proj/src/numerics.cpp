#include "csisense/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace csisense {

NullSpaceResult null_space(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) throw ConfigError("null_space: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU);
    NullSpaceResult out;
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
    if (smax == 0.0) {
        out.numerical_rank = 0;
        out.basis = Eigen::MatrixXcd::Identity(m.rows(), m.rows());
        return out;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
        if (out.singular_values(i) >= rel_tol * smax) ++rank;
    out.numerical_rank = rank;
    out.basis = svd.matrixU().rightCols(m.rows() - rank);
    return out;
}

double noise_adaptive_tol(const Eigen::VectorXd& s, double rel_tol) {
    if (s.size() == 0 || s(0) == 0.0) return rel_tol;
    const Eigen::Index k = s.size();
    const Eigen::Index tail_start = (3 * k) / 4;
    std::vector<double> tail;
    for (Eigen::Index i = tail_start; i < k; ++i) tail.push_back(s(i));
    if (tail.empty()) return rel_tol;
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    const double floor = tail[tail.size() / 2];
    return std::max(rel_tol, 3.0 * floor / s(0));
}

PinvSolveResult pinv_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                           double rel_tol) {
    if (a.rows() != b.size()) throw ConfigError("pinv_solve: dimension mismatch");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    PinvSolveResult out;
    const double smax = s.size() ? s(0) : 0.0;
    const Eigen::Index kmax = std::min(a.rows(), a.cols());
    Eigen::VectorXcd y = svd.matrixU().adjoint() * b;
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(s.size());
    int rank = 0;
    double smin = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (smax > 0.0 && s(i) >= rel_tol * smax) {
            z(i) = y(i) / s(i);
            smin = s(i);
            ++rank;
        }
    }
    out.x = svd.matrixV() * z;
    out.residual = (a * out.x - b).norm();
    out.rank_deficient = rank < kmax;
    out.cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    return out;
}

std::vector<Peak> find_peaks(const std::vector<double>& values,
                             const std::vector<double>& grid, int count) {
    if (values.size() != grid.size() || values.size() < 3)
        throw ConfigError("find_peaks: values/grid must have equal length >= 3");
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (!(values[i] > values[i - 1] && values[i] > values[i + 1])) continue;
        // quadratic through the three neighbouring samples
        const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
        const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
        const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
        Peak p{x1, values[i]};
        if (den != 0.0) {
            const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
            const double b =
                (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
            if (a < 0.0) {
                double xv = -b / (2.0 * a);
                xv = std::clamp(xv, x0, x2);
                const double c = y1 - a * x1 * x1 - b * x1;
                p.location = xv;
                p.height = a * xv * xv + b * xv + c;
            }
        }
        peaks.push_back(p);
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& l, const Peak& r) { return l.height > r.height; });
    if (static_cast<int>(peaks.size()) < count)
        throw InsufficientPeaksError(
            "find_peaks: found " + std::to_string(peaks.size()) + " local maxima, need " +
                std::to_string(count),
            static_cast<int>(peaks.size()));
    peaks.resize(static_cast<std::size_t>(count));
    return peaks;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers =
        std::min<std::size_t>(n, jobs > 0 ? static_cast<unsigned>(jobs) : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace csisense
