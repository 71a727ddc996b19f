#include "detail/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace entlab::detail {

namespace {
constexpr double kUnderflow = 1e-300;
}

double entropy_of(std::span<const double> f, double step) {
    const std::size_t n = f.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] > kUnderflow) {
            sum -= trap_weight(i, n) * f[i] * std::log(f[i]);
        }
    }
    return sum * step;
}

std::vector<double> masked_score(std::span<const double> f, double step, double floor,
                                 std::vector<bool>& mask) {
    const std::size_t n = f.size();
    const double cut = floor * *std::max_element(f.begin(), f.end());
    mask.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        mask[i] = f[i] >= cut && f[i] > 0.0;
    }
    std::vector<double> r = log_derivative4(f, step);
    r.front() = 0.0;
    r.back() = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) {
            r[i] = 0.0;
        }
    }
    return r;
}

std::vector<double> log_derivative4(std::span<const double> f, double step) {
    const std::size_t n = f.size();
    std::vector<double> lf(n);
    std::vector<bool> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        ok[i] = f[i] > kUnderflow;
        lf[i] = ok[i] ? std::log(f[i]) : 0.0;
    }
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!ok[i]) continue;
        if (i >= 2 && i + 2 < n && ok[i - 2] && ok[i - 1] && ok[i + 1] && ok[i + 2]) {
            r[i] = (lf[i - 2] - 8.0 * lf[i - 1] + 8.0 * lf[i + 1] - lf[i + 2]) / (12.0 * step);
        } else if (ok[i - 1] && ok[i + 1]) {
            r[i] = (lf[i + 1] - lf[i - 1]) / (2.0 * step);
        } else if (ok[i - 1]) {
            r[i] = (lf[i] - lf[i - 1]) / step;
        } else if (ok[i + 1]) {
            r[i] = (lf[i + 1] - lf[i]) / step;
        }
    }
    return r;
}

double fisher_of(std::span<const double> f, double step, double floor) {
    std::vector<bool> mask;
    const auto r = masked_score(f, step, floor, mask);
    const std::size_t n = f.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i]) {
            sum += trap_weight(i, n) * f[i] * r[i] * r[i];
        }
    }
    return sum * step;
}

}  // namespace entlab::detail
