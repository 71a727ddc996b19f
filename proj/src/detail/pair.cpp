#include "detail/pair.hpp"

#include <algorithm>
#include <cmath>

#include "detail/kernels.hpp"
#include "detail/resample.hpp"

namespace entlab::detail {

namespace {

std::vector<double> on_common_grid(const GridDensity& d, double start, double step, std::size_t n) {
    long offset = 0;
    std::vector<double> v(n, 0.0);
    if (grids_aligned(start, step, d.grid_start(), d.grid_step(), offset)) {
        for (std::size_t i = 0; i < n; ++i) {
            const long j = static_cast<long>(i) + offset;
            if (j >= 0 && j < static_cast<long>(d.size())) v[i] = d[static_cast<std::size_t>(j)];
        }
        return v;
    }
    const UniformInterpolant p(d.grid_start(), d.grid_step(), d.values());
    v = sample_affine(p, 1.0, 0.0, start, step, n);
    for (double& x : v) x = std::max(x, 0.0);
    const double m = trapezoid(v, step);
    for (double& x : v) x /= m;
    return v;
}

}  // namespace

PairGrid::PairGrid(const GridDensity& dX, const GridDensity& dY, double score_floor) {
    step = std::min(dX.grid_step(), dY.grid_step());
    const double reach = std::max({std::abs(dX.grid_start()), std::abs(dX.grid_end()), std::abs(dY.grid_start()),
                                   std::abs(dY.grid_end())});
    half = static_cast<std::size_t>(std::ceil(reach / step - 1e-9));
    const std::size_t n = 2 * half + 1;
    const double start = -static_cast<double>(half) * step;
    fx = on_common_grid(dX, start, step, n);
    fy = on_common_grid(dY, start, step, n);

    wx.resize(n);
    wy.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        wx[i] = trap_weight(i, n) * fx[i] * step;
        wy[i] = trap_weight(i, n) * fy[i] * step;
    }
    std::vector<bool> unused;
    rx = masked_score(fx, step, score_floor, unused);
    ry = masked_score(fy, step, score_floor, unused);

    fs = convolve_with_y(std::vector<double>(n, 1.0));
    rs = masked_score(fs, step, score_floor, mask_s);
}

std::vector<double> PairGrid::convolve_with_y(const std::vector<double>& a) const {
    const std::size_t n = size();
    std::vector<double> out(2 * n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = wx[i] * a[i];
        if (c == 0.0) continue;
        double* dst = out.data() + i;
        for (std::size_t j = 0; j < n; ++j) dst[j] += c * fy[j];
    }
    return out;
}

std::vector<double> PairGrid::marginal_x(const std::vector<double>& phi) const {
    const std::size_t n = size();
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += wy[j] * phi[i + j];
        g[i] = s;
    }
    return g;
}

std::vector<double> PairGrid::marginal_y(const std::vector<double>& phi) const {
    const std::size_t n = size();
    std::vector<double> g(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += wx[i] * phi[i + j];
        g[j] = s;
    }
    return g;
}

}  // namespace entlab::detail
