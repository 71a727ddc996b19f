#include "entlab/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/resample.hpp"
#include "entlab/error.hpp"

namespace entlab {

void GridConfig::validate() const {
    if (num_points < 16 || !is_power_of_two(num_points)) {
        std::ostringstream os;
        os << "num_points must be a power of two >= 16, got " << num_points;
        fail(ErrorKind::InvalidSpec, os.str());
    }
    if (!(half_width_sigmas >= 6.0)) {
        fail(ErrorKind::InvalidSpec, "half_width_sigmas must be >= 6");
    }
    if (!(tol_mass > 0.0) || !(tail_eps > 0.0)) {
        fail(ErrorKind::InvalidSpec, "tolerances must be positive");
    }
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

double trapezoid(std::span<const double> values, double step) noexcept {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    sum -= 0.5 * (values.front() + values.back());
    return sum * step;
}

namespace {

void check_boundary(std::span<const double> v, double tail_eps, const std::string& label) {
    const double peak = *std::max_element(v.begin(), v.end());
    if (v.front() > tail_eps * peak || v.back() > tail_eps * peak) {
        std::ostringstream os;
        os << "density '" << label << "' does not decay inside the grid (boundary/peak = "
           << std::max(v.front(), v.back()) / peak << ", limit " << tail_eps << ")";
        fail(ErrorKind::TailTruncation, os.str());
    }
}

}  // namespace

GridDensity::GridDensity(double grid_start, double grid_step, std::vector<double> values,
                         std::string label, const GridConfig& cfg)
    : start_(grid_start), step_(grid_step), values_(std::move(values)), label_(std::move(label)) {
    if (!std::isfinite(start_) || !(step_ > 0.0) || !std::isfinite(step_)) {
        fail(ErrorKind::InvalidDensity, "grid start must be finite and step positive");
    }
    if (values_.size() < 16 || !is_power_of_two(values_.size())) {
        fail(ErrorKind::InvalidDensity, "sample count must be a power of two >= 16");
    }
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            fail(ErrorKind::InvalidDensity, "density samples must be finite and nonnegative");
        }
    }
    const double m = mass();
    if (std::abs(m - 1.0) > cfg.tol_mass) {
        std::ostringstream os;
        os << "trapezoid mass " << m << " outside 1 +/- " << cfg.tol_mass;
        fail(ErrorKind::InvalidDensity, os.str());
    }
    check_boundary(values_, cfg.tail_eps, label_);
}

GridDensity GridDensity::normalized(double grid_start, double grid_step, std::vector<double> values,
                                    std::string label, const GridConfig& cfg) {
    for (double& v : values) {
        if (!(v > 0.0)) {
            v = 0.0;
        }
    }
    const double m = trapezoid(values, grid_step);
    if (!(m > 0.0) || !std::isfinite(m)) {
        fail(ErrorKind::InvalidDensity, "density '" + label + "' has no mass on its grid");
    }
    for (double& v : values) {
        v /= m;
    }
    check_boundary(values, cfg.tail_eps, label);
    return GridDensity(grid_start, grid_step, std::move(values), std::move(label), cfg);
}

double GridDensity::max_value() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

GridConfig GridDensity::matching_config() const {
    GridConfig cfg;
    cfg.num_points = values_.size();
    return cfg;
}

Moments moments(const GridDensity& d) {
    const auto v = d.values();
    const std::size_t n = v.size();
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        m0 += w * v[i];
        m1 += w * v[i] * d.x(i);
    }
    const double mean = m1 / m0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        const double dx = d.x(i) - mean;
        m2 += w * v[i] * dx * dx;
    }
    return {mean, m2 / m0};
}

std::pair<double, double> fresh_grid(double mean, double stddev, const GridConfig& cfg) {
    const double half = cfg.half_width_sigmas * stddev;
    const double step = 2.0 * half / static_cast<double>(cfg.num_points);
    return {mean - half, step};
}

GridDensity affine_transform(const GridDensity& d, double a, double b, const GridConfig& cfg) {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
        fail(ErrorKind::InvalidSpec, "affine_transform requires finite a != 0 and finite b");
    }
    cfg.validate();
    // The identity keeps the input grid; regridding would cost O(h^2) at kinks.
    if (a == 1.0 && b == 0.0 && cfg.num_points == d.size()) {
        return d;
    }
    const Moments mo = moments(d);
    const auto [start, step] = fresh_grid(a * mo.mean + b, std::abs(a) * std::sqrt(mo.variance), cfg);

    long offset = 0;
    std::vector<double> values;
    if (a == 1.0 && detail::grids_aligned(start - b, step, d.grid_start(), d.grid_step(), offset)) {
        values.assign(cfg.num_points, 0.0);
        for (std::size_t i = 0; i < cfg.num_points; ++i) {
            const long j = static_cast<long>(i) + offset;
            if (j >= 0 && j < static_cast<long>(d.size())) {
                values[i] = d[static_cast<std::size_t>(j)];
            }
        }
    } else {
        const detail::UniformInterpolant p(d.grid_start(), d.grid_step(), d.values());
        values = detail::sample_affine(p, a, b, start, step, cfg.num_points);
    }
    return GridDensity::normalized(start, step, std::move(values), d.label(), cfg);
}

GridDensity affine_transform(const GridDensity& d, double a, double b) {
    return affine_transform(d, a, b, d.matching_config());
}

GridDensity center(const GridDensity& d) { return affine_transform(d, 1.0, -moments(d).mean); }

}  // namespace entlab
