#include "entlab/convolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "detail/fft.hpp"
#include "detail/resample.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"

namespace entlab {

namespace {

// Smallest number of working-grid steps per standard deviation of the
// narrower convolution factor.
constexpr double kStepsPerSd = 8.0;

// Largest ratio of output to input spread handled on the input's own step.
constexpr double kMaxSpreadRatio = 16.0;

struct Sampled {
    double start;
    std::vector<double> values;
};

void clamp_and_normalize(std::vector<double>& v, double step) {
    for (double& x : v) {
        x = std::max(x, 0.0);
    }
    const double m = trapezoid(v, step);
    if (m > 0.0) {
        for (double& x : v) {
            x /= m;
        }
    }
}

// Density of scale * X on nodes start + i * step covering the scaled support.
Sampled rescale_onto(const GridDensity& d, double scale, double step) {
    const double start = scale * d.grid_start();
    const double extent = scale * (d.grid_end() - d.grid_start());
    const auto count = static_cast<std::size_t>(std::ceil(extent / step - 1e-9)) + 1;
    const detail::UniformInterpolant p(d.grid_start(), d.grid_step(), d.values());
    Sampled s{start, detail::sample_affine(p, scale, 0.0, start, step, count)};
    clamp_and_normalize(s.values, step);
    return s;
}

GridConfig resolve(const std::optional<GridConfig>& cfg, const GridDensity& d) {
    GridConfig c = cfg.value_or(d.matching_config());
    c.validate();
    return c;
}

// Density of a (X + sqrt(v) G) on a fresh grid.
GridDensity smooth_then_affine(const GridDensity& d, double v, double a, const GridConfig& cfg) {
    const Moments mo = moments(d);
    const double sd_in = std::sqrt(mo.variance);
    const double sd_mid = std::sqrt(mo.variance + v);

    double step = d.grid_step();
    Sampled in{d.grid_start(), std::vector<double>(d.values().begin(), d.values().end())};
    if (sd_mid / sd_in > kMaxSpreadRatio) {
        step = 2.0 * cfg.half_width_sigmas * sd_mid / static_cast<double>(cfg.num_points) / kMaxSpreadRatio;
        in = rescale_onto(d, 1.0, step);
    }

    // Sampled kernel normalized by its discrete sum: nonnegative, so it cannot
    // ring even when sqrt(v) is below one grid step.
    const double sd_v = std::sqrt(v);
    const auto half = static_cast<std::size_t>(std::ceil(std::max(cfg.half_width_sigmas, 12.0) * sd_v / step)) + 2;
    std::vector<double> kernel(2 * half + 1);
    double total = 0.0;
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        const double z = (static_cast<double>(k) - static_cast<double>(half)) * step / sd_v;
        kernel[k] = std::exp(-0.5 * z * z);
        total += kernel[k];
    }
    for (double& k : kernel) {
        k /= total;
    }
    const auto smoothed = detail::linear_convolve(in.values, kernel);
    const double work_start = in.start - static_cast<double>(half) * step;
    const detail::UniformInterpolant p(work_start, step, smoothed);
    const auto [start, out_step] = fresh_grid(a * mo.mean, std::abs(a) * sd_mid, cfg);
    auto values = detail::sample_affine(p, a, 0.0, start, out_step, cfg.num_points);
    return GridDensity::normalized(start, out_step, std::move(values), d.label(), cfg);
}

}  // namespace

GridDensity scaled_sum_density(const GridDensity& dX, const GridDensity& dY, double lambda,
                               const std::optional<GridConfig>& cfg) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        fail(ErrorKind::InvalidSpec, "scaled_sum_density needs lambda in [0, 1]");
    }
    const GridConfig out_cfg = resolve(cfg, dX);
    const double a = lambda;
    const double b = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
    if (b == 0.0) {
        return affine_transform(dX, 1.0, 0.0, out_cfg);
    }
    if (a == 0.0) {
        return affine_transform(dY, 1.0, 0.0, out_cfg);
    }

    const Moments mx = moments(dX);
    const Moments my = moments(dY);
    const double sx = std::sqrt(mx.variance);
    const double sy = std::sqrt(my.variance);

    // The wider scaled component fixes the working step; the other one is
    // expressed relative to it so that S = coef_base * (B + r O).
    const bool x_is_base = a * sx >= b * sy;
    const GridDensity& base = x_is_base ? dX : dY;
    const GridDensity& other = x_is_base ? dY : dX;
    const double coef_base = x_is_base ? a : b;
    const double r = (x_is_base ? b : a) / coef_base;
    const double sd_other = r * (x_is_base ? sy : sx);

    double step = base.grid_step();
    Sampled b_s{base.grid_start(), std::vector<double>(base.values().begin(), base.values().end())};
    if (sd_other < kStepsPerSd * step) {
        step = sd_other / kStepsPerSd;
        b_s = rescale_onto(base, 1.0, step);
    }

    Sampled o_s;
    if (r == 1.0 && std::abs(other.grid_step() - step) <= 1e-12 * step) {
        o_s = {other.grid_start(), std::vector<double>(other.values().begin(), other.values().end())};
    } else {
        o_s = rescale_onto(other, r, step);
    }

    auto conv = detail::linear_convolve(b_s.values, o_s.values);
    for (double& v : conv) {
        v = std::max(v * step, 0.0);
    }
    const detail::UniformInterpolant p(b_s.start + o_s.start, step, conv);
    const auto [start, out_step] = fresh_grid(a * mx.mean + b * my.mean,
                                              std::sqrt(a * a * mx.variance + b * b * my.variance), out_cfg);
    auto values = detail::sample_affine(p, coef_base, 0.0, start, out_step, out_cfg.num_points);
    return GridDensity::normalized(start, out_step, std::move(values), dX.label() + "+" + dY.label(), out_cfg);
}

GridDensity gaussian_smooth(const GridDensity& d, double v, const std::optional<GridConfig>& cfg) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorKind::InvalidSpec, "gaussian_smooth needs a finite variance v > 0");
    }
    return smooth_then_affine(d, v, 1.0, resolve(cfg, d));
}

GridDensity ou_evolve(const GridDensity& d, double t, const std::optional<GridConfig>& cfg) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        fail(ErrorKind::InvalidSpec, "ou_evolve needs a finite time t >= 0");
    }
    const GridConfig c = resolve(cfg, d);
    if (t == 0.0) {
        return affine_transform(d, 1.0, 0.0, c);
    }
    // e^{-t}(X + sqrt(e^{2t} - 1) G) has the same law as e^{-t}X + sqrt(1 - e^{-2t}) G;
    // smoothing first keeps the spline away from any kinks in the input.
    return smooth_then_affine(d, std::expm1(2.0 * t), std::exp(-t), c);
}

DeBruijnResidual de_bruijn_residual(const GridDensity& d, double t, double delta) {
    if (!(t > 0.0) || !(delta > 0.0) || !(delta < 0.5 * t)) {
        fail(ErrorKind::PreconditionViolation, "de_bruijn_residual needs 0 < delta < t/2");
    }
    const double hp = entropy(gaussian_smooth(d, t + delta));
    const double hm = entropy(gaussian_smooth(d, t - delta));
    DeBruijnResidual out{};
    out.entropy_derivative = (hp - hm) / (2.0 * delta);
    out.half_fisher = 0.5 * fisher_information(gaussian_smooth(d, t));
    out.residual = std::abs(out.entropy_derivative - out.half_fisher);
    return out;
}

IntegratedEntropy integrated_debruijn_entropy(const GridDensity& d, double s_max, std::size_t n_steps) {
    constexpr double s_min = 1e-4;
    const Moments mo = moments(d);
    if (std::abs(mo.mean) > 1e-6) {
        fail(ErrorKind::PreconditionViolation, "integrated de Bruijn entropy needs a centered density");
    }
    if (mo.variance < 0.1 || mo.variance > 10.0) {
        fail(ErrorKind::PreconditionViolation, "integrated de Bruijn entropy needs variance in [0.1, 10]");
    }
    if (!(s_max > s_min) || n_steps < 2) {
        fail(ErrorKind::InvalidSpec, "integrated de Bruijn entropy needs s_max > 1e-4 and n_steps >= 2");
    }

    std::vector<double> s(n_steps + 1, 0.0);
    const double ratio = std::log(s_max / s_min) / static_cast<double>(n_steps - 1);
    for (std::size_t k = 0; k < n_steps; ++k) {
        s[k + 1] = s_min * std::exp(ratio * static_cast<double>(k));
    }
    s.back() = s_max;

    // Nodes are independent; each worker takes every stride-th node.
    std::vector<double> integrand(s.size(), 0.0);
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < s.size(); k += workers) {
                    integrand[k] = fisher_information(ou_evolve(d, s[k])) - 1.0;
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    // Trapezoid on [0, s_min], where the integrand may have a kink at 0, then
    // composite Simpson over pairs of geometric intervals.
    const auto trap = [&](std::size_t k) { return 0.5 * (integrand[k] + integrand[k + 1]) * (s[k + 1] - s[k]); };
    double integral = trap(0);
    std::size_t k = 1;
    for (; k + 2 < s.size(); k += 2) {
        const double h0 = s[k + 1] - s[k];
        const double h1 = s[k + 2] - s[k + 1];
        integral += (h0 + h1) / 6.0 *
                    ((2.0 - h1 / h0) * integrand[k] + (h0 + h1) * (h0 + h1) / (h0 * h1) * integrand[k + 1] +
                     (2.0 - h0 / h1) * integrand[k + 2]);
    }
    if (k + 1 < s.size()) {
        integral += trap(k);
    }
    IntegratedEntropy out{};
    out.value = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) - integral;
    out.integrand_at_smax = integrand.back();
    out.truncation_warning = std::abs(out.integrand_at_smax) > 1e-6;
    return out;
}

}  // namespace entlab
