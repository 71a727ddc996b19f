#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace entlab::detail {

/// Cubic B-spline through uniformly spaced samples; zero outside the sampled
/// interval.
class UniformInterpolant {
public:
    UniformInterpolant(double start, double step, std::span<const double> values);

    double operator()(double x) const;

    [[nodiscard]] double start() const noexcept { return start_; }
    [[nodiscard]] double end() const noexcept { return end_; }

private:
    double start_;
    double end_;
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
};

/// Samples y -> p((y - shift) / scale) / |scale| at start + i*step, i < count.
std::vector<double> sample_affine(const UniformInterpolant& p, double scale, double shift,
                                  double start, double step, std::size_t count);

/// True when the grid (start, step) places its nodes on (other_start, other_step)
/// nodes, i.e. identical step and an integer offset; `offset` receives it.
bool grids_aligned(double start, double step, double other_start, double other_step,
                   long& offset) noexcept;

}  // namespace entlab::detail
