#include "detail/resample.hpp"

#include <cmath>

namespace entlab::detail {

UniformInterpolant::UniformInterpolant(double start, double step, std::span<const double> values)
    : start_(start),
      end_(start + step * static_cast<double>(values.size() - 1)),
      spline_(values.data(), values.size(), start, step, 0.0, 0.0) {}

double UniformInterpolant::operator()(double x) const {
    if (x < start_ || x > end_) {
        return 0.0;
    }
    return spline_(x);
}

std::vector<double> sample_affine(const UniformInterpolant& p, double scale, double shift,
                                  double start, double step, std::size_t count) {
    std::vector<double> out(count);
    const double inv = 1.0 / scale;
    const double jac = 1.0 / std::abs(scale);
    for (std::size_t i = 0; i < count; ++i) {
        const double y = start + step * static_cast<double>(i);
        out[i] = jac * p((y - shift) * inv);
    }
    return out;
}

bool grids_aligned(double start, double step, double other_start, double other_step,
                   long& offset) noexcept {
    if (std::abs(step - other_step) > 1e-12 * step) {
        return false;
    }
    const double k = (start - other_start) / step;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9) {
        return false;
    }
    offset = static_cast<long>(r);
    return true;
}

}  // namespace entlab::detail
