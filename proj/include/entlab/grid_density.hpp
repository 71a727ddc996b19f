#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace entlab {

/// Sizing and validation parameters for grids produced by the library.
///
/// A fresh grid for a law with mean m and standard deviation s spans
/// [m - w*s, m + w*s) with `num_points` nodes, one of which sits exactly on m.
struct GridConfig {
    std::size_t num_points = 4096;
    double half_width_sigmas = 20.0;
    double tol_mass = 1e-6;
    double tail_eps = 1e-12;

    /// Throws InvalidSpec when num_points is not a power of two >= 16 or the
    /// half-width is below 6 standard deviations.
    void validate() const;
};

bool is_power_of_two(std::size_t n) noexcept;

/// Trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double step) noexcept;

/// A nonnegative, unit-mass function sampled on a uniform grid.
///
/// Instances are immutable; the constructor enforces every invariant
/// (nonnegativity, power-of-two length, trapezoid mass and boundary decay).
class GridDensity {
public:
    GridDensity(double grid_start, double grid_step, std::vector<double> values,
                std::string label, const GridConfig& cfg = {});

    /// Clamps negative samples to zero, divides by the trapezoid mass and
    /// validates. Throws TailTruncation when the boundary decay invariant
    /// fails and InvalidDensity for any other violation.
    static GridDensity normalized(double grid_start, double grid_step,
                                  std::vector<double> values, std::string label,
                                  const GridConfig& cfg = {});

    [[nodiscard]] double grid_start() const noexcept { return start_; }
    [[nodiscard]] double grid_step() const noexcept { return step_; }
    [[nodiscard]] double grid_end() const noexcept {
        return start_ + step_ * static_cast<double>(values_.size() - 1);
    }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return start_ + step_ * static_cast<double>(i);
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] double max_value() const noexcept;
    [[nodiscard]] double mass() const noexcept { return trapezoid(values_, step_); }

    /// The default configuration with num_points matching this density.
    [[nodiscard]] GridConfig matching_config() const;

private:
    double start_;
    double step_;
    std::vector<double> values_;
    std::string label_;
};

struct Moments {
    double mean;
    double variance;
};

Moments moments(const GridDensity& d);

/// Nodes of the fresh grid that `cfg` prescribes for a law with the given
/// mean and standard deviation: returns (start, step).
std::pair<double, double> fresh_grid(double mean, double stddev, const GridConfig& cfg);

/// Density of aX + b resampled onto a fresh grid.
GridDensity affine_transform(const GridDensity& d, double a, double b, const GridConfig& cfg);
GridDensity affine_transform(const GridDensity& d, double a, double b);

/// Shift so that the trapezoid mean is zero.
GridDensity center(const GridDensity& d);

}  // namespace entlab
