#pragma once

#include <cstddef>
#include <vector>

#include "entlab/grid_density.hpp"

namespace entlab::detail {

/// Two densities on one symmetric grid with nodes (i - K) h, plus the density
/// of their (unscaled) sum by direct discrete convolution, for product-measure
/// quadrature. Sum node k sits at (k - 2K) h, so X node i and Y node j map to
/// sum node i + j.
class PairGrid {
public:
    PairGrid(const GridDensity& dX, const GridDensity& dY, double score_floor = 1e-10);

    [[nodiscard]] std::size_t size() const noexcept { return fx.size(); }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return (static_cast<double>(i) - static_cast<double>(half)) * step;
    }
    [[nodiscard]] double xs(std::size_t k) const noexcept {
        return (static_cast<double>(k) - 2.0 * static_cast<double>(half)) * step;
    }

    /// E F(i, j) under the product measure (tensor trapezoid).
    template <class F>
    double expect(F&& fn) const {
        double total = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (wx[i] == 0.0) continue;
            double row = 0.0;
            for (std::size_t j = 0; j < size(); ++j) {
                row += wy[j] * fn(i, j);
            }
            total += wx[i] * row;
        }
        return total;
    }

    /// E F(X) and E F(Y) (one-dimensional trapezoid).
    template <class F>
    double expect_x(F&& fn) const {
        double total = 0.0;
        for (std::size_t i = 0; i < size(); ++i) total += wx[i] * fn(i);
        return total;
    }
    template <class F>
    double expect_y(F&& fn) const {
        double total = 0.0;
        for (std::size_t j = 0; j < size(); ++j) total += wy[j] * fn(j);
        return total;
    }

    /// g1(u_i) = E phi(u_i + Y) and g2(v_j) = E phi(X + v_j) for phi given on
    /// sum nodes.
    [[nodiscard]] std::vector<double> marginal_x(const std::vector<double>& phi) const;
    [[nodiscard]] std::vector<double> marginal_y(const std::vector<double>& phi) const;

    /// Sum-node values of sum_i w_i a[i] fY[k - i] h, i.e. (a fX) * fY.
    [[nodiscard]] std::vector<double> convolve_with_y(const std::vector<double>& a) const;

    double step = 0.0;
    std::size_t half = 0;
    std::vector<double> fx, fy;  // densities on the common grid
    std::vector<double> wx, wy;  // quadrature weights: trapezoid * density * step
    std::vector<double> rx, ry;  // masked scores
    std::vector<double> fs, rs;  // sum density and its masked score
    std::vector<bool> mask_s;
};

}  // namespace entlab::detail
