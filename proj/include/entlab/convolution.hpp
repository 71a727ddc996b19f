#pragma once

#include <cstddef>
#include <optional>

#include "entlab/grid_density.hpp"

namespace entlab {

/// Density of lambda X + sqrt(1 - lambda^2) Y for independent X, Y.
/// The output sits on a fresh grid sized by `cfg` (default: dX's size).
GridDensity scaled_sum_density(const GridDensity& dX, const GridDensity& dY, double lambda,
                               const std::optional<GridConfig>& cfg = std::nullopt);

/// Density of X + sqrt(v) G with G standard normal, v > 0.
GridDensity gaussian_smooth(const GridDensity& d, double v,
                            const std::optional<GridConfig>& cfg = std::nullopt);

/// Ornstein-Uhlenbeck adjoint: density of e^{-t} X + sqrt(1 - e^{-2t}) G.
GridDensity ou_evolve(const GridDensity& d, double t,
                      const std::optional<GridConfig>& cfg = std::nullopt);

struct DeBruijnResidual {
    double entropy_derivative;  // centred difference of h(X + sqrt(s) G) at s = t
    double half_fisher;         // J(X + sqrt(t) G) / 2
    double residual;            // |entropy_derivative - half_fisher|
};

/// Requires 0 < delta < t / 2.
DeBruijnResidual de_bruijn_residual(const GridDensity& d, double t, double delta);

struct IntegratedEntropy {
    double value;
    double integrand_at_smax;  // J(p_smax X) - 1
    bool truncation_warning;   // |integrand_at_smax| > 1e-6
};

/// h(X) recovered as 1/2 ln(2 pi e) - int_0^smax [J(p_s X) - 1] ds with the
/// integral taken by trapezoid over {0} and n_steps geometric nodes on
/// [1e-4, s_max]. Requires mean 0 (+/- 1e-6) and variance in [0.1, 10].
IntegratedEntropy integrated_debruijn_entropy(const GridDensity& d, double s_max = 10.0,
                                              std::size_t n_steps = 200);

}  // namespace entlab
