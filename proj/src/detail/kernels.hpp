#pragma once

#include <span>
#include <vector>

namespace entlab::detail {

/// Trapezoid weight of node i among n.
inline double trap_weight(std::size_t i, std::size_t n) noexcept {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

/// -int f ln f with values below 1e-300 treated as zero.
double entropy_of(std::span<const double> f, double step);

/// log_derivative4 restricted to nodes with f >= floor * max; end nodes and
/// nodes off the support are 0.
/// `mask` receives the support used.
std::vector<double> masked_score(std::span<const double> f, double step, double floor,
                                 std::vector<bool>& mask);

/// Fourth-order central difference of ln f with no support mask. Near nodes
/// where f underflows the stencil drops to second order, then one-sided.
std::vector<double> log_derivative4(std::span<const double> f, double step);

/// int f rho^2 restricted to the mask of `masked_score`.
double fisher_of(std::span<const double> f, double step, double floor);

}  // namespace entlab::detail
