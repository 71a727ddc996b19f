#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "entlab/grid_density.hpp"
#include "entlab/report.hpp"

namespace entlab {

enum class PoincareConstraints {
    MeanOnly,           // E g = 0: the classical Poincare constant
    MeanAndDerivative,  // E g = 0 and E g' = 0: the restricted constant R*
};

struct SolverConfig {
    /// Grid points used by the solver; 0 keeps the density's own grid.
    std::size_t resolution = 0;
    /// Nodes with f below score_floor * max f are excluded.
    double score_floor = 1e-10;
    /// Largest admissible ratio of lumped mass entries.
    double max_condition = 1e12;
    PoincareConstraints constraints = PoincareConstraints::MeanAndDerivative;

    void validate() const;
};

/// {"resolution", "score_floor", "max_condition", "constraints"}; the last is
/// "mean_only" or "mean_and_derivative". Missing keys keep their defaults.
SolverConfig solver_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverConfig& cfg);

struct PoincareEstimate {
    double value = 0.0;
    /// ||P A y - lambda y|| / (lambda ||y||) for the selected eigenpair.
    double eigen_residual = 0.0;
    /// |int f g| and |int f g'| for the maximizer, each divided by ||g||_f
    /// and the dual norm of its constraint. Only enforced constraints are
    /// held to 1e-8.
    std::array<double, 2> constraint_residuals{};
    std::size_t resolution = 0;
    /// Maximizer g on the solver grid, scaled so that int f g^2 = 1; zero
    /// outside the support. Shares grid_start / grid_step with `grid`.
    std::vector<double> eigenfunction;
    double grid_start = 0.0;
    double grid_step = 0.0;
};

/// sup E g(X)^2 / E g'(X)^2 over the constraint class, via piecewise-linear
/// elements with lumped f-weighted mass and f-weighted stiffness.
/// Throws IllConditioned when the lumped mass ratio exceeds max_condition and
/// SolverFailure when the eigenpair misses its residual bounds.
PoincareEstimate restricted_poincare(const GridDensity& d, const SolverConfig& cfg = {});

/// R*(aX) against a^2 R*(X), relative tolerance 1e-2.
InequalityReport poincare_scaling_check(const GridDensity& d, double a, const SolverConfig& cfg = {});

/// R*(lambda X + sqrt(1 - lambda^2) Y) <= max(R*_X, R*_Y), relative tolerance 1e-2.
InequalityReport convolution_stability_check(const GridDensity& dX, const GridDensity& dY, double lambda,
                                             const SolverConfig& cfg = {});

}  // namespace entlab
