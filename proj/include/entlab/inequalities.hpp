#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entlab/grid_density.hpp"
#include "entlab/poincare.hpp"
#include "entlab/report.hpp"

namespace entlab {

/// e^{2h(X)} + e^{2h(Y)} <= e^{2h(X+Y)}.
InequalityReport check_epi(const GridDensity& dX, const GridDensity& dY);

/// (h(X) + h(Y)) / 2 <= h((X+Y)/sqrt 2).
InequalityReport check_eji(const GridDensity& dX, const GridDensity& dY);

/// Lower and upper bounds on J1 - J2, where J1 = (J(X)+J(Y))/2 and
/// J2 = J((X+Y)/sqrt 2), valid for R >= max(R*_X, R*_Y). Inputs must be
/// centered. Without R the solver's maximum is used.
std::pair<InequalityReport, InequalityReport> check_fisher_sandwich(const GridDensity& dX, const GridDensity& dY,
                                                                    std::optional<double> R = std::nullopt,
                                                                    const SolverConfig& cfg = {});

/// J((X1+X2)/sqrt 2) <= 2R*/(var + 2R*) J(X1) for an iid pair. Informational:
/// the bound fails at the Gaussian under the restricted constant.
InequalityReport check_iid_fisher(const GridDensity& d, std::optional<double> Rstar = std::nullopt,
                                  const SolverConfig& cfg = {});

/// Constant of the entropy jump bound: min(a,1) / (min(a,1) + 2R).
double entropy_jump_constant(double var_x, double var_y, double R);

/// c [1/2 ln(2 pi e (var_X+var_Y)/2) - (h(X)+h(Y))/2] <= h((X+Y)/sqrt 2) - (h(X)+h(Y))/2
/// for R >= max(R*_X, R*_Y, 1/2). Without R the solver's maximum (and 1/2) is used.
InequalityReport check_entropy_jump(const GridDensity& dX, const GridDensity& dY,
                                    std::optional<double> R = std::nullopt, const SolverConfig& cfg = {});

/// h((X+Y)/sqrt 2) - h(X) >= R/(2+2R) [h(G) - h(X)] for unit-variance X with
/// iid copy Y, R being a spectral gap (1 / classical Poincare constant).
/// Without R the solver's gap is used.
InequalityReport check_iid_jump_ball(const GridDensity& d, std::optional<double> R = std::nullopt,
                                     const SolverConfig& cfg = {});

/// Score of a sum as a conditional expectation (sup error over the support)
/// and the Fisher-gap identity J1 - J2 = 2 E[rho_{X+Y} - (rho_X + rho_Y)/2]^2.
std::pair<InequalityReport, InequalityReport> check_score_projection(const GridDensity& dX, const GridDensity& dY);

/// Test functions for the projection identity.
enum class TestFunction { Negation, CubicClipped, Zero, Projection };
TestFunction test_function_from_string(const std::string& name);
std::string to_string(TestFunction f);

/// E[f - h1 - h2]^2 = E[f - g1 - g2]^2 + E[g1 - h1]^2 + E[g2 - h2]^2 with
/// f = 2 rho_{X+Y}, g1(u) = E f(u+Y), g2(v) = E f(X+v).
InequalityReport check_projection_pythagoras(const GridDensity& dX, const GridDensity& dY, TestFunction h1,
                                             TestFunction h2);

/// Score identities of the sum: E[X rho_X] = -1, (E[g1(X)X] + E[g2(Y)Y])/2 = -1,
/// E[rho_{X+Y} rho_X] = J(X+Y), E[X + rho_X]^2 = J(X) - 2 + E X^2,
/// E rho_X = 0, E g1(X) = 0.
std::vector<InequalityReport> check_compute_identities(const GridDensity& dX, const GridDensity& dY);

/// E[f - h1(X) - h2(Y)]^2 >= (1/Jbar)(beta/R*_X E[g1 - mu X]^2 + (1-beta)/R*_Y E[g2 - mu Y]^2)
/// with h1 = h2 = -x, mu = -2 J(X+Y), Jbar = (1-beta) J(X) + beta J(Y).
/// beta defaults to R*_X / (R*_X + R*_Y).
InequalityReport check_poincare_lower_bound(const GridDensity& dX, const GridDensity& dY,
                                            std::optional<double> beta = std::nullopt, const SolverConfig& cfg = {});

struct JumpQuantities {
    double J1;           // (J(X) + J(Y)) / 2
    double J2;           // J((X+Y)/sqrt 2)
    double sigma_sq;     // (var_X + var_Y) / 2
    double A;            // J1 - 2 + sigma_sq
    double A_prime;      // J2 - 2 + sigma_sq
    double lambda_proj;  // A' / A
};

/// Throws DegenerateDenominator when |A| < 1e-8 (the Gaussian equality case).
JumpQuantities ab_diagnostics(const GridDensity& dX, const GridDensity& dY);

/// The Fisher jump bound J2 - 1/s <= 2R/(s+2R) (J1 - 1/s), s = sigma_sq, the
/// Cramer-Rao check J2 s >= 1, and for s = 1 the chain A' <= 2R/(1+2R) A plus
/// agreement of the two margins.
std::vector<InequalityReport> check_fisher_jump(const GridDensity& dX, const GridDensity& dY,
                                                std::optional<double> R = std::nullopt, const SolverConfig& cfg = {});

}  // namespace entlab
