#pragma once

#include <vector>

#include "entlab/grid_density.hpp"

namespace entlab {

/// Score rho = (ln f)' on the grid of the density it came from. Nodes outside
/// `support_mask` carry 0.
struct ScoreFunction {
    double grid_start = 0.0;
    double grid_step = 0.0;
    std::vector<double> values;
    std::vector<bool> support_mask;
};

/// Differential entropy -int f ln f (trapezoid, 0 ln 0 = 0).
double entropy(const GridDensity& d);

/// Fourth-order central difference of ln f on nodes with f >= floor * max f. Throws
/// DegenerateSupport when those nodes hold less than 1 - 1e-6 of the mass.
ScoreFunction score(const GridDensity& d, double floor = 1e-10);

/// J = int f rho^2 over the score support. Throws SuspectedInfinite when the
/// estimate moves by more than 5% on the grid with every other node dropped.
double fisher_information(const GridDensity& d, double floor = 1e-10);

/// D(X) = 1/2 ln(2 pi e var) - h(X). Throws NonCenteredInput if |mean| > 1e-6.
double kl_to_matched_gaussian(const GridDensity& d);

/// int |f - g| on a grid covering both supports at the finer step.
double l1_distance(const GridDensity& f, const GridDensity& g);

}  // namespace entlab
