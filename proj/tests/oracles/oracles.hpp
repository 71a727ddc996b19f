#pragma once

#include <functional>
#include <vector>

namespace oracles {

/// Gauss quadrature nodes and weights from a symmetric Jacobi matrix
/// (Golub-Welsch), weights normalized to sum to one.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Probabilists' Gauss-Hermite rule: integrates E p(Z), Z ~ N(0,1), exactly
/// for polynomials of degree < 2n.
Rule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1] with weights summing to one.
Rule gauss_legendre(int n);

/// sup E g^2 / E g'^2 over polynomials of degree <= `degree` under N(0, variance),
/// with E g = 0 and, when `restricted`, E g' = 0. Rayleigh quotient over a
/// Hermite basis assembled by Gauss-Hermite quadrature.
double hermite_poincare(double variance, bool restricted, int degree = 12);

/// Same supremum over `dim` uniform cubic B-splines on [lo, hi] for the
/// density `pdf`, with integrals by Gauss-Legendre per knot interval. The
/// window must keep pdf above about 1e-10 of its peak, or the edge splines
/// make the quotient singular.
double spline_poincare(const std::function<double(double)>& pdf, double lo, double hi, bool restricted,
                       int dim = 60);

/// Adaptive Gauss-Kronrod value of int f ln(f / phi) over [lo, hi], phi the
/// N(mean, variance) density.
double direct_kl(const std::function<double(double)>& pdf, double mean, double variance, double lo, double hi);

/// Adaptive Gauss-Kronrod value of -int f ln f over [lo, hi].
double direct_entropy(const std::function<double(double)>& pdf, double lo, double hi);

double normal_pdf(double x, double mean, double variance);
double laplace_pdf(double x, double scale);
/// Uniform [a, b] convolved with N(0, s2), through the normal CDF.
double smoothed_uniform_pdf(double x, double a, double b, double s2);
double mixture_pdf(double x, const std::vector<double>& w, const std::vector<double>& m, const std::vector<double>& v);

}  // namespace oracles
