#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracles {

namespace {

Rule golub_welsch(const Eigen::VectorXd& off) {
    const auto n = off.size() + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        J(k, k + 1) = J(k + 1, k) = off(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (Eigen::Index k = 0; k < n; ++k) {
        r.nodes.push_back(es.eigenvalues()(k));
        r.weights.push_back(es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
    }
    return r;
}

/// Largest value of (c^T A c) / (c^T B c) over c with C c = 0.
double constrained_rayleigh(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const auto rank = svd.rank();
    const Eigen::MatrixXd Z = svd.matrixV().rightCols(A.cols() - rank);
    const Eigen::MatrixXd Az = Z.transpose() * A * Z;
    const Eigen::MatrixXd Bz = Z.transpose() * B * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Az, Bz);
    return ges.eigenvalues().maxCoeff();
}

// Uniform cubic B-spline on [0, 4) and its derivative.
double bspline(double u) {
    if (u < 0.0 || u >= 4.0) return 0.0;
    if (u < 1.0) return u * u * u / 6.0;
    if (u < 2.0) return (-3.0 * u * u * u + 12.0 * u * u - 12.0 * u + 4.0) / 6.0;
    if (u < 3.0) return (3.0 * u * u * u - 24.0 * u * u + 60.0 * u - 44.0) / 6.0;
    return (4.0 - u) * (4.0 - u) * (4.0 - u) / 6.0;
}

double bspline_prime(double u) {
    if (u < 0.0 || u >= 4.0) return 0.0;
    if (u < 1.0) return u * u / 2.0;
    if (u < 2.0) return (-9.0 * u * u + 24.0 * u - 12.0) / 6.0;
    if (u < 3.0) return (9.0 * u * u - 48.0 * u + 60.0) / 6.0;
    return -(4.0 - u) * (4.0 - u) / 2.0;
}

}  // namespace

Rule gauss_hermite(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
    return golub_welsch(off);
}

Rule gauss_legendre(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(off);
}

double hermite_poincare(double variance, bool restricted, int degree) {
    const int n = degree + 1;
    const Rule rule = gauss_hermite(degree + 2);
    const double sd = std::sqrt(variance);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(restricted ? 2 : 1, n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double z = rule.nodes[q];
        // Normalized Hermite polynomials and their derivatives in x = sd z.
        Eigen::VectorXd p(n), dp(n);
        p(0) = 1.0;
        dp(0) = 0.0;
        if (n > 1) {
            p(1) = z;
            dp(1) = 1.0;
        }
        for (int k = 1; k + 1 < n; ++k) {
            p(k + 1) = z * p(k) - k * p(k - 1);
            dp(k + 1) = (k + 1) * p(k);
        }
        double fact = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k > 0) fact *= k;
            const double s = 1.0 / std::sqrt(fact);
            p(k) *= s;
            dp(k) *= s / sd;
        }
        const double w = rule.weights[q];
        M += w * p * p.transpose();
        K += w * dp * dp.transpose();
        C.row(0) += w * p.transpose();
        if (restricted) C.row(1) += w * dp.transpose();
    }
    return constrained_rayleigh(M, K, C);
}

double spline_poincare(const std::function<double(double)>& pdf, double lo, double hi, bool restricted, int dim) {
    const int intervals = dim - 3;
    const double h = (hi - lo) / intervals;
    const Rule rule = gauss_legendre(20);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(restricted ? 2 : 1, dim);
    Eigen::VectorXd b(dim), db(dim);
    for (int cell = 0; cell < intervals; ++cell) {
        const double a = lo + cell * h;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
            const double w = rule.weights[q] * h * pdf(x);
            for (int i = 0; i < dim; ++i) {
                // Basis i is supported on [lo + (i - 3) h, lo + (i + 1) h).
                const double u = (x - lo) / h - (i - 3);
                b(i) = bspline(u);
                db(i) = bspline_prime(u) / h;
            }
            M += w * b * b.transpose();
            K += w * db * db.transpose();
            C.row(0) += w * b.transpose();
            if (restricted) C.row(1) += w * db.transpose();
        }
    }
    return constrained_rayleigh(M, K, C);
}

double direct_kl(const std::function<double(double)>& pdf, double mean, double variance, double lo, double hi) {
    auto integrand = [&](double x) {
        const double f = pdf(x);
        if (!(f > 0.0)) return 0.0;
        const double z = x - mean;
        const double log_phi = -0.5 * std::log(2.0 * std::numbers::pi * variance) - 0.5 * z * z / variance;
        return f * (std::log(f) - log_phi);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double mid = mean;
    return GK::integrate(integrand, lo, mid, 20, 1e-14) + GK::integrate(integrand, mid, hi, 20, 1e-14);
}

double direct_entropy(const std::function<double(double)>& pdf, double lo, double hi) {
    auto integrand = [&](double x) {
        const double f = pdf(x);
        return f > 0.0 ? -f * std::log(f) : 0.0;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double mid = 0.5 * (lo + hi);
    return GK::integrate(integrand, lo, mid, 20, 1e-14) + GK::integrate(integrand, mid, hi, 20, 1e-14);
}

double normal_pdf(double x, double mean, double variance) {
    const double z = x - mean;
    return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double laplace_pdf(double x, double scale) { return std::exp(-std::abs(x) / scale) / (2.0 * scale); }

double smoothed_uniform_pdf(double x, double a, double b, double s2) {
    const double s = std::sqrt(2.0 * s2);
    return 0.5 * (std::erf((x - a) / s) - std::erf((x - b) / s)) / (b - a);
}

double mixture_pdf(double x, const std::vector<double>& w, const std::vector<double>& m, const std::vector<double>& v) {
    double f = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) f += w[k] * normal_pdf(x, m[k], v[k]);
    return f;
}

}  // namespace oracles
