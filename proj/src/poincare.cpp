#include "entlab/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "detail/kernels.hpp"
#include "entlab/convolution.hpp"
#include "entlab/error.hpp"

namespace entlab {

void SolverConfig::validate() const {
    if (resolution != 0 && (resolution < 16 || !is_power_of_two(resolution))) {
        fail(ErrorKind::InvalidSpec, "solver resolution must be 0 or a power of two >= 16");
    }
    if (!(score_floor > 0.0 && score_floor < 1.0)) {
        fail(ErrorKind::InvalidSpec, "solver score_floor must lie in (0, 1)");
    }
    if (!(max_condition > 1.0)) {
        fail(ErrorKind::InvalidSpec, "solver max_condition must exceed 1");
    }
}

SolverConfig solver_config_from_json(const nlohmann::json& j) {
    SolverConfig cfg;
    try {
        cfg.resolution = j.value("resolution", cfg.resolution);
        cfg.score_floor = j.value("score_floor", cfg.score_floor);
        cfg.max_condition = j.value("max_condition", cfg.max_condition);
        const std::string mode = j.value("constraints", std::string("mean_and_derivative"));
        if (mode == "mean_only") {
            cfg.constraints = PoincareConstraints::MeanOnly;
        } else if (mode == "mean_and_derivative") {
            cfg.constraints = PoincareConstraints::MeanAndDerivative;
        } else {
            fail(ErrorKind::InvalidSpec, "unknown constraints '" + mode + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("malformed solver config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const SolverConfig& cfg) {
    return {{"resolution", cfg.resolution},
            {"score_floor", cfg.score_floor},
            {"max_condition", cfg.max_condition},
            {"constraints", cfg.constraints == PoincareConstraints::MeanOnly ? "mean_only" : "mean_and_derivative"}};
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

void scale(Vec& x, double s) {
    for (double& v : x) {
        v *= s;
    }
}

// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
    Vec diag;
    Vec off;

    Vec apply(const Vec& x) const {
        const std::size_t n = diag.size();
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += off[i - 1] * x[i - 1];
            if (i + 1 < n) v += off[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }
};

// Thomas factorization of an SPD tridiagonal matrix.
class TridiagonalSolver {
public:
    explicit TridiagonalSolver(const Tridiagonal& t) : off_(t.off), pivot_(t.diag.size()) {
        const std::size_t n = t.diag.size();
        pivot_[0] = t.diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            pivot_[i] = t.diag[i] - off_[i - 1] * off_[i - 1] / pivot_[i - 1];
        }
        for (double p : pivot_) {
            if (!(p > 0.0) || !std::isfinite(p)) {
                fail(ErrorKind::SolverFailure, "shifted stiffness matrix is not positive definite");
            }
        }
    }

    Vec solve(const Vec& b) const {
        const std::size_t n = pivot_.size();
        Vec y(b);
        for (std::size_t i = 1; i < n; ++i) {
            y[i] -= off_[i - 1] / pivot_[i - 1] * y[i - 1];
        }
        Vec x(n);
        x[n - 1] = y[n - 1] / pivot_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            x[i] = (y[i] - off_[i] * x[i + 1]) / pivot_[i];
        }
        return x;
    }

private:
    Vec off_;
    Vec pivot_;
};

// x -> B^{-1} x restricted to the orthogonal complement of span(Q): the
// solution of B x = b + Q mu with Q^T x = 0.
class ConstrainedInverse {
public:
    ConstrainedInverse(const TridiagonalSolver& solver, std::vector<Vec> q) : solver_(solver), q_(std::move(q)) {
        const std::size_t k = q_.size();
        gram_ = Eigen::MatrixXd(k, k);
        for (const Vec& qi : q_) {
            z_.push_back(solver_.solve(qi));
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                gram_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dot(q_[i], z_[j]);
            }
        }
        gram_inv_ = gram_.inverse();
    }

    Vec apply(const Vec& b) const {
        Vec x = solver_.solve(b);
        const std::size_t k = q_.size();
        Eigen::VectorXd qz(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            qz(static_cast<Eigen::Index>(i)) = dot(q_[i], x);
        }
        const Eigen::VectorXd alpha = gram_inv_ * qz;
        for (std::size_t i = 0; i < k; ++i) {
            axpy(-alpha(static_cast<Eigen::Index>(i)), z_[i], x);
        }
        project(x);
        return x;
    }

    void project(Vec& x) const {
        for (const Vec& qi : q_) {
            axpy(-dot(qi, x), qi, x);
        }
    }

private:
    const TridiagonalSolver& solver_;
    std::vector<Vec> q_;
    std::vector<Vec> z_;
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd gram_inv_;
};

struct Ritz {
    double theta;
    Vec vector;
};

// Largest eigenpair of the symmetric operator `op` by Lanczos with full
// reorthogonalization.
template <class Op>
Ritz lanczos_top(const Op& op, Vec start, std::size_t max_iter) {
    std::vector<Vec> basis;
    Vec alpha;
    Vec beta;
    scale(start, 1.0 / norm(start));
    basis.push_back(std::move(start));

    Eigen::VectorXd best_s;
    double best_theta = 0.0;
    for (std::size_t j = 0; j < max_iter; ++j) {
        Vec w = op(basis[j]);
        alpha.push_back(dot(basis[j], w));
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& v : basis) {
                axpy(-dot(v, w), v, w);
            }
        }
        const double b = norm(w);

        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        best_theta = es.eigenvalues()(m - 1);
        best_s = es.eigenvectors().col(m - 1);
        const double estimate = b * std::abs(best_s(m - 1));
        if (estimate <= 1e-14 * std::abs(best_theta) || b <= 1e-300) {
            break;
        }
        beta.push_back(b);
        scale(w, 1.0 / b);
        basis.push_back(std::move(w));
    }

    Vec y(basis[0].size(), 0.0);
    for (Eigen::Index i = 0; i < best_s.size(); ++i) {
        axpy(best_s(i), basis[static_cast<std::size_t>(i)], y);
    }
    return {best_theta, std::move(y)};
}

PoincareEstimate solve(const GridDensity& d, const SolverConfig& cfg) {
    const auto f = d.values();
    const double h = d.grid_step();
    const double cut = cfg.score_floor * d.max_value();
    std::size_t lo = 0;
    std::size_t hi = f.size() - 1;
    while (lo < f.size() && f[lo] < cut) ++lo;
    while (hi > lo && f[hi] < cut) --hi;
    const std::size_t n = hi - lo + 1;
    if (n < 8) {
        fail(ErrorKind::SolverFailure, "support of '" + d.label() + "' spans fewer than 8 nodes");
    }

    Vec m(n);
    Vec k(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = h * detail::trap_weight(i, n) * f[lo + i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        k[i] = 0.5 * (f[lo + i] + f[lo + i + 1]) / h;
    }
    const auto [mmin, mmax] = std::minmax_element(m.begin(), m.end());
    if (!(*mmin > 0.0) || *mmax / *mmin > cfg.max_condition) {
        std::ostringstream os;
        os << "lumped mass ratio " << (*mmin > 0.0 ? *mmax / *mmin : INFINITY) << " exceeds "
           << cfg.max_condition << " for '" << d.label() << "'";
        fail(ErrorKind::IllConditioned, os.str());
    }

    Vec rs(n);  // M^{-1/2}
    for (std::size_t i = 0; i < n; ++i) {
        rs[i] = 1.0 / std::sqrt(m[i]);
    }
    Tridiagonal a{Vec(n, 0.0), Vec(n - 1)};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.diag[i] += k[i] * rs[i] * rs[i];
        a.diag[i + 1] += k[i] * rs[i + 1] * rs[i + 1];
        a.off[i] = -k[i] * rs[i] * rs[i + 1];
    }

    // Constraint functionals: c1 . g = int f g, c2 . g = int f g'.
    Vec c1 = m;
    Vec c2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double avg = 0.5 * (f[lo + i] + f[lo + i + 1]);
        c2[i] -= avg;
        c2[i + 1] += avg;
    }
    const auto to_y = [&](const Vec& c) {
        Vec q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = c[i] * rs[i];
        return q;
    };
    std::vector<Vec> q;
    q.push_back(to_y(c1));
    scale(q[0], 1.0 / norm(q[0]));
    if (cfg.constraints == PoincareConstraints::MeanAndDerivative) {
        Vec q2 = to_y(c2);
        for (int pass = 0; pass < 2; ++pass) axpy(-dot(q[0], q2), q[0], q2);
        scale(q2, 1.0 / norm(q2));
        q.push_back(std::move(q2));
    }

    const Moments mo = moments(d);
    const double sigma = 1.0 / mo.variance;
    Tridiagonal b = a;
    for (double& v : b.diag) v += sigma;
    const TridiagonalSolver solver(b);
    const ConstrainedInverse op(solver, q);

    std::mt19937_64 rng(0x5eed5eedULL);
    Vec start(n);
    for (double& v : start) {
        v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    }
    op.project(start);

    Ritz top = lanczos_top([&](const Vec& x) { return op.apply(x); }, std::move(start),
                           std::min<std::size_t>(n - q.size(), 400));
    // Power steps damp the high-frequency error that A amplifies in the residual.
    Vec y = std::move(top.vector);
    for (int it = 0; it < 3; ++it) {
        y = op.apply(y);
        scale(y, 1.0 / norm(y));
    }

    Vec ay = a.apply(y);
    const double lambda = dot(y, ay);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        fail(ErrorKind::SolverFailure, "constrained spectral bottom is not positive for '" + d.label() + "'");
    }
    Vec r = ay;
    op.project(r);
    axpy(-lambda, y, r);

    PoincareEstimate est;
    est.value = 1.0 / lambda;
    est.eigen_residual = norm(r) / lambda;
    est.resolution = d.size();
    est.grid_start = d.grid_start();
    est.grid_step = h;

    // g = M^{-1/2} y with ||g||_M = ||y|| = 1.
    est.eigenfunction.assign(d.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        est.eigenfunction[lo + i] = y[i] * rs[i];
    }
    const auto dual = [&](const Vec& c) { return norm(to_y(c)); };
    Vec g(est.eigenfunction.begin() + static_cast<long>(lo), est.eigenfunction.begin() + static_cast<long>(hi + 1));
    est.constraint_residuals = {std::abs(dot(c1, g)) / dual(c1), std::abs(dot(c2, g)) / dual(c2)};

    if (!(est.eigen_residual < 1e-8)) {
        std::ostringstream os;
        os << "eigenpair residual " << est.eigen_residual << " for '" << d.label() << "' exceeds 1e-8";
        fail(ErrorKind::SolverFailure, os.str());
    }
    const std::size_t enforced = q.size();
    for (std::size_t i = 0; i < enforced; ++i) {
        if (!(est.constraint_residuals[i] < 1e-8)) {
            std::ostringstream os;
            os << "constraint residual " << est.constraint_residuals[i] << " for '" << d.label() << "' exceeds 1e-8";
            fail(ErrorKind::SolverFailure, os.str());
        }
    }
    return est;
}

}  // namespace

PoincareEstimate restricted_poincare(const GridDensity& d, const SolverConfig& cfg) {
    cfg.validate();
    if (cfg.resolution == 0 || cfg.resolution == d.size()) {
        return solve(d, cfg);
    }
    GridConfig grid;
    grid.num_points = cfg.resolution;
    return solve(affine_transform(d, 1.0, 0.0, grid), cfg);
}

InequalityReport poincare_scaling_check(const GridDensity& d, double a, const SolverConfig& cfg) {
    if (a == 0.0 || !std::isfinite(a)) {
        fail(ErrorKind::InvalidSpec, "poincare_scaling_check needs a finite a != 0");
    }
    const double scaled = restricted_poincare(affine_transform(d, a, 0.0), cfg).value;
    const double base = a * a * restricted_poincare(d, cfg).value;
    char name[64];
    std::snprintf(name, sizeof name, "poincare_scaling[a=%g]", a);
    return make_eq(name, scaled, base, 1e-2 * std::max(std::abs(scaled), std::abs(base)),
                   inputs_digest({&d}, {a}));
}

InequalityReport convolution_stability_check(const GridDensity& dX, const GridDensity& dY, double lambda,
                                             const SolverConfig& cfg) {
    const double rx = restricted_poincare(dX, cfg).value;
    const double ry = restricted_poincare(dY, cfg).value;
    const double rs = restricted_poincare(scaled_sum_density(dX, dY, lambda), cfg).value;
    const double bound = std::max(rx, ry);
    return make_leq("poincare_convolution_stability", rs, bound, 1e-2 * bound, inputs_digest({&dX, &dY}, {lambda}));
}

}  // namespace entlab
