#include "entlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/kernels.hpp"
#include "detail/pair.hpp"
#include "entlab/convolution.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"

namespace entlab {

namespace {

const double kHalfSqrt2 = 1.0 / std::numbers::sqrt2;
const double kGaussEntropy = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

void require_centered(const GridDensity& d) {
    const double m = moments(d).mean;
    if (std::abs(m) > 1e-6) {
        std::ostringstream os;
        os << "density '" << d.label() << "' has mean " << m << "; this check needs centered inputs";
        fail(ErrorKind::NonCenteredInput, os.str());
    }
}

GridDensity half_sum(const GridDensity& dX, const GridDensity& dY) {
    return scaled_sum_density(dX, dY, kHalfSqrt2);
}

// Supplied R, or the computed maximum; a supplied R more than 1% below the
// computed maximum is rejected.
double resolve_R(std::optional<double> supplied, double computed, const char* what) {
    if (!supplied) {
        return computed;
    }
    if (!(*supplied > 0.0) || *supplied < 0.99 * computed) {
        std::ostringstream os;
        os << what << ": R = " << *supplied << " is below the required " << computed;
        fail(ErrorKind::PreconditionViolation, os.str());
    }
    return *supplied;
}

double max_restricted(const GridDensity& dX, const GridDensity& dY, const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.constraints = PoincareConstraints::MeanAndDerivative;
    return std::max(restricted_poincare(dX, c).value, restricted_poincare(dY, c).value);
}

// Relative agreement with an absolute floor.
double eq_tolerance(double lhs, double rhs, double rel, double abs_floor) {
    return rel * std::max(std::abs(lhs), std::abs(rhs)) + abs_floor;
}

double test_function(TestFunction f, double x) {
    switch (f) {
        case TestFunction::Negation: return -x;
        case TestFunction::CubicClipped: {
            const double c = std::clamp(x, -5.0, 5.0);
            return c * c * c;
        }
        case TestFunction::Zero:
        case TestFunction::Projection: return 0.0;
    }
    return 0.0;
}

std::vector<double> doubled(const std::vector<double>& v) {
    std::vector<double> out(v);
    for (double& x : out) x *= 2.0;
    return out;
}

}  // namespace

InequalityReport check_epi(const GridDensity& dX, const GridDensity& dY) {
    const double hx = entropy(dX);
    const double hy = entropy(dY);
    const double hs = entropy(half_sum(dX, dY)) + 0.5 * std::log(2.0);
    const double lhs = std::exp(2.0 * hx) + std::exp(2.0 * hy);
    const double rhs = std::exp(2.0 * hs);
    return make_leq("epi", lhs, rhs, 1e-6 * rhs, inputs_digest({&dX, &dY}));
}

InequalityReport check_eji(const GridDensity& dX, const GridDensity& dY) {
    const double lhs = 0.5 * (entropy(dX) + entropy(dY));
    const double rhs = entropy(half_sum(dX, dY));
    return make_leq("eji", lhs, rhs, 1e-6, inputs_digest({&dX, &dY}));
}

std::pair<InequalityReport, InequalityReport> check_fisher_sandwich(const GridDensity& dX, const GridDensity& dY,
                                                                    std::optional<double> R,
                                                                    const SolverConfig& cfg) {
    require_centered(dX);
    require_centered(dY);
    const double r = resolve_R(R, max_restricted(dX, dY, cfg), "fisher sandwich");
    const double s2 = 0.5 * (moments(dX).variance + moments(dY).variance);
    const double j1 = 0.5 * (fisher_information(dX) + fisher_information(dY));
    const double j2 = fisher_information(half_sum(dX, dY));
    const double gap = j1 - j2;
    const double tol = 1e-4 * std::abs(j1);
    const std::string digest = inputs_digest({&dX, &dY}, {r});
    return {make_leq("fisher_sandwich_lower", (s2 * j1 - 1.0) / (s2 + 2.0 * r), gap, tol, digest),
            make_leq("fisher_sandwich_upper", gap, (s2 * j1 - 1.0) / s2, tol, digest)};
}

InequalityReport check_iid_fisher(const GridDensity& d, std::optional<double> Rstar, const SolverConfig& cfg) {
    const double r = resolve_R(Rstar, max_restricted(d, d, cfg), "iid fisher bound");
    const double var = moments(d).variance;
    const double lhs = fisher_information(half_sum(d, d));
    const double rhs = 2.0 * r / (var + 2.0 * r) * fisher_information(d);
    auto rep = make_leq("iid_fisher_bound", lhs, rhs, 1e-4 * std::abs(rhs), inputs_digest({&d}, {r}));
    rep.informational = true;
    rep.note = "quoted bound; fails at the Gaussian under the restricted constant";
    return rep;
}

double entropy_jump_constant(double var_x, double var_y, double R) {
    const double a = std::min({var_x, var_y, 1.0});
    return a / (a + 2.0 * R);
}

InequalityReport check_entropy_jump(const GridDensity& dX, const GridDensity& dY, std::optional<double> R,
                                    const SolverConfig& cfg) {
    require_centered(dX);
    require_centered(dY);
    const double r = resolve_R(R, std::max(max_restricted(dX, dY, cfg), 0.5), "entropy jump");
    const double vx = moments(dX).variance;
    const double vy = moments(dY).variance;
    const double mean_h = 0.5 * (entropy(dX) + entropy(dY));
    const double bracket =
        0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * 0.5 * (vx + vy)) - mean_h;
    const double jump = entropy(half_sum(dX, dY)) - mean_h;
    return make_leq("entropy_jump", entropy_jump_constant(vx, vy, r) * bracket, jump, 1e-5,
                    inputs_digest({&dX, &dY}, {r}));
}

InequalityReport check_iid_jump_ball(const GridDensity& d, std::optional<double> R, const SolverConfig& cfg) {
    const double var = moments(d).variance;
    if (std::abs(var - 1.0) > 1e-4) {
        std::ostringstream os;
        os << "iid entropy jump needs unit variance, got " << var;
        fail(ErrorKind::PreconditionViolation, os.str());
    }
    SolverConfig c = cfg;
    c.constraints = PoincareConstraints::MeanOnly;
    const double gap = 1.0 / restricted_poincare(d, c).value;
    double r = gap;
    if (R) {
        if (!(*R > 0.0) || *R > 1.01 * gap) {
            std::ostringstream os;
            os << "iid entropy jump: R = " << *R << " exceeds the spectral gap " << gap;
            fail(ErrorKind::PreconditionViolation, os.str());
        }
        r = *R;
    }
    const double h = entropy(d);
    const double lhs = r / (2.0 + 2.0 * r) * (kGaussEntropy - h);
    const double rhs = entropy(half_sum(d, d)) - h;
    return make_leq("iid_entropy_jump", lhs, rhs, 1e-5, inputs_digest({&d}, {r}));
}

std::pair<InequalityReport, InequalityReport> check_score_projection(const GridDensity& dX, const GridDensity& dY) {
    require_centered(dX);
    require_centered(dY);
    (void)score(dX);
    (void)score(dY);
    const detail::PairGrid pg(dX, dY);
    const std::string digest = inputs_digest({&dX, &dY});

    // (a) rho_{X+Y} against (f_X' * f_Y) / f_{X+Y}. Both scores use a
    // fourth-order stencil so that truncation error at steep edges stays well
    // below the comparison tolerance.
    const auto rho_x = detail::log_derivative4(pg.fx, pg.step);
    const auto numerator = pg.convolve_with_y(rho_x);
    const auto rho_s = detail::log_derivative4(pg.fs, pg.step);
    const double cut = 1e-9 * *std::max_element(pg.fs.begin(), pg.fs.end());
    double sup = 0.0;
    for (std::size_t k = 2; k + 2 < pg.fs.size(); ++k) {
        if (pg.fs[k] >= cut) {
            sup = std::max(sup, std::abs(numerator[k] / pg.fs[k] - rho_s[k]));
        }
    }
    auto conditional = make_leq("score_conditional_expectation", sup, 1e-3, 0.0, digest);

    // (b) Fisher gap against the projection residual.
    const double j1 = 0.5 * (fisher_information(dX) + fisher_information(dY));
    const double gap = j1 - fisher_information(half_sum(dX, dY));
    const double resid = 2.0 * pg.expect([&](std::size_t i, std::size_t j) {
        const double e = pg.rs[i + j] - 0.5 * (pg.rx[i] + pg.ry[j]);
        return e * e;
    });
    auto identity = make_eq("fisher_gap_identity", gap, resid, eq_tolerance(gap, resid, 1e-3, 1e-6), digest);
    return {conditional, identity};
}

TestFunction test_function_from_string(const std::string& name) {
    if (name == "negation") return TestFunction::Negation;
    if (name == "cubic_clipped") return TestFunction::CubicClipped;
    if (name == "zero") return TestFunction::Zero;
    if (name == "projection") return TestFunction::Projection;
    fail(ErrorKind::InvalidSpec, "unknown test function '" + name + "'");
}

std::string to_string(TestFunction f) {
    switch (f) {
        case TestFunction::Negation: return "negation";
        case TestFunction::CubicClipped: return "cubic_clipped";
        case TestFunction::Zero: return "zero";
        case TestFunction::Projection: return "projection";
    }
    return "unknown";
}

InequalityReport check_projection_pythagoras(const GridDensity& dX, const GridDensity& dY, TestFunction h1,
                                             TestFunction h2) {
    (void)score(dX);
    (void)score(dY);
    const detail::PairGrid pg(dX, dY);
    const auto f = doubled(pg.rs);
    const auto g1 = pg.marginal_x(f);
    const auto g2 = pg.marginal_y(f);
    std::vector<double> v1(pg.size()), v2(pg.size());
    for (std::size_t i = 0; i < pg.size(); ++i) {
        v1[i] = h1 == TestFunction::Projection ? g1[i] : test_function(h1, pg.x(i));
        v2[i] = h2 == TestFunction::Projection ? g2[i] : test_function(h2, pg.x(i));
    }
    const double lhs = pg.expect([&](std::size_t i, std::size_t j) {
        const double e = f[i + j] - v1[i] - v2[j];
        return e * e;
    });
    const double core = pg.expect([&](std::size_t i, std::size_t j) {
        const double e = f[i + j] - g1[i] - g2[j];
        return e * e;
    });
    const double leg1 = pg.expect_x([&](std::size_t i) { return (g1[i] - v1[i]) * (g1[i] - v1[i]); });
    const double leg2 = pg.expect_y([&](std::size_t j) { return (g2[j] - v2[j]) * (g2[j] - v2[j]); });
    const double rhs = core + leg1 + leg2;
    auto rep = make_eq("projection_pythagoras[" + to_string(h1) + "," + to_string(h2) + "]", lhs, rhs,
                       eq_tolerance(lhs, rhs, 1e-3, 1e-8), inputs_digest({&dX, &dY}));
    return rep;
}

std::vector<InequalityReport> check_compute_identities(const GridDensity& dX, const GridDensity& dY) {
    require_centered(dX);
    require_centered(dY);
    const ScoreFunction sx = score(dX);
    (void)score(dY);
    const detail::PairGrid pg(dX, dY);
    const std::string digest = inputs_digest({&dX, &dY});
    const auto tol = [](double rhs) { return 1e-3 * (1.0 + std::abs(rhs)); };

    // One-dimensional expectations on X's own grid.
    const std::size_t n = dX.size();
    double x_rho = 0.0, x_plus_rho_sq = 0.0, rho_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = detail::trap_weight(i, n) * dX[i] * dX.grid_step();
        const double x = dX.x(i);
        const double r = sx.values[i];
        x_rho += w * x * r;
        x_plus_rho_sq += w * (x + r) * (x + r);
        rho_mean += w * r;
    }
    const double jx = fisher_information(dX);
    const double ex2 = moments(dX).variance;
    const double j_sum = 0.5 * fisher_information(half_sum(dX, dY));

    const auto f = doubled(pg.rs);
    const auto g1 = pg.marginal_x(f);
    const auto g2 = pg.marginal_y(f);
    const double half_g =
        0.5 * pg.expect_x([&](std::size_t i) { return g1[i] * pg.x(i); }) +
        0.5 * pg.expect_y([&](std::size_t j) { return g2[j] * pg.x(j); });
    const double cross = pg.expect([&](std::size_t i, std::size_t j) { return pg.rs[i + j] * pg.rx[i]; });
    const double g1_mean = pg.expect_x([&](std::size_t i) { return g1[i]; });

    return {
        make_eq("identity_x_score", x_rho, -1.0, tol(-1.0), digest),
        make_eq("identity_projected_x_score", half_g, -1.0, tol(-1.0), digest),
        make_eq("identity_sum_score_cross", cross, j_sum, tol(j_sum), digest),
        make_eq("identity_x_plus_score_square", x_plus_rho_sq, jx - 2.0 + ex2, tol(jx - 2.0 + ex2), digest),
        make_eq("identity_score_mean", rho_mean, 0.0, tol(0.0), digest),
        make_eq("identity_projected_score_mean", g1_mean, 0.0, tol(0.0), digest),
    };
}

InequalityReport check_poincare_lower_bound(const GridDensity& dX, const GridDensity& dY,
                                            std::optional<double> beta, const SolverConfig& cfg) {
    require_centered(dX);
    require_centered(dY);
    SolverConfig c = cfg;
    c.constraints = PoincareConstraints::MeanAndDerivative;
    const double rx = restricted_poincare(dX, c).value;
    const double ry = restricted_poincare(dY, c).value;
    const double b = beta.value_or(rx / (rx + ry));
    if (!(b >= 0.0 && b <= 1.0)) {
        fail(ErrorKind::InvalidSpec, "beta must lie in [0, 1]");
    }
    (void)score(dX);
    (void)score(dY);
    const detail::PairGrid pg(dX, dY);
    const auto f = doubled(pg.rs);
    const auto g1 = pg.marginal_x(f);
    const auto g2 = pg.marginal_y(f);
    const double jx = fisher_information(dX);
    const double jy = fisher_information(dY);
    const double mu = -fisher_information(half_sum(dX, dY));  // -2 J(X+Y)
    const double jbar = (1.0 - b) * jx + b * jy;

    const double lhs = pg.expect([&](std::size_t i, std::size_t j) {
        const double e = f[i + j] + pg.x(i) + pg.x(j);
        return e * e;
    });
    double rhs = 0.0;
    if (b > 0.0) {
        rhs += b / rx * pg.expect_x([&](std::size_t i) {
            const double e = g1[i] - mu * pg.x(i);
            return e * e;
        });
    }
    if (b < 1.0) {
        rhs += (1.0 - b) / ry * pg.expect_y([&](std::size_t j) {
            const double e = g2[j] - mu * pg.x(j);
            return e * e;
        });
    }
    rhs /= jbar;
    return make_geq("poincare_projection_lower_bound", lhs, rhs, 1e-3 * std::abs(rhs) + 1e-8,
                    inputs_digest({&dX, &dY}, {b, rx, ry}));
}

namespace {

JumpQuantities jump_quantities(const GridDensity& dX, const GridDensity& dY) {
    require_centered(dX);
    require_centered(dY);
    JumpQuantities q{};
    q.J1 = 0.5 * (fisher_information(dX) + fisher_information(dY));
    q.J2 = fisher_information(half_sum(dX, dY));
    q.sigma_sq = 0.5 * (moments(dX).variance + moments(dY).variance);
    q.A = q.J1 - 2.0 + q.sigma_sq;
    q.A_prime = q.J2 - 2.0 + q.sigma_sq;
    q.lambda_proj = std::abs(q.A) > 0.0 ? q.A_prime / q.A : 0.0;
    return q;
}

}  // namespace

JumpQuantities ab_diagnostics(const GridDensity& dX, const GridDensity& dY) {
    const JumpQuantities q = jump_quantities(dX, dY);
    if (std::abs(q.A) < 1e-8) {
        std::ostringstream os;
        os << "A = " << q.A << " vanishes (Gaussian equality case)";
        fail(ErrorKind::DegenerateDenominator, os.str());
    }
    return q;
}

std::vector<InequalityReport> check_fisher_jump(const GridDensity& dX, const GridDensity& dY,
                                                std::optional<double> R, const SolverConfig& cfg) {
    const JumpQuantities q = jump_quantities(dX, dY);
    const double r = resolve_R(R, max_restricted(dX, dY, cfg), "fisher jump");
    const std::string digest = inputs_digest({&dX, &dY}, {r});
    const double s = q.sigma_sq;
    const double tol = 1e-4 * std::abs(q.J1);

    std::vector<InequalityReport> out;
    out.push_back(make_leq("fisher_jump_bound", q.J2 - 1.0 / s, 2.0 * r / (s + 2.0 * r) * (q.J1 - 1.0 / s), tol,
                           digest));
    out.push_back(make_geq("cramer_rao_scaled_sum", q.J2 * s, 1.0, 1e-6, digest));
    if (std::abs(s - 1.0) <= 1e-4) {
        const double k = 2.0 * r / (1.0 + 2.0 * r);
        out.push_back(make_leq("fisher_jump_chain", q.A_prime, k * q.A, tol, digest));
        const double chain_margin = out.back().margin;
        out.push_back(make_geq("fisher_jump_chain_ratio_floor", q.A, q.A_prime, 1e-8, digest));
        out.push_back(make_eq("fisher_jump_chain_consistency", out[0].margin, chain_margin, tol, digest));
    }
    return out;
}

}  // namespace entlab
