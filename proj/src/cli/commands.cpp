#include "entlab/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "entlab/clt.hpp"
#include "entlab/convolution.hpp"
#include "entlab/distribution.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"
#include "entlab/inequalities.hpp"
#include "entlab/poincare.hpp"

namespace entlab::cli {

namespace {

using ojson = nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SolverFailure:
        case ErrorKind::IllConditioned:
            return kSolverError;
        default:
            return kInputError;
    }
}

/// Runs `body`, mapping library and JSON errors onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const LabError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        err << "error: InvalidSpec: " << e.what() << '\n';
        return kInputError;
    }
}

std::string label_of(const DistributionSpec& spec) { return spec.label.empty() ? spec.family() : spec.label; }

GridDensity load_centered(const std::string& path, const GridConfig& grid) {
    const GridDensity d = materialize(load_spec(path), grid);
    return affine_transform(d, 1.0, -moments(d).mean, grid);
}

std::string tagged(const char* base, const char* key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s[%s=%g]", base, key, v);
    return buf;
}

void apply_tolerance(std::vector<InequalityReport>& reports, double tol) {
    for (auto& r : reports) {
        const bool margin_ok_before = std::isfinite(r.margin) && r.margin >= -r.tolerance;
        const bool other_ok = r.pass || !margin_ok_before;
        r.tolerance = tol;
        r.pass = std::isfinite(r.margin) && r.margin >= -tol && other_ok;
    }
}

std::size_t count_failures(const std::vector<InequalityReport>& reports) {
    std::size_t n = 0;
    for (const auto& r : reports) {
        n += r.counts_as_failure() ? 1 : 0;
    }
    return n;
}

void append(std::vector<InequalityReport>& out, std::vector<InequalityReport> more) {
    for (auto& r : more) {
        out.push_back(std::move(r));
    }
}

void epi_eji(std::vector<InequalityReport>& out, const GridDensity& dX, const GridDensity& dY) {
    out.push_back(check_epi(dX, dY));
    out.push_back(check_eji(dX, dY));
}

void fisher_sandwich(std::vector<InequalityReport>& out, const GridDensity& dX, const GridDensity& dY,
                     std::optional<double> R, bool iid) {
    auto [lower, upper] = check_fisher_sandwich(dX, dY, R);
    out.push_back(std::move(lower));
    out.push_back(std::move(upper));
    if (iid) {
        out.push_back(check_iid_fisher(dX));
    }
}

void jump(std::vector<InequalityReport>& out, const GridDensity& dX, const GridDensity& dY, std::optional<double> R,
          bool iid) {
    out.push_back(check_entropy_jump(dX, dY, R));
    append(out, check_fisher_jump(dX, dY, R));
    if (iid && std::abs(moments(dX).variance - 1.0) <= 1e-4) {
        out.push_back(check_iid_jump_ball(dX));
    }
}

void debruijn(std::vector<InequalityReport>& out, const GridDensity& d) {
    const std::string digest = inputs_digest({&d});
    for (double t : {0.2, 0.5, 1.0}) {
        const DeBruijnResidual r = de_bruijn_residual(d, t, 1e-3);
        auto rep = make_eq(tagged("debruijn_residual", "t", t), r.entropy_derivative, r.half_fisher, 1e-3, digest);
        rep.note = d.label();
        out.push_back(std::move(rep));
    }
    const double var = moments(d).variance;
    if (var >= 0.1 && var <= 10.0) {
        const IntegratedEntropy ie = integrated_debruijn_entropy(d);
        auto rep = make_eq("debruijn_integrated_entropy", ie.value, entropy(d), 1e-3, digest);
        rep.note = d.label();
        if (ie.truncation_warning) {
            rep.note += "; integrand not negligible at s_max";
        }
        out.push_back(std::move(rep));
    }
}

void lemmas(std::vector<InequalityReport>& out, const GridDensity& dX, const GridDensity& dY) {
    auto [conditional, identity] = check_score_projection(dX, dY);
    out.push_back(std::move(conditional));
    out.push_back(std::move(identity));
    for (TestFunction f : {TestFunction::Negation, TestFunction::CubicClipped, TestFunction::Zero}) {
        out.push_back(check_projection_pythagoras(dX, dY, f, f));
    }
    append(out, check_compute_identities(dX, dY));
    out.push_back(check_poincare_lower_bound(dX, dY));
    const std::string digest = inputs_digest({&dX, &dY});
    try {
        const JumpQuantities q = ab_diagnostics(dX, dY);
        out.push_back(make_leq("projection_ratio", q.A_prime, q.A, 1e-8, digest));
    } catch (const LabError& e) {
        if (e.kind() != ErrorKind::DegenerateDenominator) {
            throw;
        }
        auto rep = make_leq("projection_ratio", 0.0, 0.0, 1e-8, digest);
        rep.informational = true;
        rep.note = "A vanishes: Gaussian equality case";
        out.push_back(std::move(rep));
    }
}

void poincare_laws(std::vector<InequalityReport>& out, const GridDensity& dX, const GridDensity& dY, bool iid) {
    for (double a : {0.5, 2.0, 3.0}) {
        out.push_back(poincare_scaling_check(dX, a));
        out.back().note = dX.label();
        if (!iid) {
            out.push_back(poincare_scaling_check(dY, a));
            out.back().note = dY.label();
        }
    }
    out.push_back(convolution_stability_check(dX, dY, 1.0 / std::numbers::sqrt2));
}

ojson report_array(const std::vector<InequalityReport>& reports) {
    ojson arr = ojson::array();
    for (const auto& r : reports) {
        arr.push_back(ojson::parse(to_json(r).dump()));
    }
    return arr;
}

}  // namespace

GridConfig RunConfig::grid() const {
    GridConfig c;
    if (num_points) c.num_points = *num_points;
    if (half_width_sigmas) c.half_width_sigmas = *half_width_sigmas;
    c.validate();
    return c;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"all",   "epi-eji", "fisher-sandwich", "jump",
                                                "debruijn", "lemmas", "poincare-laws"};
    return names;
}

std::vector<InequalityReport> run_suite(const std::string& suite, const GridDensity& dX, const GridDensity& dY,
                                        std::optional<double> poincare_r) {
    const bool iid = density_digest(dX) == density_digest(dY);
    const bool all = suite == "all";
    bool known = all;
    std::vector<InequalityReport> out;
    if (all || suite == "epi-eji") {
        known = true;
        epi_eji(out, dX, dY);
    }
    if (all || suite == "fisher-sandwich") {
        known = true;
        fisher_sandwich(out, dX, dY, poincare_r, iid);
    }
    if (all || suite == "jump") {
        known = true;
        jump(out, dX, dY, poincare_r, iid);
    }
    if (all || suite == "debruijn") {
        known = true;
        debruijn(out, dX);
        if (!iid) {
            debruijn(out, dY);
        }
    }
    if (all || suite == "lemmas") {
        known = true;
        lemmas(out, dX, dY);
    }
    if (all || suite == "poincare-laws") {
        known = true;
        poincare_laws(out, dX, dY, iid);
    }
    if (!known) {
        fail(ErrorKind::InvalidSpec, "unknown suite '" + suite + "'");
    }
    return out;
}

int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.spec_paths.size() != 1) {
            fail(ErrorKind::InvalidSpec, "compute takes exactly one --spec");
        }
        const DistributionSpec spec = load_spec(cfg.spec_paths[0]);
        const GridDensity d = materialize(spec, cfg.grid());
        ojson result{{"label", label_of(spec)}, {"functional", cfg.functional}};
        ojson diag{{"grid_points", d.size()}, {"grid_start", d.grid_start()}, {"grid_step", d.grid_step()}};
        if (cfg.functional == "entropy") {
            result["value"] = entropy(d);
        } else if (cfg.functional == "fisher") {
            result["value"] = fisher_information(d);
        } else if (cfg.functional == "poincare") {
            const PoincareEstimate est = restricted_poincare(d);
            result["value"] = est.value;
            diag["eigen_residual"] = est.eigen_residual;
            diag["constraint_residuals"] = {est.constraint_residuals[0], est.constraint_residuals[1]};
            diag["resolution"] = est.resolution;
        } else if (cfg.functional == "moments") {
            const Moments mo = moments(d);
            result["value"] = {{"mean", mo.mean}, {"variance", mo.variance}};
        } else {
            fail(ErrorKind::InvalidSpec, "unknown functional '" + cfg.functional + "'");
        }
        result["diagnostics"] = diag;
        out << result.dump() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.spec_paths.empty() || cfg.spec_paths.size() > 2) {
            fail(ErrorKind::InvalidSpec, "verify takes one or two --spec");
        }
        const GridConfig grid = cfg.grid();
        const GridDensity dX = load_centered(cfg.spec_paths[0], grid);
        const GridDensity dY = cfg.spec_paths.size() == 2 ? load_centered(cfg.spec_paths[1], grid) : dX;
        auto reports = run_suite(cfg.suite, dX, dY, cfg.poincare_r);
        if (cfg.tolerance) {
            apply_tolerance(reports, *cfg.tolerance);
        }
        if (cfg.out.empty()) {
            write_json_lines(out, reports);
        } else {
            std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
            if (!file) {
                fail(ErrorKind::IoFailure, "cannot write '" + cfg.out + "'");
            }
            write_json_lines(file, reports);
            file.flush();
            if (!file) {
                fail(ErrorKind::IoFailure, "write to '" + cfg.out + "' failed");
            }
        }
        const std::size_t failures = count_failures(reports);
        err << reports.size() << " reports, " << failures << " failing\n";
        return static_cast<int>(failures == 0 ? kOk : kReportFailed);
    });
}

int cmd_clt(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.spec_paths.size() != 1) {
            fail(ErrorKind::InvalidSpec, "clt takes exactly one --spec (a sequence spec)");
        }
        if (cfg.out.empty()) {
            fail(ErrorKind::InvalidSpec, "clt needs --out for the trace CSV");
        }
        const SequenceSpec seq = load_sequence(cfg.spec_paths[0]);
        const GridConfig grid = cfg.grid();
        const bool doubling = cfg.mode == "doubling";
        if (!doubling && cfg.mode != "plain") {
            fail(ErrorKind::InvalidSpec, "unknown mode '" + cfg.mode + "'");
        }
        const CltTrace trace = doubling ? run_doubling(seq, cfg.levels, grid) : run_plain_sum(seq, cfg.n_max, grid);
        export_csv(trace, cfg.out);

        std::vector<InequalityReport> checks = trace_invariant_checks(trace);
        bool equal_variance = true;
        for (double v : trace.constituent_variance) {
            equal_variance = equal_variance && std::abs(v - trace.sigma_sq) <= 1e-4;
        }
        if (doubling) {
            if (equal_variance) {
                append(checks, geometric_rate_check(trace, trace.sigma_sq, trace.R));
            }
        } else {
            const double m = std::min(trace.sigma_sq, 1.0);
            append(checks, subadditive_rate_bound(trace, 2.0 * trace.R / (m + 2.0 * trace.R)));
            checks.push_back(entropy_convergence_iff_check(trace));
            if (trace.rows.size() >= 2) {
                checks.push_back(
                    make_leq("kl_trend", trace.rows.back().kl, trace.rows[1].kl, 1e-8, trace.inputs_digest));
            }
        }
        if (cfg.tolerance) {
            apply_tolerance(checks, *cfg.tolerance);
        }
        const std::size_t failures = count_failures(checks);
        ojson summary{{"mode", doubling ? "doubling" : "plain"},
                      {"rows", trace.rows.size()},
                      {"R", trace.R},
                      {"sigma_sq", trace.sigma_sq},
                      {"final_kl", trace.rows.back().kl},
                      {"final_l1", trace.rows.back().l1},
                      {"failing", failures},
                      {"checks", report_array(checks)}};
        out << summary.dump() << '\n';
        return static_cast<int>(failures == 0 ? kOk : kReportFailed);
    });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "compute") return cmd_compute(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "clt") return cmd_clt(cfg, out, err);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kInputError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entropy, Fisher information and Poincare constant laboratory"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::optional<std::size_t> points;
    std::optional<double> half_width;
    std::optional<double> tolerance;

    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--spec", cfg.spec_paths, "Distribution (or sequence) spec JSON; repeatable")->required();
        sub->add_option("--grid-points", points, "Grid points, a power of two >= 16");
        sub->add_option("--half-width", half_width, "Grid half-width in standard deviations (>= 6)");
    };

    CLI::App* compute = app.add_subcommand("compute", "Evaluate one functional of one distribution");
    add_grid(compute);
    compute->add_option("--functional", cfg.functional, "entropy, fisher, poincare or moments")
        ->check(CLI::IsMember({"entropy", "fisher", "poincare", "moments"}));

    CLI::App* verify = app.add_subcommand("verify", "Run an inequality suite and write JSON-lines reports");
    add_grid(verify);
    verify->add_option("--suite", cfg.suite, "Suite name")->check(CLI::IsMember(suite_names()));
    verify->add_option("--out", cfg.out, "Report file (default: standard output)");
    verify->add_option("--tolerance", tolerance, "Tolerance applied to every report");
    verify->add_option("--poincare-r", cfg.poincare_r, "Poincare constant for the sandwich and jump checks");

    CLI::App* clt = app.add_subcommand("clt", "Run a CLT experiment and export its trace as CSV");
    add_grid(clt);
    clt->add_option("--mode", cfg.mode, "doubling or plain")->check(CLI::IsMember({"doubling", "plain"}));
    clt->add_option("--levels", cfg.levels, "Doubling levels (1-20)");
    clt->add_option("--n-max", cfg.n_max, "Largest n for plain sums (1-4096)");
    clt->add_option("--out", cfg.out, "Trace CSV path")->required();
    clt->add_option("--tolerance", tolerance, "Tolerance applied to every check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.num_points = points;
    cfg.half_width_sigmas = half_width;
    cfg.tolerance = tolerance;
    return run(cfg, out, err);
}

}  // namespace entlab::cli
