// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entlab/cli/commands.hpp"
#include "entlab/clt.hpp"
#include "entlab/convolution.hpp"
#include "entlab/distribution.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"
#include "entlab/inequalities.hpp"
#include "entlab/poincare.hpp"

#include "oracles.hpp"

using namespace entlab;

namespace {

const double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

/// Collects failed conditions of one criterion.
class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    [[nodiscard]] bool passed() const { return failures_.empty(); }
    [[nodiscard]] std::string summary() const {
        std::string s;
        const auto& items = failures_.empty() ? notes_ : failures_;
        for (std::size_t i = 0; i < items.size() && i < 4; ++i) {
            s += (i ? "; " : "") + items[i];
        }
        if (items.size() > 4) s += "; +" + std::to_string(items.size() - 4) + " more";
        return s;
    }

private:
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, const std::string& s, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, s.c_str(), a);
    return buf;
}

GridDensity gauss(double v) { return materialize(DistributionSpec::gaussian(0.0, v)); }
GridDensity unit_laplace() { return materialize(DistributionSpec::laplace(0.0, std::sqrt(0.5))); }
GridDensity unit_su() {
    const double a = std::sqrt(3.0 * 0.99);
    return materialize(DistributionSpec::smoothed_uniform(-a, a, 0.01));
}
GridDensity unit_mixture() {
    const double m = std::sqrt(0.8);
    return materialize(DistributionSpec::mixture({0.5, 0.5}, {-m, m}, {0.2, 0.2}));
}
GridDensity skew_mixture() {
    return center(materialize(DistributionSpec::mixture({0.3, 0.7}, {-1.0, 0.5}, {0.5, 0.3})));
}

struct Pair {
    std::string name;
    GridDensity x;
    GridDensity y;
};

std::vector<Pair> battery() {
    return {
        {"gauss-gauss", gauss(1.0), gauss(1.0)},
        {"laplace-laplace", unit_laplace(), unit_laplace()},
        {"su-su", unit_su(), unit_su()},
        {"mixture-mixture", unit_mixture(), unit_mixture()},
        {"laplace-gauss", unit_laplace(), gauss(1.0)},
        {"su-mixture", unit_su(), unit_mixture()},
        {"gauss0.5-gauss1.5", gauss(0.5), gauss(1.5)},
        {"skewmix-laplace", skew_mixture(), unit_laplace()},
    };
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void gaussian_analytic(Check& c) {
    double worst_h = 0.0;
    double worst_j = 0.0;
    for (double v : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const GridDensity d = gauss(v);
        worst_h = std::max(worst_h, rel(entropy(d), 0.5 * std::log(kTwoPiE * v)));
        worst_j = std::max(worst_j, rel(fisher_information(d), 1.0 / v));
    }
    c.require(worst_h < 1e-4, fmt("entropy rel err %.3g", worst_h));
    c.require(worst_j < 1e-4, fmt("fisher rel err %.3g", worst_j));
    c.note(fmt("max rel err h %.2g", worst_h) + fmt(", J %.2g", worst_j));
}

void restricted_poincare_gaussian(Check& c) {
    const double oracle = oracles::hermite_poincare(1.0, true);
    const double value = restricted_poincare(gauss(1.0)).value;
    c.require(std::abs(value - oracle) < 1e-3, fmt("R* = %.8g", value));
    c.note(fmt("R* = %.8g", value) + fmt(" vs oracle %.6g", oracle));
    for (double a : {0.5, 2.0, 3.0}) {
        const InequalityReport r = poincare_scaling_check(gauss(1.0), a);
        c.require(r.pass, fmt("scaling a=%g", a) + fmt(" rel %.3g", rel(r.lhs, r.rhs)));
    }
}

void fisher_sandwich(Check& c) {
    const auto pairs = battery();
    for (const Pair& p : pairs) {
        const auto [lo, hi] = check_fisher_sandwich(p.x, p.y);
        c.require(lo.pass, fmt("%s lower margin %.3g", p.name, lo.margin));
        c.require(hi.pass, fmt("%s upper margin %.3g", p.name, hi.margin));
        if (p.name == "gauss-gauss") {
            c.require(std::abs(lo.margin) < 1e-5 && std::abs(hi.margin) < 1e-5,
                      fmt("%s equality margin %.3g", p.name, std::max(std::abs(lo.margin), std::abs(hi.margin))));
        }
    }
    c.note(std::to_string(pairs.size()) + " pairs");
}

void entropy_jump(Check& c) {
    const auto pairs = battery();
    for (const Pair& p : pairs) {
        const InequalityReport r = check_entropy_jump(p.x, p.y);
        c.require(r.pass, fmt("%s margin %.3g", p.name, r.margin));
        if (p.name == "gauss-gauss") {
            c.require(std::abs(r.lhs) < 1e-6 && std::abs(r.rhs) < 1e-6,
                      fmt("%s sides %.3g", p.name, std::max(std::abs(r.lhs), std::abs(r.rhs))));
        }
    }
    c.note(std::to_string(pairs.size()) + " pairs");
}

void de_bruijn(Check& c) {
    double worst = 0.0;
    for (const GridDensity& d : {unit_laplace(), unit_su(), unit_mixture()}) {
        for (double t : {0.2, 0.5, 1.0}) {
            const double res = de_bruijn_residual(d, t, 1e-3).residual;
            worst = std::max(worst, res);
            c.require(res < 1e-3, fmt("%s t residual %.3g", d.label(), res));
        }
    }
    // Unit-variance Laplace has scale 1/sqrt 2 and entropy 1 + ln(2 b).
    const double closed = 1.0 + std::log(2.0 / std::numbers::sqrt2);
    const double integrated = integrated_debruijn_entropy(unit_laplace()).value;
    c.require(std::abs(integrated - closed) < 1e-3, fmt("integrated entropy error %.3g", integrated - closed));
    c.note(fmt("max residual %.2g", worst) + fmt(", integrated error %.2g", std::abs(integrated - closed)));
}

void lemma_suite(Check& c) {
    const std::vector<Pair> pairs = {
        {"laplace-laplace", unit_laplace(), unit_laplace()},
        {"su-su", unit_su(), unit_su()},
        {"mixture-mixture", unit_mixture(), unit_mixture()},
        {"laplace-gauss", unit_laplace(), gauss(1.0)},
        {"su-mixture", unit_su(), unit_mixture()},
    };
    double slowest = 0.0;
    for (const Pair& p : pairs) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto [cond, gap] = check_score_projection(p.x, p.y);
        c.require(cond.lhs < 1e-3, fmt("%s conditional sup %.3g", p.name, cond.lhs));
        c.require(rel(gap.lhs, gap.rhs) < 1e-3, fmt("%s gap rel %.3g", p.name, rel(gap.lhs, gap.rhs)));
        for (const InequalityReport& r : check_compute_identities(p.x, p.y)) {
            const double err = std::abs(r.lhs - r.rhs);
            c.require(err < 1e-3 * (1.0 + std::abs(r.rhs)), fmt("%s identity err %.3g", p.name + " " + r.name, err));
        }
        for (TestFunction h : {TestFunction::Negation, TestFunction::CubicClipped, TestFunction::Zero}) {
            const InequalityReport r = check_projection_pythagoras(p.x, p.y, h, h);
            c.require(rel(r.lhs, r.rhs) < 1e-3, fmt("%s pythagoras rel %.3g", p.name + " " + to_string(h),
                                                    rel(r.lhs, r.rhs)));
        }
        const InequalityReport lb = check_poincare_lower_bound(p.x, p.y);
        c.require(lb.pass, fmt("%s lower bound margin %.3g", p.name, lb.margin));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        c.require(secs < 60.0, fmt("%s took %.1f s", p.name, secs));
    }
    c.note(std::to_string(pairs.size()) + fmt(" pairs, slowest %.2f s", slowest));
}

void doubling_clt(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const CltTrace t = run_doubling(SequenceSpec::iid(DistributionSpec::laplace(0.0, std::sqrt(0.5))), 8);
    const auto rate = geometric_rate_check(t, t.sigma_sq, t.R);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(t.rows.size() == 9, "expected 9 rows");
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        c.require(t.rows[i].kl < t.rows[i - 1].kl, "kl not decreasing at level " + std::to_string(i));
    }
    for (const auto& r : rate) c.require(r.pass, fmt("%s margin %.3g", r.name, r.margin));
    for (const CltRow& row : t.rows) {
        c.require(row.l1 * row.l1 <= 2.0 * row.kl, "pinsker at level " + std::to_string(row.level_or_n));
    }
    c.require(t.rows.back().kl < 1e-3, fmt("final kl %.3g", t.rows.back().kl));
    c.require(t.rows.back().l1 < 0.05, fmt("final l1 %.3g", t.rows.back().l1));
    c.require(secs < 10.0, fmt("took %.1f s", secs));
    c.note(fmt("kl %.3g", t.rows.front().kl) + fmt(" -> %.3g", t.rows.back().kl) +
           fmt(", final l1 %.3g", t.rows.back().l1) + fmt(", R %.4g", t.R));
}

void plain_sum_chain(Check& c) {
    const CltTrace t = run_plain_sum(SequenceSpec::iid(DistributionSpec::laplace(0.0, std::sqrt(0.5))), 64);
    const double m = std::min(t.sigma_sq, 1.0);
    const auto reps = subadditive_rate_bound(t, 2.0 * t.R / (m + 2.0 * t.R));
    for (long n : {4L, 8L, 16L, 32L, 64L}) {
        const std::string name = "subadditive_chain[" + std::to_string(n) + "]";
        bool found = false;
        for (const auto& r : reps) {
            if (r.name != name) continue;
            found = true;
            c.require(r.pass && r.tolerance <= 1e-6, fmt("%s margin %.3g", name, r.margin));
        }
        c.require(found, name + " missing");
    }
    // Trend: kl at powers of two decreases.
    for (long n = 2; n <= 64; n *= 2) {
        c.require(t.rows[n - 1].kl < t.rows[n / 2 - 1].kl, "kl not decreasing at n=" + std::to_string(n));
    }
    c.note(fmt("kl1 %.3g", t.rows[0].kl) + fmt(" -> kl64 %.3g", t.rows[63].kl));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs the full verify suite and both CLT modes into `dir`; returns stdout.
std::string full_run(const std::filesystem::path& dir) {
    const std::string specs = ENTLAB_SPECS_DIR;
    const std::vector<std::vector<std::string>> runs = {
        {"verify", "--suite", "all", "--spec", specs + "/laplace.json", "--spec", specs + "/smoothed_uniform.json",
         "--out", (dir / "reports_pair.jsonl").string()},
        {"verify", "--suite", "all", "--spec", specs + "/mixture.json", "--out", (dir / "reports_iid.jsonl").string()},
        {"clt", "--mode", "doubling", "--levels", "8", "--spec", specs + "/seq_laplace_iid.json", "--out",
         (dir / "doubling.csv").string()},
        {"clt", "--mode", "plain", "--n-max", "64", "--spec", specs + "/seq_laplace_iid.json", "--out",
         (dir / "plain.csv").string()},
    };
    std::ostringstream out;
    std::ostringstream err;
    for (auto args : runs) {
        args.insert(args.begin(), "entlab");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out << "exit " << cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err) << '\n';
    }
    return out.str();
}

void determinism(Check& c) {
    const auto base = std::filesystem::temp_directory_path() / "entlab_acceptance";
    const auto a = base / "run_a";
    const auto b = base / "run_b";
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(a);
    std::filesystem::create_directories(b);
    const std::string out_a = full_run(a);
    const std::string out_b = full_run(b);
    c.require(out_a == out_b, "standard output differs");
    std::size_t bytes = 0;
    for (const char* f : {"reports_pair.jsonl", "reports_iid.jsonl", "doubling.csv", "plain.csv"}) {
        const std::string x = slurp(a / f);
        c.require(!x.empty(), std::string(f) + " empty");
        c.require(x == slurp(b / f), std::string(f) + " differs");
        bytes += x.size();
    }
    std::filesystem::remove_all(base);
    c.note(std::to_string(bytes) + " bytes identical across 4 files");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"Gaussian entropy and Fisher closed forms", gaussian_analytic},
        {"restricted Poincare constant and scaling law", restricted_poincare_gaussian},
        {"Fisher information sandwich", fisher_sandwich},
        {"entropy jump lower bound", entropy_jump},
        {"de Bruijn identity and integrated entropy", de_bruijn},
        {"score projection identities", lemma_suite},
        {"doubling CLT geometric rate", doubling_clt},
        {"plain-sum subadditive chain", plain_sum_chain},
        {"deterministic reports", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s  %s (%.2f s) %s\n", i + 1, c.passed() ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), secs, c.summary().c_str());
        std::fflush(stdout);
        failed += c.passed() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
