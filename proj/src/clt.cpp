#include "entlab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <utility>

#include "detail/csv.hpp"
#include "entlab/convolution.hpp"
#include "entlab/error.hpp"
#include "entlab/functionals.hpp"
#include "entlab/inequalities.hpp"

namespace entlab {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;
constexpr const char* kCsvHeader = "level,variance,entropy,kl,l1,jump_observed,jump_lower_bound,geometric_bound";

std::vector<DistributionSpec> specs_from_array(const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) {
        fail(ErrorKind::InvalidSpec, where + " must be a non-empty array of distribution specs");
    }
    std::vector<DistributionSpec> out;
    for (const auto& item : arr) {
        out.push_back(spec_from_json(item));
    }
    return out;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::IoFailure, "cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, "malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

/// Materialized constituents of one period, centered on request.
struct Constituents {
    std::vector<GridDensity> densities;
    std::vector<double> variances;
    std::vector<double> poincare;
    double R = 0.5;
    double sigma_sq = 0.0;
    std::string digest;
};

Constituents build_constituents(const SequenceSpec& seq, const GridConfig& cfg, const SolverConfig& solver,
                                double extra_param) {
    Constituents c;
    std::string all;
    for (const auto& spec : seq.period()) {
        GridDensity d = materialize(spec, cfg);
        if (seq.enforce_zero_mean) {
            d = affine_transform(d, 1.0, -moments(d).mean, cfg);
        }
        const double v = moments(d).variance;
        const double r = restricted_poincare(d, solver).value;
        c.variances.push_back(v);
        c.poincare.push_back(r);
        c.R = std::max(c.R, r);
        all += density_digest(d);
        c.densities.push_back(std::move(d));
    }
    double sum = 0.0;
    for (double v : c.variances) sum += v;
    c.sigma_sq = sum / static_cast<double>(c.variances.size());
    all += detail::format_g17(extra_param);
    c.digest = fnv1a_hex(all);
    return c;
}

struct RowFunctionals {
    double variance;
    double entropy;
    double kl;
    double l1;
};

RowFunctionals row_functionals(const GridDensity& d, const GridConfig& cfg) {
    const Moments mo = moments(d);
    RowFunctionals r{};
    r.variance = mo.variance;
    r.entropy = entropy(d);
    r.kl = kl_to_matched_gaussian(d);
    const GridDensity phi = materialize(DistributionSpec::gaussian(mo.mean, mo.variance), cfg);
    r.l1 = l1_distance(d, phi);
    return r;
}

double geometric_factor(double sigma_sq, double R) {
    const double m = std::min(sigma_sq, 1.0);
    return 1.0 - m / (m + 2.0 * R);
}

GridDensity relabeled(const GridDensity& d, std::string label, const GridConfig& cfg) {
    return GridDensity(d.grid_start(), d.grid_step(), std::vector<double>(d.values().begin(), d.values().end()),
                       std::move(label), cfg);
}

std::string level_name(const char* base, long n) { return std::string(base) + "[" + std::to_string(n) + "]"; }

}  // namespace

bool SequenceSpec::claims_stable_entropy() const {
    if (stable_entropy) {
        return *stable_entropy;
    }
    return std::holds_alternative<IidGenerator>(generator);
}

std::vector<DistributionSpec> SequenceSpec::period() const {
    std::vector<DistributionSpec> out;
    if (const auto* g = std::get_if<IidGenerator>(&generator)) {
        out.push_back(g->spec);
    } else if (const auto* g = std::get_if<CyclicGenerator>(&generator)) {
        out = g->specs;
    } else {
        const auto& path = std::get<FileGenerator>(generator).path;
        out = specs_from_array(read_json_file(path), "sequence file '" + path + "'");
    }
    if (out.empty()) {
        fail(ErrorKind::InvalidSpec, "sequence has no constituent distributions");
    }
    for (const auto& s : out) {
        s.validate();
    }
    return out;
}

SequenceSpec SequenceSpec::iid(DistributionSpec spec) { return {IidGenerator{std::move(spec)}, true, std::nullopt}; }

SequenceSpec SequenceSpec::cyclic(std::vector<DistributionSpec> specs) {
    return {CyclicGenerator{std::move(specs)}, true, std::nullopt};
}

SequenceSpec sequence_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object() || !j.contains("generator") || !j.at("generator").is_object() ||
            j.at("generator").size() != 1) {
            fail(ErrorKind::InvalidSpec, "sequence needs a \"generator\" object with exactly one of iid, cyclic, file");
        }
        const auto& g = j.at("generator");
        SequenceSpec seq;
        if (g.contains("iid")) {
            seq.generator = IidGenerator{spec_from_json(g.at("iid"))};
        } else if (g.contains("cyclic")) {
            seq.generator = CyclicGenerator{specs_from_array(g.at("cyclic"), "cyclic generator")};
        } else if (g.contains("file")) {
            seq.generator = FileGenerator{g.at("file").get<std::string>()};
        } else {
            fail(ErrorKind::InvalidSpec, "unknown generator '" + g.begin().key() + "'");
        }
        seq.enforce_zero_mean = j.value("enforce_zero_mean", true);
        if (j.contains("stable_entropy")) {
            seq.stable_entropy = j.at("stable_entropy").get<bool>();
        }
        return seq;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("bad sequence spec: ") + e.what());
    }
}

nlohmann::json to_json(const SequenceSpec& seq) {
    nlohmann::json g;
    if (const auto* p = std::get_if<IidGenerator>(&seq.generator)) {
        g["iid"] = spec_to_json(p->spec);
    } else if (const auto* p = std::get_if<CyclicGenerator>(&seq.generator)) {
        g["cyclic"] = nlohmann::json::array();
        for (const auto& s : p->specs) {
            g["cyclic"].push_back(spec_to_json(s));
        }
    } else {
        g["file"] = std::get<FileGenerator>(seq.generator).path;
    }
    nlohmann::json j{{"generator", g}, {"enforce_zero_mean", seq.enforce_zero_mean}};
    if (seq.stable_entropy) {
        j["stable_entropy"] = *seq.stable_entropy;
    }
    return j;
}

SequenceSpec load_sequence(const std::string& path) { return sequence_from_json(read_json_file(path)); }

CltTrace run_doubling(const SequenceSpec& seq, std::size_t levels, const GridConfig& cfg,
                      const SolverConfig& solver) {
    if (levels < 1 || levels > 20) {
        fail(ErrorKind::PreconditionViolation, "levels must lie in [1, 20]");
    }
    cfg.validate();
    solver.validate();
    const Constituents base = build_constituents(seq, cfg, solver, static_cast<double>(levels));
    const std::size_t p = base.densities.size();

    // Block (m, s): normalized sum of 2^m consecutive inputs whose first one
    // follows constituent s.
    struct Block {
        GridDensity density;
        double entropy;
        double poincare;
    };
    std::map<std::pair<std::size_t, std::size_t>, Block> memo;
    auto block = [&](auto&& self, std::size_t m, std::size_t s) -> const Block& {
        const auto key = std::make_pair(m, s);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        if (m == 0) {
            const GridDensity& d = base.densities[s];
            return memo.emplace(key, Block{d, entropy(d), base.poincare[s]}).first->second;
        }
        const std::size_t half = (std::size_t{1} << (m - 1)) % p;
        const GridDensity left = self(self, m - 1, s).density;
        const GridDensity right = self(self, m - 1, (s + half) % p).density;
        GridDensity sum = relabeled(scaled_sum_density(left, right, 1.0 / std::numbers::sqrt2, cfg),
                                    "block" + std::to_string(m) + "." + std::to_string(s), cfg);
        const double h = entropy(sum);
        const double r = restricted_poincare(sum, solver).value;
        return memo.emplace(key, Block{std::move(sum), h, r}).first->second;
    };

    auto mean_variance = [&](std::size_t m) {
        const std::size_t count = std::size_t{1} << m;
        double sum = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            sum += base.variances[k % p];
        }
        return sum / static_cast<double>(count);
    };

    CltTrace trace;
    trace.mode = CltMode::Doubling;
    trace.R = base.R;
    trace.sigma_sq = base.sigma_sq;
    trace.inputs_digest = base.digest;
    const double q = geometric_factor(base.sigma_sq, base.R);
    const bool stable = seq.claims_stable_entropy();

    for (std::size_t m = 0; m <= levels; ++m) {
        const Block& cur = block(block, m, 0);
        const RowFunctionals f = row_functionals(cur.density, cfg);
        CltRow row;
        row.level_or_n = static_cast<long>(m);
        row.variance = f.variance;
        row.entropy = f.entropy;
        row.kl = f.kl;
        row.l1 = f.l1;
        if (m > 0) {
            const Block& prev = block(block, m - 1, 0);
            const Block& sib = block(block, m - 1, (std::size_t{1} << (m - 1)) % p);
            const double vp = moments(prev.density).variance;
            const double vs = moments(sib.density).variance;
            const double mean_h = 0.5 * (prev.entropy + sib.entropy);
            const double R = std::max({prev.poincare, sib.poincare, 0.5});
            row.jump_observed = cur.entropy - mean_h;
            row.jump_lower_bound = entropy_jump_constant(vp, vs, R) * (0.5 * std::log(kTwoPiE * 0.5 * (vp + vs)) - mean_h);
        }
        row.geometric_bound = std::pow(q, static_cast<double>(m)) * (trace.rows.empty() ? f.kl : trace.rows[0].kl);

        double sibling_h = cur.entropy;
        if (m < levels) {
            sibling_h = block(block, m, (std::size_t{1} << m) % p).entropy;
            if (stable && std::abs(sibling_h - cur.entropy) > 1e-6) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "stable entropy condition fails at level %zu: |%.9g - %.9g| > 1e-6", m,
                              cur.entropy, sibling_h);
                fail(ErrorKind::ConditionViolation, buf);
            }
        }
        trace.rows.push_back(row);
        trace.constituent_variance.push_back(mean_variance(m));
        trace.sibling_entropy.push_back(sibling_h);
    }
    return trace;
}

std::vector<InequalityReport> geometric_rate_check(const CltTrace& trace, double sigma_sq, double R) {
    std::vector<InequalityReport> out;
    if (trace.rows.empty()) {
        return out;
    }
    const double q = geometric_factor(sigma_sq, R);
    const double kl0 = trace.rows.front().kl;
    for (const auto& row : trace.rows) {
        const double bound = std::pow(q, static_cast<double>(row.level_or_n)) * kl0;
        out.push_back(make_leq(level_name("geometric_rate", row.level_or_n), row.kl, bound, 1e-8, trace.inputs_digest));
    }
    return out;
}

CltTrace run_plain_sum(const SequenceSpec& seq, std::size_t n_max, const GridConfig& cfg,
                       const SolverConfig& solver) {
    if (n_max < 1 || n_max > 4096) {
        fail(ErrorKind::PreconditionViolation, "n_max must lie in [1, 4096]");
    }
    cfg.validate();
    solver.validate();
    const Constituents base = build_constituents(seq, cfg, solver, static_cast<double>(n_max));
    const std::size_t p = base.densities.size();

    CltTrace trace;
    trace.mode = CltMode::PlainSum;
    trace.R = base.R;
    trace.sigma_sq = base.sigma_sq;
    trace.inputs_digest = base.digest;

    GridDensity running = base.densities[0];
    double variance_sum = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            const double lambda = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
            running = relabeled(scaled_sum_density(running, base.densities[(n - 1) % p], lambda, cfg),
                                "S" + std::to_string(n), cfg);
            // Resampling a kinked constituent by a non-unit ratio shifts the mean by ~1e-7 per step.
            if (seq.enforce_zero_mean) {
                const double mean = moments(running).mean;
                if (std::abs(mean) > 1e-9) {
                    running = affine_transform(running, 1.0, -mean, cfg);
                }
            }
        }
        variance_sum += base.variances[(n - 1) % p];
        const RowFunctionals f = row_functionals(running, cfg);
        CltRow row;
        row.level_or_n = static_cast<long>(n);
        row.variance = f.variance;
        row.entropy = f.entropy;
        row.kl = f.kl;
        row.l1 = f.l1;
        row.jump_observed = n > 1 ? f.entropy - trace.rows.back().entropy : 0.0;
        trace.rows.push_back(row);
        trace.constituent_variance.push_back(variance_sum / static_cast<double>(n));
        trace.sibling_entropy.push_back(f.entropy);
    }

    double chain = 0.0;
    std::size_t next_power = 1;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n == next_power) {
            chain += static_cast<double>(n) * trace.rows[n - 1].kl;
            next_power <<= 1;
        }
        trace.rows[n - 1].geometric_bound = chain / static_cast<double>(n);
    }
    return trace;
}

std::vector<InequalityReport> subadditive_rate_bound(const CltTrace& trace, double c) {
    std::vector<InequalityReport> out;
    if (trace.rows.empty()) {
        return out;
    }
    const double d1 = trace.rows.front().kl;
    auto selected = [](long n) {
        if (n <= 64) return true;
        const long odd = n / (n & -n);
        return odd == 1 || odd == 3;
    };
    for (const auto& row : trace.rows) {
        const long n = row.level_or_n;
        if (n < 1 || !selected(n)) {
            continue;
        }
        double chain = 0.0;
        double geometric = 0.0;
        long k = 0;
        for (long pw = 1; pw <= n; pw <<= 1, ++k) {
            if (static_cast<std::size_t>(pw) > trace.rows.size() || trace.rows[pw - 1].level_or_n != pw) {
                fail(ErrorKind::PreconditionViolation, "subadditive check needs rows 1..n indexed by n");
            }
            chain += static_cast<double>(pw) * trace.rows[pw - 1].kl;
            geometric += std::pow(2.0 * c, static_cast<double>(k));
        }
        const double lhs = static_cast<double>(n) * row.kl;
        out.push_back(make_leq(level_name("subadditive_chain", n), lhs, chain, 1e-6, trace.inputs_digest));
        out.push_back(make_leq(level_name("subadditive_rate", n), lhs, d1 * geometric, 1e-6, trace.inputs_digest));
    }
    return out;
}

InequalityReport entropy_convergence_iff_check(const CltTrace& trace) {
    double worst = 0.0;
    for (const auto& row : trace.rows) {
        const double deficit = 0.5 * std::log(kTwoPiE * row.variance) - row.entropy;
        worst = std::max(worst, std::abs(deficit - row.kl));
    }
    auto rep = make_eq("entropy_convergence_iff", worst, 0.0, 1e-8, trace.inputs_digest);
    if (trace.rows.size() < 4) {
        rep.note = "inconclusive";
        return rep;
    }
    constexpr double kCauchy = 1e-6;
    double gap_h = 0.0;
    double gap_kl = 0.0;
    const std::size_t n = trace.rows.size();
    for (std::size_t i = n - 4; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            gap_h = std::max(gap_h, std::abs(trace.rows[i].entropy - trace.rows[j].entropy));
            gap_kl = std::max(gap_kl, std::abs(trace.rows[i].kl - trace.rows[j].kl));
        }
    }
    const bool conv_h = gap_h < kCauchy;
    const bool conv_kl = gap_kl < kCauchy;
    char buf[160];
    std::snprintf(buf, sizeof buf, "entropy %s (gap %.3g), kl %s (gap %.3g)", conv_h ? "converged" : "not converged",
                  gap_h, conv_kl ? "converged" : "not converged", gap_kl);
    rep.note = buf;
    rep.pass = rep.pass && conv_h == conv_kl;
    return rep;
}

std::vector<InequalityReport> trace_invariant_checks(const CltTrace& trace) {
    std::vector<InequalityReport> out;
    const std::string& dg = trace.inputs_digest;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const CltRow& row = trace.rows[i];
        const long n = row.level_or_n;
        out.push_back(make_leq(level_name("pinsker", n), row.l1 * row.l1, 2.0 * row.kl, 1e-8, dg));
        out.push_back(make_geq(level_name("kl_nonnegative", n), row.kl, 0.0, 1e-9, dg));
        if (trace.mode != CltMode::Doubling) {
            continue;
        }
        out.push_back(make_eq(level_name("variance_flow", n), row.variance, trace.constituent_variance[i], 1e-4, dg));
        if (i > 0) {
            const double mean_h = 0.5 * (trace.rows[i - 1].entropy + trace.sibling_entropy[i - 1]);
            out.push_back(make_geq(level_name("eji_monotone", n), row.entropy, mean_h, 1e-6, dg));
            out.push_back(make_geq(level_name("doubling_jump", n), row.jump_observed, row.jump_lower_bound, 1e-5, dg));
        }
    }
    return out;
}

void export_csv(const CltTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorKind::IoFailure, "cannot write '" + path + "'");
    }
    out << kCsvHeader << '\n';
    using detail::format_g12;
    for (const auto& r : trace.rows) {
        out << r.level_or_n << ',' << format_g12(r.variance) << ',' << format_g12(r.entropy) << ','
            << format_g12(r.kl) << ',' << format_g12(r.l1) << ',' << format_g12(r.jump_observed) << ','
            << format_g12(r.jump_lower_bound) << ',' << format_g12(r.geometric_bound) << '\n';
    }
    out.flush();
    if (!out) {
        fail(ErrorKind::IoFailure, "write to '" + path + "' failed");
    }
}

std::vector<CltRow> read_trace_csv(const std::string& path) {
    std::vector<CltRow> rows;
    for (const auto& v : detail::read_numeric_csv(path, 8)) {
        CltRow r;
        r.level_or_n = static_cast<long>(v[0]);
        r.variance = v[1];
        r.entropy = v[2];
        r.kl = v[3];
        r.l1 = v[4];
        r.jump_observed = v[5];
        r.jump_lower_bound = v[6];
        r.geometric_bound = v[7];
        rows.push_back(r);
    }
    return rows;
}

}  // namespace entlab
