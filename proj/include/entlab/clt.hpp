#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "entlab/distribution.hpp"
#include "entlab/grid_density.hpp"
#include "entlab/poincare.hpp"
#include "entlab/report.hpp"

namespace entlab {

struct IidGenerator {
    DistributionSpec spec;
};

/// X_i follows specs[(i - 1) mod p].
struct CyclicGenerator {
    std::vector<DistributionSpec> specs;
};

/// JSON array of distribution specs, used cyclically.
struct FileGenerator {
    std::string path;
};

using Generator = std::variant<IidGenerator, CyclicGenerator, FileGenerator>;

/// An independent sequence X_1, X_2, ...
struct SequenceSpec {
    Generator generator;
    bool enforce_zero_mean = true;
    /// Whether sibling blocks of the doubling tree are claimed to have equal
    /// entropy. Defaults to true for iid generators and false otherwise.
    std::optional<bool> stable_entropy;

    [[nodiscard]] bool claims_stable_entropy() const;

    /// The distinct constituent laws in cyclic order (reads the file for
    /// FileGenerator). Throws InvalidSpec on an invalid or empty list.
    [[nodiscard]] std::vector<DistributionSpec> period() const;

    static SequenceSpec iid(DistributionSpec spec);
    static SequenceSpec cyclic(std::vector<DistributionSpec> specs);
};

/// {"generator": {"iid": {...}} | {"cyclic": [...]} | {"file": path},
///  "enforce_zero_mean": true, "stable_entropy": bool}
SequenceSpec sequence_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SequenceSpec& seq);
SequenceSpec load_sequence(const std::string& path);

struct CltRow {
    long level_or_n = 0;
    double variance = 0.0;
    double entropy = 0.0;
    double kl = 0.0;               // 1/2 ln(2 pi e variance) - entropy
    double l1 = 0.0;               // distance to N(0, variance)
    double jump_observed = 0.0;
    double jump_lower_bound = 0.0;
    double geometric_bound = 0.0;
};

enum class CltMode { Doubling, PlainSum };

/// Rows plus the bookkeeping the invariant checks need.
struct CltTrace {
    CltMode mode = CltMode::Doubling;
    std::vector<CltRow> rows;
    /// Per row: mean variance of the constituents summed into that row.
    std::vector<double> constituent_variance;
    /// Per row: entropy of the sibling block the row is combined with at the
    /// next level (doubling only).
    std::vector<double> sibling_entropy;
    /// Poincare constant used for the bounds: max over solver values and 1/2.
    double R = 0.0;
    /// Mean constituent variance of the first period.
    double sigma_sq = 0.0;
    std::string inputs_digest;
};

/// Row m is (X_1 + ... + X_{2^m}) / 2^{m/2}. Blocks of a level are combined
/// pairwise at lambda = 1/sqrt 2. Requires 1 <= levels <= 20. Throws
/// ConditionViolation when sibling entropies differ by more than 1e-6 for a
/// sequence claiming the stable entropy condition.
CltTrace run_doubling(const SequenceSpec& seq, std::size_t levels, const GridConfig& cfg = {},
                      const SolverConfig& solver = {});

/// kl_n <= (1 - c)^n kl_0 + 1e-8 per level, c = min(s,1) / (min(s,1) + 2R).
std::vector<InequalityReport> geometric_rate_check(const CltTrace& trace, double sigma_sq, double R);

/// Row n is (X_1 + ... + X_n) / sqrt n, built by S_{n+1} = sqrt(n/(n+1)) S_n +
/// sqrt(1/(n+1)) X_{n+1}. Requires 1 <= n_max <= 4096. geometric_bound holds
/// the subadditive chain bound divided by n; jump_observed is Ent_n - Ent_{n-1}.
CltTrace run_plain_sum(const SequenceSpec& seq, std::size_t n_max, const GridConfig& cfg = {},
                       const SolverConfig& solver = {});

/// For the plain-sum trace: n D_n <= sum_{j=0}^{k} 2^j D_{2^j}, k = floor(log2 n),
/// and n D_n <= D_1 sum_{j=0}^{k} (2c)^j, tolerance 1e-6. Rows n <= 64 are
/// all checked; beyond that n = 2^j and n = 3 * 2^{j-1}.
std::vector<InequalityReport> subadditive_rate_bound(const CltTrace& trace, double c);

/// Row-wise |(1/2 ln(2 pi e var_n) - Ent_n) - KL_n| <= 1e-8 together with a
/// Cauchy diagnostic over the last four rows of both sequences. The note is
/// "inconclusive" for traces with fewer than four rows.
InequalityReport entropy_convergence_iff_check(const CltTrace& trace);

/// Pinsker and kl >= -1e-9 at every row; for doubling traces also EJI
/// monotonicity (1e-6), the jump lower bound (1e-5) and the variance flow (1e-4).
std::vector<InequalityReport> trace_invariant_checks(const CltTrace& trace);

/// Header "level,variance,entropy,kl,l1,jump_observed,jump_lower_bound,geometric_bound"
/// and %.12g values. Throws IoFailure.
void export_csv(const CltTrace& trace, const std::string& path);

/// Rows of a file written by export_csv.
std::vector<CltRow> read_trace_csv(const std::string& path);

}  // namespace entlab
