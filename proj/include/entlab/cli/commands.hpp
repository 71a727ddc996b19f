#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entlab/grid_density.hpp"
#include "entlab/report.hpp"

namespace entlab::cli {

enum ExitCode : int {
    kOk = 0,
    kReportFailed = 1,
    kInputError = 2,
    kSolverError = 3,
};

struct RunConfig {
    std::string command;  // compute, verify or clt
    std::vector<std::string> spec_paths;
    std::optional<std::size_t> num_points;
    std::optional<double> half_width_sigmas;
    std::string out;
    std::string functional = "entropy";
    std::string suite = "all";
    std::string mode = "doubling";
    std::size_t levels = 8;
    std::size_t n_max = 64;
    /// Replaces the tolerance of every emitted report.
    std::optional<double> tolerance;
    /// Poincare constant supplied to the jump and sandwich checks.
    std::optional<double> poincare_r;

    /// Grid defaults with the overrides applied; throws InvalidSpec.
    [[nodiscard]] GridConfig grid() const;
};

/// Suites accepted by verify.
const std::vector<std::string>& suite_names();

/// Runs one verify suite on centered inputs (one input is paired with itself).
std::vector<InequalityReport> run_suite(const std::string& suite, const GridDensity& dX, const GridDensity& dY,
                                        std::optional<double> poincare_r = std::nullopt);

/// Each command writes its primary output to `out`, messages to `err`, and
/// returns the exit status; library errors are mapped rather than thrown.
int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_clt(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and runs the selected command.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entlab::cli
