#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "entlab/grid_density.hpp"

namespace entlab {

/// One verified claim "lhs <relation> rhs".
///
/// margin is rhs - lhs for "<=", lhs - rhs for ">=" and -|lhs - rhs| for
/// "==", so that pass holds exactly when margin >= -tolerance. Informational
/// reports describe a claim that is not expected to hold in general; they are
/// recorded but never count as failures.
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string inputs_digest;
    std::string relation = "<=";
    bool informational = false;
    std::string note;

    /// Failing and not informational.
    [[nodiscard]] bool counts_as_failure() const noexcept { return !pass && !informational; }
};

InequalityReport make_leq(std::string name, double lhs, double rhs, double tolerance, std::string digest);
InequalityReport make_geq(std::string name, double lhs, double rhs, double tolerance, std::string digest);
InequalityReport make_eq(std::string name, double lhs, double rhs, double tolerance, std::string digest);

nlohmann::json to_json(const InequalityReport& r);
InequalityReport report_from_json(const nlohmann::json& j);

/// One compact JSON object per line.
void write_json_lines(std::ostream& out, const std::vector<InequalityReport>& reports);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

/// Digest of a density: label, grid geometry (%.17g) and the sample bytes.
std::string density_digest(const GridDensity& d);

/// Digest over several densities plus extra scalar parameters (%.17g).
std::string inputs_digest(std::initializer_list<const GridDensity*> densities,
                          std::initializer_list<double> params = {});

}  // namespace entlab
