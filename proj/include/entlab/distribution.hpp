#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "entlab/grid_density.hpp"

namespace entlab {

struct GaussianParams {
    double mean = 0.0;
    double variance = 1.0;
};

struct LaplaceParams {
    double mean = 0.0;
    double scale = 1.0;
};

/// Uniform law on [a, b] convolved with N(0, smooth_var). A raw uniform has
/// infinite Fisher information, so smooth_var must be positive.
struct SmoothedUniformParams {
    double a = -1.0;
    double b = 1.0;
    double smooth_var = 0.01;
};

struct GaussianMixtureParams {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> variances;
};

/// Two-column CSV (x, f(x)) on a strictly increasing uniform grid.
struct GridFileParams {
    std::string path;
};

using FamilyParams = std::variant<GaussianParams, LaplaceParams, SmoothedUniformParams,
                                  GaussianMixtureParams, GridFileParams>;

struct DistributionSpec {
    FamilyParams params;
    std::string label;

    [[nodiscard]] std::string family() const;

    /// Throws InvalidSpec on parameter violations.
    void validate() const;

    static DistributionSpec gaussian(double mean, double variance, std::string label = {});
    static DistributionSpec laplace(double mean, double scale, std::string label = {});
    static DistributionSpec smoothed_uniform(double a, double b, double smooth_var,
                                             std::string label = {});
    static DistributionSpec mixture(std::vector<double> weights, std::vector<double> means,
                                    std::vector<double> variances, std::string label = {});
    static DistributionSpec grid_file(std::string path, std::string label = {});
};

/// {"family": "...", "params": {...}, "label": "..."}
DistributionSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const DistributionSpec& spec);
DistributionSpec load_spec(const std::string& path);

/// Evaluates the family pointwise on a fresh grid (mean +/- w sd) and
/// renormalizes by trapezoid mass.
GridDensity materialize(const DistributionSpec& spec, const GridConfig& cfg = {});

/// Short reproducible description of the parameters, used in report digests.
std::string describe(const DistributionSpec& spec);

}  // namespace entlab
