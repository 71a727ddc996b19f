#include "entlab/distribution.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "detail/csv.hpp"
#include "detail/resample.hpp"
#include "entlab/error.hpp"

namespace entlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double gaussian_pdf(double x, double mean, double var) {
    const double z = x - mean;
    return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// Phi(u) - Phi(w) for u >= w, without cancellation in either tail.
double normal_cdf_diff(double u, double w) {
    if (w > 0.0) {
        return 0.5 * (std::erfc(w * kInvSqrt2) - std::erfc(u * kInvSqrt2));
    }
    if (u < 0.0) {
        return 0.5 * (std::erfc(-u * kInvSqrt2) - std::erfc(-w * kInvSqrt2));
    }
    return 1.0 - 0.5 * std::erfc(u * kInvSqrt2) - 0.5 * std::erfc(-w * kInvSqrt2);
}

struct GridSamples {
    double start = 0.0;
    double step = 0.0;
    std::vector<double> values;
};

GridSamples read_grid_file(const std::string& path) {
    const auto rows = detail::read_numeric_csv(path, 2);
    if (rows.size() < 5) {
        fail(ErrorKind::InvalidSpec, "grid file '" + path + "' needs at least 5 rows");
    }
    GridSamples s;
    s.start = rows.front()[0];
    s.step = (rows.back()[0] - rows.front()[0]) / static_cast<double>(rows.size() - 1);
    if (!(s.step > 0.0)) {
        fail(ErrorKind::InvalidSpec, "grid file abscissae must be strictly increasing");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double expected = s.start + s.step * static_cast<double>(i);
        if (i > 0 && !(rows[i][0] > rows[i - 1][0])) {
            fail(ErrorKind::InvalidSpec, "grid file abscissae must be strictly increasing");
        }
        if (std::abs(rows[i][0] - expected) > 1e-6 * s.step) {
            fail(ErrorKind::InvalidSpec, "grid file abscissae must be uniformly spaced");
        }
        if (!(rows[i][1] >= 0.0) || !std::isfinite(rows[i][1])) {
            fail(ErrorKind::InvalidSpec, "grid file density values must be finite and nonnegative");
        }
        s.values.push_back(rows[i][1]);
    }
    return s;
}

Moments sample_moments(const GridSamples& s) {
    const std::size_t n = s.values.size();
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        const double x = s.start + s.step * static_cast<double>(i);
        m0 += w * s.values[i];
        m1 += w * s.values[i] * x;
        m2 += w * s.values[i] * x * x;
    }
    if (!(m0 > 0.0)) {
        fail(ErrorKind::InvalidSpec, "grid file carries no mass");
    }
    const double mean = m1 / m0;
    return {mean, m2 / m0 - mean * mean};
}

Moments analytic_moments(const FamilyParams& params) {
    return std::visit(
        overloaded{
            [](const GaussianParams& p) { return Moments{p.mean, p.variance}; },
            [](const LaplaceParams& p) { return Moments{p.mean, 2.0 * p.scale * p.scale}; },
            [](const SmoothedUniformParams& p) {
                const double w = p.b - p.a;
                return Moments{0.5 * (p.a + p.b), w * w / 12.0 + p.smooth_var};
            },
            [](const GaussianMixtureParams& p) {
                double mean = 0.0, second = 0.0;
                for (std::size_t k = 0; k < p.weights.size(); ++k) {
                    mean += p.weights[k] * p.means[k];
                    second += p.weights[k] * (p.variances[k] + p.means[k] * p.means[k]);
                }
                return Moments{mean, second - mean * mean};
            },
            [](const GridFileParams& p) { return sample_moments(read_grid_file(p.path)); },
        },
        params);
}

std::string join(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += detail::format_g17(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string DistributionSpec::family() const {
    return std::visit(overloaded{
                          [](const GaussianParams&) { return std::string("gaussian"); },
                          [](const LaplaceParams&) { return std::string("laplace"); },
                          [](const SmoothedUniformParams&) { return std::string("smoothed_uniform"); },
                          [](const GaussianMixtureParams&) { return std::string("gaussian_mixture"); },
                          [](const GridFileParams&) { return std::string("grid_file"); },
                      },
                      params);
}

void DistributionSpec::validate() const {
    std::visit(
        overloaded{
            [](const GaussianParams& p) {
                if (!std::isfinite(p.mean) || !positive(p.variance))
                    fail(ErrorKind::InvalidSpec, "gaussian needs finite mean and variance > 0");
            },
            [](const LaplaceParams& p) {
                if (!std::isfinite(p.mean) || !positive(p.scale))
                    fail(ErrorKind::InvalidSpec, "laplace needs finite mean and scale > 0");
            },
            [](const SmoothedUniformParams& p) {
                if (!std::isfinite(p.a) || !std::isfinite(p.b) || !(p.b > p.a))
                    fail(ErrorKind::InvalidSpec, "smoothed_uniform needs finite a < b");
                if (!positive(p.smooth_var))
                    fail(ErrorKind::InvalidSpec, "smoothed_uniform needs smooth_var > 0");
            },
            [](const GaussianMixtureParams& p) {
                const std::size_t n = p.weights.size();
                if (n == 0 || p.means.size() != n || p.variances.size() != n)
                    fail(ErrorKind::InvalidSpec,
                         "gaussian_mixture needs equally many weights, means and variances");
                double total = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (!positive(p.weights[k]))
                        fail(ErrorKind::InvalidSpec, "mixture weights must be positive");
                    if (!std::isfinite(p.means[k]) || !positive(p.variances[k]))
                        fail(ErrorKind::InvalidSpec, "mixture components need finite means and variances > 0");
                    total += p.weights[k];
                }
                if (std::abs(total - 1.0) > 1e-9)
                    fail(ErrorKind::InvalidSpec, "mixture weights must sum to 1");
            },
            [](const GridFileParams& p) {
                if (p.path.empty()) fail(ErrorKind::InvalidSpec, "grid_file needs a path");
            },
        },
        params);
}

DistributionSpec DistributionSpec::gaussian(double mean, double variance, std::string label) {
    return {GaussianParams{mean, variance}, std::move(label)};
}
DistributionSpec DistributionSpec::laplace(double mean, double scale, std::string label) {
    return {LaplaceParams{mean, scale}, std::move(label)};
}
DistributionSpec DistributionSpec::smoothed_uniform(double a, double b, double smooth_var,
                                                    std::string label) {
    return {SmoothedUniformParams{a, b, smooth_var}, std::move(label)};
}
DistributionSpec DistributionSpec::mixture(std::vector<double> weights, std::vector<double> means,
                                           std::vector<double> variances, std::string label) {
    return {GaussianMixtureParams{std::move(weights), std::move(means), std::move(variances)},
            std::move(label)};
}
DistributionSpec DistributionSpec::grid_file(std::string path, std::string label) {
    return {GridFileParams{std::move(path)}, std::move(label)};
}

DistributionSpec spec_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) {
            fail(ErrorKind::InvalidSpec, "distribution spec must be a JSON object");
        }
        const std::string family = j.at("family").get<std::string>();
        const nlohmann::json params = j.value("params", nlohmann::json::object());
        const std::string label = j.value("label", std::string{});
        DistributionSpec spec;
        if (family == "gaussian") {
            spec = DistributionSpec::gaussian(params.value("mean", 0.0), params.value("variance", 1.0), label);
        } else if (family == "laplace") {
            spec = DistributionSpec::laplace(params.value("mean", 0.0), params.value("scale", 1.0), label);
        } else if (family == "smoothed_uniform") {
            spec = DistributionSpec::smoothed_uniform(params.at("a").get<double>(), params.at("b").get<double>(),
                                                      params.at("smooth_var").get<double>(), label);
        } else if (family == "gaussian_mixture") {
            spec = DistributionSpec::mixture(params.at("weights").get<std::vector<double>>(),
                                             params.at("means").get<std::vector<double>>(),
                                             params.at("variances").get<std::vector<double>>(), label);
        } else if (family == "grid_file") {
            spec = DistributionSpec::grid_file(params.at("path").get<std::string>(), label);
        } else {
            fail(ErrorKind::InvalidSpec, "unknown family '" + family + "'");
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("malformed distribution spec: ") + e.what());
    }
}

nlohmann::json spec_to_json(const DistributionSpec& spec) {
    nlohmann::json params = std::visit(
        overloaded{
            [](const GaussianParams& p) { return nlohmann::json{{"mean", p.mean}, {"variance", p.variance}}; },
            [](const LaplaceParams& p) { return nlohmann::json{{"mean", p.mean}, {"scale", p.scale}}; },
            [](const SmoothedUniformParams& p) {
                return nlohmann::json{{"a", p.a}, {"b", p.b}, {"smooth_var", p.smooth_var}};
            },
            [](const GaussianMixtureParams& p) {
                return nlohmann::json{{"weights", p.weights}, {"means", p.means}, {"variances", p.variances}};
            },
            [](const GridFileParams& p) { return nlohmann::json{{"path", p.path}}; },
        },
        spec.params);
    return {{"family", spec.family()}, {"params", params}, {"label", spec.label}};
}

DistributionSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::IoFailure, "cannot open spec '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, "malformed JSON in '" + path + "': " + e.what());
    }
    return spec_from_json(j);
}

GridDensity materialize(const DistributionSpec& spec, const GridConfig& cfg) {
    cfg.validate();
    spec.validate();
    const std::string label = spec.label.empty() ? spec.family() : spec.label;

    if (const auto* file = std::get_if<GridFileParams>(&spec.params)) {
        const GridSamples s = read_grid_file(file->path);
        const Moments mo = sample_moments(s);
        if (!(mo.variance > 0.0)) {
            fail(ErrorKind::InvalidSpec, "grid file density has no spread");
        }
        const auto [start, step] = fresh_grid(mo.mean, std::sqrt(mo.variance), cfg);
        const detail::UniformInterpolant p(s.start, s.step, s.values);
        auto values = detail::sample_affine(p, 1.0, 0.0, start, step, cfg.num_points);
        return GridDensity::normalized(start, step, std::move(values), label, cfg);
    }

    const Moments mo = analytic_moments(spec.params);
    const auto [start, step] = fresh_grid(mo.mean, std::sqrt(mo.variance), cfg);
    std::vector<double> values(cfg.num_points);
    for (std::size_t i = 0; i < cfg.num_points; ++i) {
        const double x = start + step * static_cast<double>(i);
        values[i] = std::visit(
            overloaded{
                [x](const GaussianParams& p) { return gaussian_pdf(x, p.mean, p.variance); },
                [x](const LaplaceParams& p) { return std::exp(-std::abs(x - p.mean) / p.scale) / (2.0 * p.scale); },
                [x](const SmoothedUniformParams& p) {
                    const double s = std::sqrt(p.smooth_var);
                    return normal_cdf_diff((x - p.a) / s, (x - p.b) / s) / (p.b - p.a);
                },
                [x](const GaussianMixtureParams& p) {
                    double f = 0.0;
                    for (std::size_t k = 0; k < p.weights.size(); ++k) {
                        f += p.weights[k] * gaussian_pdf(x, p.means[k], p.variances[k]);
                    }
                    return f;
                },
                [](const GridFileParams&) { return 0.0; },
            },
            spec.params);
    }
    return GridDensity::normalized(start, step, std::move(values), label, cfg);
}

std::string describe(const DistributionSpec& spec) {
    const std::string body = std::visit(
        overloaded{
            [](const GaussianParams& p) {
                return "mean=" + detail::format_g17(p.mean) + ",variance=" + detail::format_g17(p.variance);
            },
            [](const LaplaceParams& p) {
                return "mean=" + detail::format_g17(p.mean) + ",scale=" + detail::format_g17(p.scale);
            },
            [](const SmoothedUniformParams& p) {
                return "a=" + detail::format_g17(p.a) + ",b=" + detail::format_g17(p.b) +
                       ",smooth_var=" + detail::format_g17(p.smooth_var);
            },
            [](const GaussianMixtureParams& p) {
                return "weights=" + join(p.weights) + ",means=" + join(p.means) + ",variances=" + join(p.variances);
            },
            [](const GridFileParams& p) { return "path=" + p.path; },
        },
        spec.params);
    return spec.family() + "(" + body + ")";
}

}  // namespace entlab
