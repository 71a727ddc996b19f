#include "entlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/kernels.hpp"
#include "detail/resample.hpp"
#include "entlab/error.hpp"

namespace entlab {

double entropy(const GridDensity& d) { return detail::entropy_of(d.values(), d.grid_step()); }

ScoreFunction score(const GridDensity& d, double floor) {
    if (!(floor > 0.0) || !(floor < 1.0)) {
        fail(ErrorKind::InvalidSpec, "score floor must lie in (0, 1)");
    }
    ScoreFunction s;
    s.grid_start = d.grid_start();
    s.grid_step = d.grid_step();
    s.values = detail::masked_score(d.values(), d.grid_step(), floor, s.support_mask);

    const std::size_t n = d.size();
    double kept = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (s.support_mask[i]) {
            kept += detail::trap_weight(i, n) * d[i];
        }
    }
    kept *= d.grid_step();
    if (kept < 1.0 - 1e-6) {
        std::ostringstream os;
        os << "score support of '" << d.label() << "' holds only " << kept << " of the mass";
        fail(ErrorKind::DegenerateSupport, os.str());
    }
    return s;
}

double fisher_information(const GridDensity& d, double floor) {
    (void)score(d, floor);
    const double fine = detail::fisher_of(d.values(), d.grid_step(), floor);

    std::vector<double> coarse;
    coarse.reserve(d.size() / 2 + 1);
    for (std::size_t i = 0; i < d.size(); i += 2) {
        coarse.push_back(d[i]);
    }
    const double rough = detail::fisher_of(coarse, 2.0 * d.grid_step(), floor);
    if (!std::isfinite(fine) || std::abs(fine - rough) > 0.05 * std::abs(fine)) {
        std::ostringstream os;
        os << "Fisher information of '" << d.label() << "' is not resolved (" << fine
           << " at full resolution, " << rough << " at half)";
        fail(ErrorKind::SuspectedInfinite, os.str());
    }
    return fine;
}

double kl_to_matched_gaussian(const GridDensity& d) {
    const Moments mo = moments(d);
    if (std::abs(mo.mean) > 1e-6) {
        std::ostringstream os;
        os << "density '" << d.label() << "' has mean " << mo.mean << ", center it first";
        fail(ErrorKind::NonCenteredInput, os.str());
    }
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * mo.variance) - entropy(d);
}

namespace {

std::vector<double> onto_grid(const GridDensity& d, double start, double step, std::size_t count) {
    long offset = 0;
    std::vector<double> v(count, 0.0);
    if (detail::grids_aligned(start, step, d.grid_start(), d.grid_step(), offset)) {
        for (std::size_t i = 0; i < count; ++i) {
            const long j = static_cast<long>(i) + offset;
            if (j >= 0 && j < static_cast<long>(d.size())) {
                v[i] = d[static_cast<std::size_t>(j)];
            }
        }
        return v;
    }
    const detail::UniformInterpolant p(d.grid_start(), d.grid_step(), d.values());
    v = detail::sample_affine(p, 1.0, 0.0, start, step, count);
    for (double& x : v) {
        x = std::max(x, 0.0);
    }
    const double m = trapezoid(v, step);
    if (m > 0.0) {
        for (double& x : v) {
            x /= m;
        }
    }
    return v;
}

}  // namespace

double l1_distance(const GridDensity& f, const GridDensity& g) {
    const double start = std::min(f.grid_start(), g.grid_start());
    const double step = std::min(f.grid_step(), g.grid_step());
    const double end = std::max(f.grid_end(), g.grid_end());
    const auto count = static_cast<std::size_t>(std::ceil((end - start) / step - 1e-9)) + 1;
    const auto a = onto_grid(f, start, step, count);
    const auto b = onto_grid(g, start, step, count);
    std::vector<double> diff(count);
    for (std::size_t i = 0; i < count; ++i) {
        diff[i] = std::abs(a[i] - b[i]);
    }
    return trapezoid(diff, step);
}

}  // namespace entlab
