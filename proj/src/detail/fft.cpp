#include "detail/fft.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "entlab/error.hpp"

namespace entlab::detail {

namespace {

// FFTW planning is not thread safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) {
        fail(ErrorKind::SolverFailure, "FFT buffer allocation failed");
    }
    return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {
        if (!plan_) {
            fail(ErrorKind::SolverFailure, "FFTW could not create a plan");
        }
    }
    ~Plan() {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void run() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

// Forward transform of `x` zero-padded to n; returns n/2+1 coefficients.
std::vector<std::complex<double>> forward(std::span<const double> x, std::size_t n) {
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = std::make_unique<Plan>(
            fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = i < x.size() ? x[i] : 0.0;
    }
    plan->run();
    std::vector<std::complex<double>> c(n / 2 + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = {out[k][0], out[k][1]};
    }
    return c;
}

// Inverse of `forward`, normalized by 1/n.
std::vector<double> inverse(const std::vector<std::complex<double>>& c, std::size_t n) {
    auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
    auto out = fftw_buffer<double>(n);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = std::make_unique<Plan>(
            fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
        in[k][0] = c[k].real();
        in[k][1] = c[k].imag();
    }
    plan->run();
    std::vector<double> x(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = out[i] * scale;
    }
    return x;
}

}  // namespace

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    const std::size_t len = a.size() + b.size() - 1;
    const std::size_t n = next_power_of_two(len);
    auto fa = forward(a, n);
    const auto fb = forward(b, n);
    for (std::size_t k = 0; k < fa.size(); ++k) {
        fa[k] *= fb[k];
    }
    auto full = inverse(fa, n);
    full.resize(len);
    return full;
}

}  // namespace entlab::detail
