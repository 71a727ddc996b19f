#pragma once

#include <span>
#include <vector>

namespace entlab::detail {

/// Full linear convolution (length a.size() + b.size() - 1) via zero-padded
/// real FFTs. The result is the plain sum, not scaled by any grid step.
std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b);

std::size_t next_power_of_two(std::size_t n) noexcept;

}  // namespace entlab::detail
