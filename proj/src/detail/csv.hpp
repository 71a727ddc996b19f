#pragma once

#include <string>
#include <vector>

namespace entlab::detail {

/// Reads comma-separated numeric rows, skipping blank lines and a leading
/// non-numeric header. Throws IoFailure on unreadable files and InvalidSpec
/// when a row does not hold exactly `columns` numbers.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns);

/// %.12g formatting used by every CSV writer.
std::string format_g12(double v);

/// %.17g formatting used in digests.
std::string format_g17(double v);

}  // namespace entlab::detail
