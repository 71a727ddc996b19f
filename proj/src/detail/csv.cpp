#include "detail/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "entlab/error.hpp"

namespace entlab::detail {

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            comma = line.size();
        }
        std::size_t b = pos;
        std::size_t e = comma;
        while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
        while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
        double v = 0.0;
        const auto res = std::from_chars(line.data() + b, line.data() + e, v);
        if (b == e || res.ec != std::errc() || res.ptr != line.data() + e) {
            return false;
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return true;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::IoFailure, "cannot open '" + path + "'");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::vector<double> row;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (!parse_row(line, row)) {
            if (rows.empty() && line_no == 1) {
                continue;  // header
            }
            fail(ErrorKind::InvalidSpec, path + ":" + std::to_string(line_no) + ": not numeric");
        }
        if (row.size() != columns) {
            std::ostringstream os;
            os << path << ":" << line_no << ": expected " << columns << " columns, got " << row.size();
            fail(ErrorKind::InvalidSpec, os.str());
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace entlab::detail
