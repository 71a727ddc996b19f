#include "entlab/report.hpp"

#include <cmath>
#include <cstring>
#include <ostream>

#include "detail/csv.hpp"
#include "entlab/error.hpp"

namespace entlab {

namespace {

InequalityReport make(std::string name, double lhs, double rhs, double margin, double tolerance,
                      std::string digest, std::string relation) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    r.tolerance = tolerance;
    r.pass = std::isfinite(margin) && margin >= -tolerance;
    r.inputs_digest = std::move(digest);
    r.relation = std::move(relation);
    return r;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string geometry(const GridDensity& d) {
    return d.label() + "|" + detail::format_g17(d.grid_start()) + "|" + detail::format_g17(d.grid_step()) +
           "|" + std::to_string(d.size());
}

}  // namespace

InequalityReport make_leq(std::string name, double lhs, double rhs, double tolerance, std::string digest) {
    return make(std::move(name), lhs, rhs, rhs - lhs, tolerance, std::move(digest), "<=");
}

InequalityReport make_geq(std::string name, double lhs, double rhs, double tolerance, std::string digest) {
    return make(std::move(name), lhs, rhs, lhs - rhs, tolerance, std::move(digest), ">=");
}

InequalityReport make_eq(std::string name, double lhs, double rhs, double tolerance, std::string digest) {
    return make(std::move(name), lhs, rhs, -std::abs(lhs - rhs), tolerance, std::move(digest), "==");
}

nlohmann::json to_json(const InequalityReport& r) {
    nlohmann::json j{{"name", r.name},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"margin", r.margin},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass},
                     {"inputs_digest", r.inputs_digest},
                     {"relation", r.relation},
                     {"informational", r.informational}};
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
    return j;
}

InequalityReport report_from_json(const nlohmann::json& j) {
    try {
        InequalityReport r;
        r.name = j.at("name").get<std::string>();
        r.lhs = j.at("lhs").get<double>();
        r.rhs = j.at("rhs").get<double>();
        r.margin = j.at("margin").get<double>();
        r.tolerance = j.at("tolerance").get<double>();
        r.pass = j.at("pass").get<bool>();
        r.inputs_digest = j.at("inputs_digest").get<std::string>();
        r.relation = j.value("relation", std::string("<="));
        r.informational = j.value("informational", false);
        r.note = j.value("note", std::string{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidSpec, std::string("malformed report: ") + e.what());
    }
}

void write_json_lines(std::ostream& out, const std::vector<InequalityReport>& reports) {
    for (const auto& r : reports) {
        out << to_json(r).dump() << '\n';
    }
}

std::string fnv1a_hex(std::string_view bytes) { return hex(fnv1a(kFnvOffset, bytes)); }

std::string density_digest(const GridDensity& d) {
    std::uint64_t h = fnv1a(kFnvOffset, geometry(d));
    const auto v = d.values();
    h = fnv1a(h, std::string_view(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double)));
    return hex(h);
}

std::string inputs_digest(std::initializer_list<const GridDensity*> densities,
                          std::initializer_list<double> params) {
    std::string text;
    for (const GridDensity* d : densities) {
        text += d->label() + ":" + density_digest(*d) + ";";
    }
    for (double p : params) {
        text += detail::format_g17(p) + ";";
    }
    return fnv1a_hex(text);
}

}  // namespace entlab
