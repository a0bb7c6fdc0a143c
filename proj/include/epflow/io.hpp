#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "epflow/dynamics.hpp"
#include "epflow/errors.hpp"
#include "epflow/functionals.hpp"

namespace epflow {

inline constexpr const char* version = "0.1.0";

/// Shortest-safe round-trip text for a double: 17 significant digits, '.' separator.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_hash(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

/// Writes text to a sibling temp file and renames it over path.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

/// Minimal CSV builder; every field is a number or a string without separators.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row(header); }

    void row(std::span<const std::string> cells) {
        if (cells.size() != cols_) throw std::logic_error("CSV row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    void row(std::initializer_list<std::string> cells) { row(std::span<const std::string>(cells.begin(), cells.size())); }

    const std::string& str() const { return text_; }

private:
    std::size_t cols_;
    std::string text_;
};

inline std::vector<std::string> series_header() {
    return {"t", "phi0", "sup_norm", "l2_norm", "energy", "origin_identity_lhs", "origin_identity_rhs",
            "gap", "criterion_integral", "min_phi_prime", "sup_gprime"};
}

inline std::string series_csv(std::span<const DiagnosticsRecord> records) {
    CsvWriter csv(series_header());
    for (const auto& r : records) {
        csv.row({format_number(r.t), format_number(r.phi0), format_number(r.sup_norm), format_number(r.l2_norm),
                 format_number(r.energy), format_number(r.origin_identity_lhs), format_number(r.origin_identity_rhs),
                 format_number(r.gap), format_number(r.criterion_integral), format_number(r.min_phi_prime),
                 format_number(r.sup_gprime)});
    }
    return csv.str();
}

inline std::string snapshot_csv(const Snapshot& s) {
    CsvWriter csv({"r", "phi", "g"});
    const RadialGrid& grid = s.solve.phi.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv.row({format_number(grid.r(i)), format_number(s.solve.phi[i]), format_number(s.solve.g[i])});
    }
    return csv.str();
}

inline nlohmann::json to_json(const TerminationReport& r) {
    nlohmann::json j = {{"reason", to_string(r.reason)},
                        {"t_end", r.t_end},
                        {"criterion_integral", r.criterion_integral},
                        {"steps", r.steps},
                        {"message", r.message}};
    if (r.t_star_estimate) {
        j["t_star_estimate"] = {{"t_star", r.t_star_estimate->t_star},
                                {"uncertainty", r.t_star_estimate->uncertainty}};
    } else {
        j["t_star_estimate"] = nullptr;
    }
    return j;
}

}  // namespace epflow
