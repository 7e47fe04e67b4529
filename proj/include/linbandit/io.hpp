// File output for curves and bound overlays (CSV and JSON), plus the CSV
// reader the `slope` subcommand uses. Floats go out via %.17g so every value
// parses back bit-exact.
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linbandit/experiment.hpp"

namespace linbandit {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline constexpr const char* kCurveHeader =
    "policy,round,mse_mean,mse_stderr,regret_mean,regret_stderr,n_trials";
inline constexpr const char* kBoundsHeader =
    "round,mse_upper,mse_lower,tail_threshold,ofu_floor,ofu_regret_bound";

inline void write_curves_csv(std::ostream& os, const std::vector<AggregatedCurve>& curves) {
    os << kCurveHeader << "\n";
    for (const auto& curve : curves) {
        for (const auto& pt : curve.points) {
            os << curve.policy << ',' << pt.round << ',' << format_g17(pt.mse_mean) << ','
               << format_g17(pt.mse_stderr) << ',' << format_g17(pt.regret_mean) << ','
               << format_g17(pt.regret_stderr) << ',' << pt.n_trials << "\n";
        }
    }
}

inline void write_bounds_csv(std::ostream& os, const std::vector<BoundsPoint>& bounds) {
    os << kBoundsHeader << "\n";
    for (const auto& b : bounds) {
        os << b.round << ',' << format_g17(b.mse_upper) << ',' << format_g17(b.mse_lower) << ','
           << format_g17(b.tail_threshold) << ',' << format_g17(b.ofu_floor) << ','
           << format_g17(b.ofu_regret_bound) << "\n";
    }
}

inline void write_curves_json(std::ostream& os, const std::vector<AggregatedCurve>& curves) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& curve : curves) {
        for (const auto& pt : curve.points) {
            arr.push_back({{"policy", curve.policy},
                           {"round", pt.round},
                           {"mse_mean", pt.mse_mean},
                           {"mse_stderr", pt.mse_stderr},
                           {"regret_mean", pt.regret_mean},
                           {"regret_stderr", pt.regret_stderr},
                           {"n_trials", pt.n_trials}});
        }
    }
    os << arr.dump(2) << "\n";
}

inline void write_bounds_json(std::ostream& os, const std::vector<BoundsPoint>& bounds) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : bounds) {
        arr.push_back({{"round", b.round},
                       {"mse_upper", b.mse_upper},
                       {"mse_lower", b.mse_lower},
                       {"tail_threshold", b.tail_threshold},
                       {"ofu_floor", b.ofu_floor},
                       {"ofu_regret_bound", b.ofu_regret_bound}});
    }
    os << arr.dump(2) << "\n";
}

// Sibling path for the bounds table when curves and bounds go out together:
// "run.csv" -> "run.bounds.csv".
inline std::string bounds_sibling_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ".bounds";
    }
    return path.substr(0, dot) + ".bounds" + path.substr(dot);
}

// Writes the curve file at `path` (curves may be empty: header-only CSV or an
// empty JSON array). A non-empty bounds set goes to `path` when there are no
// curves, otherwise to the sibling path. Throws std::runtime_error naming the
// path on I/O failure.
inline void emit(const std::vector<AggregatedCurve>& curves,
                 const std::vector<BoundsPoint>& bounds, const std::string& path,
                 const std::string& format) {
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("emit: format must be csv or json");
    }
    auto open = [](const std::string& p) {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("emit: cannot open " + p + " for writing");
        return os;
    };
    const bool bounds_only = curves.empty() && !bounds.empty();
    if (!bounds_only) {
        auto os = open(path);
        format == "csv" ? write_curves_csv(os, curves) : write_curves_json(os, curves);
        if (!os) throw std::runtime_error("emit: write failed for " + path);
    }
    if (!bounds.empty()) {
        const std::string bpath = bounds_only ? path : bounds_sibling_path(path);
        auto os = open(bpath);
        format == "csv" ? write_bounds_csv(os, bounds) : write_bounds_json(os, bounds);
        if (!os) throw std::runtime_error("emit: write failed for " + bpath);
    }
}

// Reads a curves CSV back, grouping rows by policy in order of first
// appearance. Used by `slope` and by the round-trip tests.
inline std::vector<AggregatedCurve> read_curves_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCurveHeader) {
        throw std::runtime_error("read_curves_csv: missing or unexpected header");
    }
    std::vector<AggregatedCurve> curves;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw std::runtime_error("read_curves_csv: malformed row: " + line);
        }
        CurvePoint pt;
        pt.round = std::stol(fields[1]);
        pt.mse_mean = std::strtod(fields[2].c_str(), nullptr);
        pt.mse_stderr = std::strtod(fields[3].c_str(), nullptr);
        pt.regret_mean = std::strtod(fields[4].c_str(), nullptr);
        pt.regret_stderr = std::strtod(fields[5].c_str(), nullptr);
        pt.n_trials = std::stol(fields[6]);
        auto it = std::find_if(curves.begin(), curves.end(),
                               [&](const AggregatedCurve& c) { return c.policy == fields[0]; });
        if (it == curves.end()) {
            curves.push_back(AggregatedCurve{fields[0], {}});
            it = curves.end() - 1;
        }
        it->points.push_back(pt);
    }
    return curves;
}

inline std::vector<AggregatedCurve> read_curves_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_curves_csv: cannot open " + path);
    return read_curves_csv(is);
}

}  // namespace linbandit
