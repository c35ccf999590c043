// Copyright 2026 The wstark Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Serialization of kernel tables and reports.
 *
 * Kernel CSV: one row per (target, source) pair, targets outermost,
 *   n1..nd, m1..md, re, im, abs
 * with n = target site and m = source site. Numbers use %.17g so output is
 * byte-identical across runs.
 */

#pragma once

#include "wstark/kernel_table.hpp"
#include "wstark/lattice_general.hpp"
#include "wstark/specfun.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>

namespace wstark {

inline constexpr int report_schema_version = 1;

/// %.17g, with negative zero printed as 0.
inline std::string format_double(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_kernel_csv(const KernelTable &table, std::ostream &os) {
    const int d = table.dimension();
    for (int k = 1; k <= d; ++k) {
        os << (d == 1 ? "n" : "n" + std::to_string(k)) << ',';
    }
    for (int k = 1; k <= d; ++k) {
        os << (d == 1 ? "m" : "m" + std::to_string(k)) << ',';
    }
    os << "re,im,abs\n";
    const auto sites = table.window.sites();
    for (std::size_t n = 0; n < sites; ++n) {
        const auto target = table.window.coords(n);
        for (std::size_t m = 0; m < sites; ++m) {
            const auto source = table.window.coords(m);
            for (int c : target) {
                os << c << ',';
            }
            for (int c : source) {
                os << c << ',';
            }
            const auto v = table.entries(static_cast<Eigen::Index>(n),
                                         static_cast<Eigen::Index>(m));
            os << format_double(v.real()) << ',' << format_double(v.imag()) << ','
               << format_double(std::abs(v)) << '\n';
        }
    }
}

inline nlohmann::json window_json(const Window &window) {
    auto out = nlohmann::json::array();
    for (const auto &ax : window.axes()) {
        out.push_back({ax.lo, ax.hi});
    }
    return out;
}

/// Metadata envelope; entries (row-major, target outermost) are included
/// on request.
inline nlohmann::json kernel_json(const KernelTable &table, bool with_entries = false) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["kind"] = "kernel_table";
    j["dimension"] = table.dimension();
    j["window"] = window_json(table.window);
    j["time"] = table.time;
    j["convention"] = to_string(table.convention);
    j["drive_summary"] = table.drive_summary;
    j["warnings"] = table.warnings;
    if (with_entries) {
        auto re = nlohmann::json::array();
        auto im = nlohmann::json::array();
        for (Eigen::Index r = 0; r < table.entries.rows(); ++r) {
            for (Eigen::Index c = 0; c < table.entries.cols(); ++c) {
                re.push_back(table.entries(r, c).real());
                im.push_back(table.entries(r, c).imag());
            }
        }
        j["entries"] = {{"re", re}, {"im", im}};
    }
    return j;
}

inline nlohmann::json residual_json(const ResidualReport &report) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["kind"] = "mm_residual";
    auto eqs = nlohmann::json::array();
    for (const auto *group : {&report.shift, &report.difference}) {
        for (const auto &eq : *group) {
            eqs.push_back({{"equation", eq.name},
                           {"index", eq.index},
                           {"redundant", eq.redundant},
                           {"max_abs", eq.max_abs},
                           {"points", eq.points}});
        }
    }
    j["equations"] = eqs;
    j["max_retained"] = report.max_retained;
    j["max_all"] = report.max_all;
    return j;
}

inline nlohmann::json bessel_json(const TwoIndexBesselValue &v) {
    return {{"n", v.n},         {"m", v.m},
            {"x", v.x},         {"y", v.y},
            {"z", v.z},         {"value", v.value},
            {"abs_error_estimate", v.abs_error_estimate}};
}

} // namespace wstark
