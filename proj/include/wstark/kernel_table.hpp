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
 * Finite windows of lattice sites and dense kernel tables U(target; source)
 * over them.
 */

#pragma once

#include "wstark/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wstark {

/// PaperMM satisfies the shift/difference recurrences of the Heisenberg map
/// literally (it is the adjoint of the forward propagator); ForwardSchrodinger
/// satisfies i dU/dt = H U with U(0) = 1.
enum class Convention { PaperMM, ForwardSchrodinger };

inline std::string to_string(Convention c) {
    return c == Convention::PaperMM ? "paper_mm" : "forward_schrodinger";
}

inline Convention convention_from_string(const std::string &s) {
    if (s == "paper_mm" || s == "PaperMM") {
        return Convention::PaperMM;
    }
    if (s == "forward_schrodinger" || s == "ForwardSchrodinger" || s == "forward") {
        return Convention::ForwardSchrodinger;
    }
    throw InputError("unknown convention '" + s + "'");
}

/// Inclusive index range [lo, hi] along one axis.
struct AxisRange {
    int lo = 0;
    int hi = 0;

    [[nodiscard]] int size() const noexcept { return hi - lo + 1; }
    [[nodiscard]] bool contains(int n) const noexcept { return n >= lo && n <= hi; }
    bool operator==(const AxisRange &) const = default;
};

/// Product of axis ranges, flattened row-major (axis 0 slowest).
class Window {
  public:
    Window() = default;
    explicit Window(std::vector<AxisRange> axes) : axes_(std::move(axes)) {
        if (axes_.empty()) {
            throw InputError("window needs at least one axis");
        }
        for (const auto &a : axes_) {
            if (a.hi < a.lo) {
                throw InputError("window axis has hi < lo");
            }
        }
        strides_.assign(axes_.size(), 1);
        for (std::size_t k = axes_.size() - 1; k > 0; --k) {
            strides_[k - 1] = strides_[k] * static_cast<std::size_t>(axes_[k].size());
        }
    }

    static Window symmetric(int dimension, int radius) {
        return Window(std::vector<AxisRange>(static_cast<std::size_t>(dimension),
                                             AxisRange{-radius, radius}));
    }

    [[nodiscard]] int dimension() const noexcept {
        return static_cast<int>(axes_.size());
    }
    [[nodiscard]] const std::vector<AxisRange> &axes() const noexcept { return axes_; }
    [[nodiscard]] const AxisRange &axis(int k) const {
        return axes_[static_cast<std::size_t>(k)];
    }
    [[nodiscard]] std::size_t sites() const noexcept {
        return axes_.empty() ? 0 : strides_[0] * static_cast<std::size_t>(axes_[0].size());
    }

    [[nodiscard]] bool contains(std::span<const int> coords) const {
        for (std::size_t k = 0; k < axes_.size(); ++k) {
            if (!axes_[k].contains(coords[k])) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] std::size_t index(std::span<const int> coords) const {
        if (coords.size() != axes_.size() || !contains(coords)) {
            throw DomainError("site outside window");
        }
        std::size_t flat = 0;
        for (std::size_t k = 0; k < axes_.size(); ++k) {
            flat += strides_[k] * static_cast<std::size_t>(coords[k] - axes_[k].lo);
        }
        return flat;
    }

    [[nodiscard]] std::vector<int> coords(std::size_t flat) const {
        std::vector<int> out(axes_.size());
        for (std::size_t k = 0; k < axes_.size(); ++k) {
            out[k] = axes_[k].lo + static_cast<int>(flat / strides_[k]);
            flat %= strides_[k];
        }
        return out;
    }

    /// Flat index of coords(flat) + shift, or nothing if it leaves the window.
    [[nodiscard]] std::optional<std::size_t> shifted(std::size_t flat,
                                                     std::span<const int> shift) const {
        auto c = coords(flat);
        for (std::size_t k = 0; k < axes_.size(); ++k) {
            c[k] += shift[k];
        }
        if (!contains(c)) {
            return std::nullopt;
        }
        return index(c);
    }

    /// Smallest distance from the site to any window edge.
    [[nodiscard]] int boundary_distance(std::size_t flat) const {
        const auto c = coords(flat);
        int dist = std::numeric_limits<int>::max();
        for (std::size_t k = 0; k < axes_.size(); ++k) {
            dist = std::min({dist, c[k] - axes_[k].lo, axes_[k].hi - c[k]});
        }
        return dist;
    }

    bool operator==(const Window &other) const { return axes_ == other.axes_; }

  private:
    std::vector<AxisRange> axes_;
    std::vector<std::size_t> strides_;
};

struct KernelTable {
    Window window;
    Eigen::MatrixXcd entries; ///< rows: target site, columns: source site
    double time = 0.0;
    Convention convention = Convention::ForwardSchrodinger;
    std::string drive_summary;
    std::vector<std::string> warnings;

    [[nodiscard]] int dimension() const noexcept { return window.dimension(); }

    [[nodiscard]] std::complex<double> operator()(std::span<const int> target,
                                                  std::span<const int> source) const {
        return entries(static_cast<Eigen::Index>(window.index(target)),
                       static_cast<Eigen::Index>(window.index(source)));
    }

    /// Same operator expressed in the other convention (adjoint).
    [[nodiscard]] KernelTable converted(Convention target) const {
        KernelTable out = *this;
        if (target != convention) {
            out.entries = entries.adjoint();
            out.convention = target;
        }
        return out;
    }
};

} // namespace wstark
