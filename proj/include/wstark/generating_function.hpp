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
 * Independent route to J_{n,m}(x, y, z): sample the generating function on
 * the torus a = e^{i theta}, b = e^{i phi} and extract Fourier coefficients
 * with a 2D FFT. On the torus the generating function is
 * exp(i[x sin(theta) + y sin(phi) + z sin(theta + phi)]), so this route
 * shares no code with the product expansion.
 */

#pragma once

#include "wstark/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace wstark {

namespace detail {

/// Unnormalized forward DFT, sign e^{-2 pi i jk/N}.
inline void fft_inplace(Eigen::FFT<double> &engine, std::vector<std::complex<double>> &a,
                        std::vector<std::complex<double>> &scratch) {
    engine.fwd(scratch, a);
    a.swap(scratch);
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace detail

/// All Fourier coefficients of the two-index generating function on a
/// grid x grid torus. Coefficient (n, m) is exact up to aliasing from
/// (n + p*grid, m + q*grid).
class GeneratingFunctionGrid {
  public:
    GeneratingFunctionGrid(double x, double y, double z, int grid)
        : x_(x), y_(y), z_(z), grid_(grid) {
        if (!detail::is_power_of_two(grid) || grid < 2) {
            throw InputError("FFT grid must be a power of two, got " +
                             std::to_string(grid));
        }
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
            throw DomainError("generating-function arguments must be finite");
        }
        const auto g = static_cast<std::size_t>(grid);
        coeffs_.assign(g * g, {});
        const double step = 2.0 * std::numbers::pi / grid;
        for (std::size_t p = 0; p < g; ++p) {
            const double theta = step * static_cast<double>(p);
            for (std::size_t q = 0; q < g; ++q) {
                const double phi = step * static_cast<double>(q);
                const double phase =
                    x * std::sin(theta) + y * std::sin(phi) + z * std::sin(theta + phi);
                coeffs_[p * g + q] = std::polar(1.0, phase);
            }
        }
        Eigen::FFT<double> engine;
        std::vector<std::complex<double>> line(g);
        std::vector<std::complex<double>> scratch(g);
        for (std::size_t p = 0; p < g; ++p) {
            std::copy_n(coeffs_.begin() + static_cast<std::ptrdiff_t>(p * g), g,
                        line.begin());
            detail::fft_inplace(engine, line, scratch);
            std::copy_n(line.begin(), g,
                        coeffs_.begin() + static_cast<std::ptrdiff_t>(p * g));
        }
        for (std::size_t q = 0; q < g; ++q) {
            for (std::size_t p = 0; p < g; ++p) {
                line[p] = coeffs_[p * g + q];
            }
            detail::fft_inplace(engine, line, scratch);
            for (std::size_t p = 0; p < g; ++p) {
                coeffs_[p * g + q] = line[p] / static_cast<double>(g * g);
            }
        }
    }

    [[nodiscard]] int grid() const noexcept { return grid_; }

    [[nodiscard]] std::complex<double> coefficient(int n, int m) const {
        const auto wrap = [this](int k) {
            return static_cast<std::size_t>(((k % grid_) + grid_) % grid_);
        };
        return coeffs_[wrap(n) * static_cast<std::size_t>(grid_) + wrap(m)];
    }

    /// True when (n, m) is far enough from the Nyquist band that aliasing is
    /// negligible for these arguments.
    [[nodiscard]] bool resolves(int n, int m) const {
        const double reach = std::max({std::abs(x_), std::abs(y_), std::abs(z_)});
        return grid_ >= 64 &&
               grid_ > 2 * (std::abs(n) + std::abs(m)) + 6.0 * reach;
    }

  private:
    double x_, y_, z_;
    int grid_;
    std::vector<std::complex<double>> coeffs_;
};

struct TwoIndexOracleValue {
    double value = 0.0;
    double imaginary_part = 0.0; ///< should be round-off for real arguments
    bool accuracy_warning = false;
    std::string note;
};

/// Coefficient (n, m) of the generating function via 2D FFT. Arguments may
/// have any sign.
inline TwoIndexOracleValue two_index_bessel_oracle(int n, int m, double x, double y,
                                                   double z, int grid) {
    const GeneratingFunctionGrid g(x, y, z, grid);
    const auto c = g.coefficient(n, m);
    TwoIndexOracleValue out{c.real(), c.imag(), false, {}};
    if (!g.resolves(n, m)) {
        out.accuracy_warning = true;
        out.note = "grid " + std::to_string(grid) +
                   " too small for indices/arguments; aliasing may exceed 1e-12";
    }
    return out;
}

} // namespace wstark
