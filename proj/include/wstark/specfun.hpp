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
 * Integer-order Bessel functions of the first kind and the two-index,
 * three-argument generalization J_{n,m}(x, y, z): the coefficient of
 * a^n b^m in
 *
 *   exp([x(a - 1/a) + y(b - 1/b) + z(ab - 1/(ab))] / 2).
 *
 * Expanding each exponential factor gives the product series
 *
 *   J_{n,m}(x, y, z) = sum_k J_{n-k}(x) J_{m-k}(y) J_k(z),
 *
 * which is what two_index_bessel evaluates.
 */

#pragma once

#include "wstark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace wstark {

namespace detail {

inline void check_bessel_argument(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("Bessel argument must be finite and non-negative, got " +
                          std::to_string(x));
    }
}

// Ascending series, one order at a time. Used for x <= 1 where it converges
// in a handful of terms without cancellation.
inline std::vector<double> bessel_series_orders(int nmax, double x) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    const double half = 0.5 * x;
    const double q = -half * half;
    double lead = 1.0; // (x/2)^n / n!
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) {
            lead *= half / n;
        }
        if (lead == 0.0) {
            break;
        }
        double term = lead;
        double sum = lead;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * (n + k));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        out[static_cast<std::size_t>(n)] = sum;
    }
    return out;
}

// Miller's downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, started far
// above max(nmax, x) and normalized with J_0 + 2 sum_k J_{2k} = 1.
inline std::vector<double> bessel_miller_orders(int nmax, double x) {
    const double top = std::max(static_cast<double>(nmax), std::ceil(x));
    int start = static_cast<int>(top + 30.0 + std::ceil(std::sqrt(40.0 * top)));
    start += start % 2;
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    constexpr double big = 1e250;
    double above = 0.0;   // J_{k+1}
    double current = 1e-300; // J_k, k = start
    double norm = 0.0;
    const double two_over_x = 2.0 / x;
    for (int k = start; k >= 1; --k) {
        const double below = k * two_over_x * current - above;
        above = current;
        current = below; // now J_{k-1}
        const int order = k - 1;
        if (order <= nmax) {
            out[static_cast<std::size_t>(order)] = current;
        }
        if (order > 0 && order % 2 == 0) {
            norm += 2.0 * current;
        }
        if (std::abs(current) > big) {
            current /= big;
            above /= big;
            norm /= big;
            for (int o = order; o <= nmax; ++o) {
                out[static_cast<std::size_t>(o)] /= big;
            }
        }
    }
    norm += current; // J_0
    for (auto &v : out) {
        v /= norm;
    }
    return out;
}

} // namespace detail

/// J_0(x) ... J_nmax(x) for x >= 0.
inline std::vector<double> bessel_j_orders(int nmax, double x) {
    detail::check_bessel_argument(x);
    if (nmax < 0) {
        throw DomainError("maximum Bessel order must be >= 0");
    }
    if (x == 0.0) {
        std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    if (x <= 1.0) {
        return detail::bessel_series_orders(nmax, x);
    }
    return detail::bessel_miller_orders(nmax, x);
}

/// First-kind Bessel function of integer order. J_{-n} = (-1)^n J_n is
/// applied exactly.
inline double bessel_j(int n, double x) {
    const int order = std::abs(n);
    const double value = bessel_j_orders(order, x)[static_cast<std::size_t>(order)];
    return (n < 0 && order % 2 != 0) ? -value : value;
}

/// J_k(x) for all |k| <= max_order at a fixed argument.
class BesselSequence {
  public:
    BesselSequence() = default;
    BesselSequence(double x, int max_order)
        : x_(x), values_(bessel_j_orders(max_order, x)) {}

    [[nodiscard]] double argument() const noexcept { return x_; }
    [[nodiscard]] int max_order() const noexcept {
        return static_cast<int>(values_.size()) - 1;
    }

    /// Orders beyond max_order() read as zero; callers size the sequence so
    /// that this only happens below the tail tolerance.
    [[nodiscard]] double operator()(int k) const {
        const int order = std::abs(k);
        if (order > max_order()) {
            return 0.0;
        }
        const double v = values_[static_cast<std::size_t>(order)];
        return (k < 0 && order % 2 != 0) ? -v : v;
    }

  private:
    double x_ = 0.0;
    std::vector<double> values_{1.0};
};

struct TwoIndexBesselValue {
    int n = 0;
    int m = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

namespace detail {

// min(1, (z/2)^k / k!), the standard bound on |J_k(z)|
inline double bessel_envelope(int k, double z) {
    k = std::abs(k);
    if (k == 0) {
        return 1.0;
    }
    if (z == 0.0) {
        return 0.0;
    }
    const double log_env = k * std::log(0.5 * z) - std::lgamma(k + 1.0);
    return log_env >= 0.0 ? 1.0 : std::exp(log_env);
}

} // namespace detail

/// Evaluates J_{n,m}(x, y, z) for many index pairs at fixed arguments. The
/// summation range |k| <= K is chosen once so that the envelope tail
/// sum_{|k|>K} (z/2)^|k| / |k|! stays below 1e-16.
class TwoIndexBessel {
  public:
    static constexpr double tail_target = 1e-16;

    TwoIndexBessel(double x, double y, double z, int max_index)
        : x_(x), y_(y), z_(z), max_index_(max_index) {
        detail::check_bessel_argument(x);
        detail::check_bessel_argument(y);
        detail::check_bessel_argument(z);
        if (max_index < 0) {
            throw DomainError("max_index must be >= 0");
        }
        k_max_ = 0;
        tail_ = tail_beyond(0);
        while (tail_ > tail_target) {
            ++k_max_;
            tail_ = tail_beyond(k_max_);
        }
        const int order = max_index_ + k_max_ + 1;
        jx_ = BesselSequence(x, order);
        jy_ = BesselSequence(y, order);
        jz_ = BesselSequence(z, k_max_ + 1);
    }

    [[nodiscard]] int max_index() const noexcept { return max_index_; }
    [[nodiscard]] int summation_radius() const noexcept { return k_max_; }

    [[nodiscard]] TwoIndexBesselValue operator()(int n, int m) const {
        if (std::abs(n) > max_index_ || std::abs(m) > max_index_) {
            throw DomainError("index beyond the evaluator's max_index");
        }
        double sum = 0.0;
        double magnitude = 0.0;
        for (int k = -k_max_; k <= k_max_; ++k) {
            const double term = jx_(n - k) * jy_(m - k) * jz_(k);
            sum += term;
            magnitude += std::abs(term);
        }
        const double rounding =
            4.0 * std::numeric_limits<double>::epsilon() * (1.0 + magnitude);
        return {n, m, x_, y_, z_, sum, tail_ + rounding};
    }

    [[nodiscard]] double value(int n, int m) const { return (*this)(n, m).value; }

  private:
    [[nodiscard]] double tail_beyond(int k) const {
        double tail = 0.0;
        for (int j = k + 1; j < k + 400; ++j) {
            const double env = detail::bessel_envelope(j, z_);
            tail += 2.0 * env;
            if (env < 1e-30 && j > z_) {
                break;
            }
        }
        return tail;
    }

    double x_, y_, z_;
    int max_index_;
    int k_max_ = 0;
    double tail_ = 0.0;
    BesselSequence jx_, jy_, jz_;
};

inline TwoIndexBesselValue two_index_bessel(int n, int m, double x, double y,
                                            double z) {
    const TwoIndexBessel eval(x, y, z, std::max(std::abs(n), std::abs(m)));
    return eval(n, m);
}

/// Residuals of the coupled recurrences
///   n G_{n,m} = (x/2)(G_{n+1,m} + G_{n-1,m}) + (z/2)(G_{n-1,m-1} + G_{n+1,m+1})
///   m G_{n,m} = (y/2)(G_{n,m+1} + G_{n,m-1}) + (z/2)(G_{n-1,m-1} + G_{n+1,m+1})
/// for an arbitrary table accessor @p g(n, m).
template <class Accessor>
std::pair<double, double> two_index_recurrence_residual(int n, int m, double x,
                                                        double y, double z,
                                                        Accessor &&g) {
    const double diag = 0.5 * z * (g(n - 1, m - 1) + g(n + 1, m + 1));
    const double center = g(n, m);
    const double r1 = n * center - 0.5 * x * (g(n + 1, m) + g(n - 1, m)) - diag;
    const double r2 = m * center - 0.5 * y * (g(n, m + 1) + g(n, m - 1)) - diag;
    return {r1, r2};
}

inline std::pair<double, double>
two_index_recurrence_residual(int n, int m, double x, double y, double z) {
    const TwoIndexBessel eval(x, y, z, std::max(std::abs(n), std::abs(m)) + 1);
    return two_index_recurrence_residual(
        n, m, x, y, z, [&eval](int a, int b) { return eval.value(a, b); });
}

} // namespace wstark
