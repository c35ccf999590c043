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
 * Drive protocols (hopping amplitudes alpha_i(t), field components
 * beta_j(t)) and the phase integrals that parametrize every kernel:
 *
 *   f_i(t)    = sum_j sigma(j,i) int_0^t beta_j
 *   F_{ji}(t) = -i sigma(j,i) int_0^t alpha_i exp(i f_i)
 *
 * Time is dimensionless with hbar = 1. Indices are zero-based.
 */

#pragma once

#include "wstark/errors.hpp"
#include "wstark/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wstark {

using cplx = std::complex<double>;

struct Constant {
    cplx value;
};

/// amplitude * cos(omega * t + phase)
struct Harmonic {
    cplx amplitude;
    double omega = 0.0;
    double phase = 0.0;
};

/// Samples on a uniform grid t0, t0 + dt, ... interpolated linearly
/// (order 1) or with a local four-point cubic (order 3).
struct Sampled {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<cplx> values;
    int order = 1;

    [[nodiscard]] double end() const {
        return t0 + dt * static_cast<double>(values.size() - 1);
    }

    /// Builds from explicit (time, value) points, checking that the grid is
    /// strictly increasing and uniform.
    static Sampled from_points(std::span<const double> times,
                               std::span<const cplx> values, int order = 1) {
        if (times.size() != values.size()) {
            throw InputError("sampled drive: times and values differ in size");
        }
        if (times.size() < 2) {
            throw InputError("sampled drive needs at least two samples");
        }
        const double dt = times[1] - times[0];
        if (!(dt > 0.0)) {
            throw InputError("sampled drive: grid must be strictly increasing");
        }
        for (std::size_t k = 1; k < times.size(); ++k) {
            const double step = times[k] - times[k - 1];
            if (!(step > 0.0) || std::abs(step - dt) > 1e-9 * std::max(1.0, dt)) {
                throw InputError("sampled drive: grid spacing is not uniform");
            }
        }
        return Sampled{times[0], dt, {values.begin(), values.end()}, order};
    }
};

using Signal = std::variant<Constant, Harmonic, Sampled>;

namespace detail {

inline cplx sampled_value(const Sampled &s, double t) {
    const auto count = static_cast<long>(s.values.size());
    const double u = (t - s.t0) / s.dt;
    long k = static_cast<long>(std::floor(u));
    k = std::clamp<long>(k, 0, count - 2);
    const double r = u - static_cast<double>(k);
    if (s.order != 3 || count < 4) {
        return s.values[static_cast<std::size_t>(k)] * (1.0 - r) +
               s.values[static_cast<std::size_t>(k + 1)] * r;
    }
    // four-point Lagrange stencil, shifted inward at the ends
    const long base = std::clamp<long>(k - 1, 0, count - 4);
    const double x = u - static_cast<double>(base);
    cplx out{};
    for (long a = 0; a < 4; ++a) {
        double w = 1.0;
        for (long b = 0; b < 4; ++b) {
            if (b != a) {
                w *= (x - static_cast<double>(b)) / static_cast<double>(a - b);
            }
        }
        out += w * s.values[static_cast<std::size_t>(base + a)];
    }
    return out;
}

} // namespace detail

inline cplx evaluate(const Signal &signal, double t) {
    return std::visit(
        [t](const auto &s) -> cplx {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Constant>) {
                return s.value;
            } else if constexpr (std::is_same_v<S, Harmonic>) {
                return s.amplitude * std::cos(s.omega * t + s.phase);
            } else {
                return detail::sampled_value(s, t);
            }
        },
        signal);
}

/// Last time at which the signal is defined.
inline double signal_end(const Signal &signal) {
    if (const auto *s = std::get_if<Sampled>(&signal)) {
        return s->end();
    }
    return std::numeric_limits<double>::infinity();
}

/// Upper bound on |signal(t)|.
inline double magnitude_bound(const Signal &signal) {
    return std::visit(
        [](const auto &s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Constant>) {
                return std::abs(s.value);
            } else if constexpr (std::is_same_v<S, Harmonic>) {
                return std::abs(s.amplitude);
            } else {
                double m = 0.0;
                for (const auto &v : s.values) {
                    m = std::max(m, std::abs(v));
                }
                return m;
            }
        },
        signal);
}

/// Fastest time scale present in the signal (1/time units).
inline double rate_bound(const Signal &signal) {
    if (const auto *h = std::get_if<Harmonic>(&signal)) {
        return std::abs(h->omega);
    }
    if (const auto *s = std::get_if<Sampled>(&signal)) {
        return 1.0 / s->dt;
    }
    return 0.0;
}

inline std::string describe(const Signal &signal) {
    char buf[160];
    std::visit(
        [&buf](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Constant>) {
                std::snprintf(buf, sizeof buf, "const(%.17g,%.17g)",
                              s.value.real(), s.value.imag());
            } else if constexpr (std::is_same_v<S, Harmonic>) {
                std::snprintf(buf, sizeof buf,
                              "harmonic(%.17g,%.17g;w=%.17g;phi=%.17g)",
                              s.amplitude.real(), s.amplitude.imag(), s.omega,
                              s.phase);
            } else {
                std::snprintf(buf, sizeof buf,
                              "sampled(t0=%.17g;dt=%.17g;n=%zu;order=%d)", s.t0,
                              s.dt, s.values.size(), s.order);
            }
        },
        signal);
    return buf;
}

class DriveProtocol {
  public:
    DriveProtocol() = default;
    DriveProtocol(std::vector<Signal> alphas, std::vector<Signal> betas)
        : alphas_(std::move(alphas)), betas_(std::move(betas)) {
        validate();
    }

    /// Constant hoppings and fields.
    static DriveProtocol constant(std::span<const cplx> alphas,
                                  std::span<const double> betas) {
        std::vector<Signal> a;
        std::vector<Signal> b;
        for (const auto &v : alphas) {
            a.emplace_back(Constant{v});
        }
        for (const auto &v : betas) {
            b.emplace_back(Constant{cplx(v, 0.0)});
        }
        return {std::move(a), std::move(b)};
    }

    [[nodiscard]] const std::vector<Signal> &alphas() const noexcept {
        return alphas_;
    }
    [[nodiscard]] const std::vector<Signal> &betas() const noexcept {
        return betas_;
    }
    [[nodiscard]] std::size_t coordination() const noexcept {
        return alphas_.size();
    }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return betas_.size();
    }

    [[nodiscard]] cplx alpha(std::size_t i, double t) const {
        return evaluate(alphas_[i], t);
    }
    [[nodiscard]] double beta(std::size_t j, double t) const {
        return evaluate(betas_[j], t).real();
    }

    [[nodiscard]] double t_max() const {
        double end = std::numeric_limits<double>::infinity();
        for (const auto &s : alphas_) {
            end = std::min(end, signal_end(s));
        }
        for (const auto &s : betas_) {
            end = std::min(end, signal_end(s));
        }
        return end;
    }

    [[nodiscard]] std::string summary() const {
        std::string out = "alpha=[";
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            out += (i ? "," : "") + describe(alphas_[i]);
        }
        out += "];beta=[";
        for (std::size_t j = 0; j < betas_.size(); ++j) {
            out += (j ? "," : "") + describe(betas_[j]);
        }
        return out + "]";
    }

    void require_compatible(const LatticeSpec &lattice) const {
        if (alphas_.size() != static_cast<std::size_t>(lattice.coordination()) ||
            betas_.size() != static_cast<std::size_t>(lattice.dimension())) {
            throw DimensionMismatch(
                "drive has " + std::to_string(alphas_.size()) + " hoppings and " +
                std::to_string(betas_.size()) + " field components; lattice needs " +
                std::to_string(lattice.coordination()) + " and " +
                std::to_string(lattice.dimension()));
        }
    }

  private:
    void validate() const {
        if (betas_.empty() || alphas_.size() < betas_.size()) {
            throw InputError("drive needs c >= d >= 1 components");
        }
        auto check = [](const Signal &s, bool real) {
            auto finite = [](cplx v) {
                return std::isfinite(v.real()) && std::isfinite(v.imag());
            };
            std::visit(
                [&](const auto &v) {
                    using S = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<S, Constant>) {
                        if (!finite(v.value) || (real && v.value.imag() != 0.0)) {
                            throw InputError("invalid constant drive value");
                        }
                    } else if constexpr (std::is_same_v<S, Harmonic>) {
                        if (!finite(v.amplitude) || !std::isfinite(v.omega) ||
                            !std::isfinite(v.phase) ||
                            (real && v.amplitude.imag() != 0.0)) {
                            throw InputError("invalid harmonic drive");
                        }
                    } else {
                        if (v.values.size() < 2 || !(v.dt > 0.0) ||
                            !std::isfinite(v.t0) || v.t0 > 0.0) {
                            throw InputError(
                                "sampled drive needs >= 2 samples, dt > 0 and "
                                "a grid starting at or before t = 0");
                        }
                        if (v.order != 1 && v.order != 3) {
                            throw InputError("interpolation order must be 1 or 3");
                        }
                        for (const auto &x : v.values) {
                            if (!finite(x) || (real && x.imag() != 0.0)) {
                                throw InputError("non-finite or complex sample in "
                                                 "drive");
                            }
                        }
                    }
                },
                s);
        };
        for (const auto &s : alphas_) {
            check(s, false);
        }
        for (const auto &s : betas_) {
            check(s, true);
        }
    }

    std::vector<Signal> alphas_;
    std::vector<Signal> betas_;
};

/// Snapshot of the phase integrals at one time.
struct PhaseIntegrals {
    double time = 0.0;
    LatticeSpec lattice;
    std::vector<double> f;       ///< f_i, one per direction
    std::vector<cplx> amplitude; ///< -i int alpha_i e^{i f_i}, one per direction
    double error_estimate = 0.0;

    /// F_{ji} = sigma(j,i) * amplitude_i; exactly zero where sigma vanishes.
    [[nodiscard]] cplx F(int j, int i) const {
        return static_cast<double>(lattice.sigma(j, i)) *
               amplitude[static_cast<std::size_t>(i)];
    }
    /// Integrated field along primitive axis j (equals f_j for j < d).
    [[nodiscard]] double field_phase(int j) const {
        return f[static_cast<std::size_t>(j)];
    }
};

namespace detail {

struct PhaseState {
    std::vector<double> field;  // int_0^t beta_j
    std::vector<cplx> amp;      // -i int alpha_i e^{i f_i}
};

inline void phase_rhs(const DriveProtocol &drive, const LatticeSpec &lat,
                      double t, const PhaseState &y, PhaseState &dy) {
    const int d = lat.dimension();
    const int c = lat.coordination();
    for (int j = 0; j < d; ++j) {
        dy.field[static_cast<std::size_t>(j)] =
            drive.beta(static_cast<std::size_t>(j), t);
    }
    for (int i = 0; i < c; ++i) {
        double fi = 0.0;
        for (int j = 0; j < d; ++j) {
            fi += lat.sigma(j, i) * y.field[static_cast<std::size_t>(j)];
        }
        dy.amp[static_cast<std::size_t>(i)] =
            cplx(0.0, -1.0) * drive.alpha(static_cast<std::size_t>(i), t) *
            std::polar(1.0, fi);
    }
}

template <class T> void kahan(T &sum, T &carry, T increment) {
    const T corrected = increment - carry;
    const T next = sum + corrected;
    carry = (next - sum) - corrected;
    sum = next;
}

inline PhaseState integrate_phases(const DriveProtocol &drive,
                                   const LatticeSpec &lat, double t, long steps) {
    const auto d = static_cast<std::size_t>(lat.dimension());
    const auto c = static_cast<std::size_t>(lat.coordination());
    PhaseState y{std::vector<double>(d, 0.0), std::vector<cplx>(c)};
    if (steps == 0) {
        return y;
    }
    PhaseState k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    std::vector<double> field_carry(d, 0.0);
    std::vector<cplx> amp_carry(c);
    const double h = t / static_cast<double>(steps);
    auto axpy = [&](const PhaseState &k, double s) {
        for (std::size_t j = 0; j < d; ++j) {
            tmp.field[j] = y.field[j] + s * k.field[j];
        }
        for (std::size_t i = 0; i < c; ++i) {
            tmp.amp[i] = y.amp[i] + s * k.amp[i];
        }
    };
    for (long n = 0; n < steps; ++n) {
        const double t0 = h * static_cast<double>(n);
        phase_rhs(drive, lat, t0, y, k1);
        axpy(k1, 0.5 * h);
        phase_rhs(drive, lat, t0 + 0.5 * h, tmp, k2);
        axpy(k2, 0.5 * h);
        phase_rhs(drive, lat, t0 + 0.5 * h, tmp, k3);
        axpy(k3, h);
        phase_rhs(drive, lat, t0 + h, tmp, k4);
        // compensated accumulation: thousands of small increments would
        // otherwise leave ~steps * eps of round-off in the result
        for (std::size_t j = 0; j < d; ++j) {
            kahan(y.field[j], field_carry[j],
                  h / 6.0 *
                      (k1.field[j] + 2.0 * k2.field[j] + 2.0 * k3.field[j] + k4.field[j]));
        }
        for (std::size_t i = 0; i < c; ++i) {
            kahan(y.amp[i], amp_carry[i],
                  h / 6.0 * (k1.amp[i] + 2.0 * k2.amp[i] + 2.0 * k3.amp[i] + k4.amp[i]));
        }
    }
    return y;
}

inline void check_time(const DriveProtocol &drive, double t) {
    if (!std::isfinite(t) || t < 0.0 || t > drive.t_max()) {
        throw DomainError("time " + std::to_string(t) +
                          " outside the drive's range [0, t_max]");
    }
}

} // namespace detail

/// Step count for the coupled RK4 integration of (f, F) over [0, t]: the
/// step is at most 1e-3 of the fastest drive time scale (and of 1).
inline long phase_integration_steps(const DriveProtocol &drive, double t) {
    if (t == 0.0) {
        return 0;
    }
    double rate = 1.0;
    for (const auto &s : drive.betas()) {
        rate = std::max({rate, magnitude_bound(s), rate_bound(s)});
    }
    for (const auto &s : drive.alphas()) {
        rate = std::max(rate, rate_bound(s));
    }
    const double h_max = 1e-3 / rate;
    return std::max(1L, static_cast<long>(std::ceil(t / h_max)));
}

/// Jointly integrates f and F on [0, t] with classical RK4; a second run at
/// half the step gives a Richardson error estimate. The finer result is
/// returned.
inline PhaseIntegrals phase_integrals(const DriveProtocol &drive,
                                      const LatticeSpec &lattice, double t) {
    drive.require_compatible(lattice);
    detail::check_time(drive, t);
    const long steps = phase_integration_steps(drive, t);
    const auto coarse = detail::integrate_phases(drive, lattice, t, steps);
    const auto fine = detail::integrate_phases(drive, lattice, t, 2 * steps);

    PhaseIntegrals out;
    out.time = t;
    out.lattice = lattice;
    const int d = lattice.dimension();
    const int c = lattice.coordination();
    double diff = 0.0;
    for (int j = 0; j < d; ++j) {
        diff = std::max(diff, std::abs(fine.field[static_cast<std::size_t>(j)] -
                                       coarse.field[static_cast<std::size_t>(j)]));
    }
    for (int i = 0; i < c; ++i) {
        double fi = 0.0;
        for (int j = 0; j < d; ++j) {
            fi += lattice.sigma(j, i) * fine.field[static_cast<std::size_t>(j)];
        }
        out.f.push_back(fi);
        diff = std::max(diff, std::abs(fine.amp[static_cast<std::size_t>(i)] -
                                       coarse.amp[static_cast<std::size_t>(i)]));
    }
    out.amplitude = fine.amp;
    out.error_estimate = diff / 15.0;
    return out;
}

inline double phase_f(const DriveProtocol &drive, const LatticeSpec &lattice,
                      int i, double t) {
    if (i < 0 || i >= lattice.coordination()) {
        throw DomainError("direction index out of range");
    }
    return phase_integrals(drive, lattice, t).f[static_cast<std::size_t>(i)];
}

inline cplx amplitude_F(const DriveProtocol &drive, const LatticeSpec &lattice,
                        int j, int i, double t) {
    if (i < 0 || i >= lattice.coordination() || j < 0 ||
        j >= lattice.dimension()) {
        throw DomainError("index out of range");
    }
    return phase_integrals(drive, lattice, t).F(j, i);
}

struct ConstantPhases {
    double f;
    cplx F;
};

/// Analytic phase integrals for a constant hopping @p alpha and field
/// @p beta on a chain.
inline ConstantPhases closed_form_constant(cplx alpha, double beta, double t) {
    const double x = beta * t;
    // (e^{ix} - 1) / (ix), evaluated without cancellation for small x
    cplx ratio;
    if (std::abs(x) < 1e-4) {
        ratio = cplx(1.0 - x * x / 6.0, x / 2.0 - x * x * x / 24.0);
    } else {
        ratio = (std::polar(1.0, x) - 1.0) / cplx(0.0, x);
    }
    return {x, cplx(0.0, -1.0) * alpha * t * ratio};
}

} // namespace wstark
