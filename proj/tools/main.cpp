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

// wstark command-line front end.
//
// Exit codes: 0 ok, 1 a requested check failed, 2 usage or config error,
// 3 drive violates the triangular phase constraint.

#include "config.hpp"
#include "runner.hpp"

#include "wstark/errors.hpp"
#include "wstark/generating_function.hpp"
#include "wstark/io.hpp"
#include "wstark/specfun.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed_checks = 1;
constexpr int exit_usage = 2;
constexpr int exit_constraint = 3;

struct ConfigArgs {
    std::string config;
    std::string out = ".";
    std::uint64_t seed = 0;
    double tolerance_scale = 1.0;
};

void add_config_args(CLI::App *sub, ConfigArgs &args) {
    sub->add_option("--config", args.config, "experiment YAML")->required();
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "seed for randomized spot checks")
        ->capture_default_str();
    sub->add_option("--tolerance-scale", args.tolerance_scale,
                    "multiplies every verification tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

int run_config(const ConfigArgs &args, wstark::cli::Mode mode) {
    using namespace wstark::cli;
    ExperimentConfig cfg;
    try {
        cfg = load_config(args.config);
    } catch (const ConfigError &e) {
        std::cerr << args.config << ':' << e.line() << ": " << e.what() << '\n';
        return exit_usage;
    }
    try {
        const auto outcome =
            run_experiment(cfg, mode, {args.out, args.seed, args.tolerance_scale});
        for (const auto &w : outcome.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        for (const auto &f : outcome.files) {
            std::cout << "wrote " << f << '\n';
        }
        if (!outcome.verdict.is_null()) {
            std::cout << "verify: " << (outcome.checks_passed ? "pass" : "FAIL") << '\n';
        }
        return outcome.checks_passed ? exit_ok : exit_failed_checks;
    } catch (const wstark::ConstraintViolation &e) {
        std::cerr << args.config << ": " << e.what() << " (deviation "
                  << wstark::format_double(e.deviation()) << ")\n";
        return exit_constraint;
    } catch (const wstark::InternalError &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_failed_checks;
    } catch (const std::exception &e) {
        std::cerr << args.config << ": " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Closed-form propagators for driven tight-binding lattices"};
    app.require_subcommand(1);

    int n = 0;
    int m = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    int grid = 256;

    auto *bessel = app.add_subcommand("bessel", "Bessel J_n(x)");
    bessel->add_option("n", n)->required();
    bessel->add_option("x", x)->required();

    auto *bessel2 = app.add_subcommand("bessel2", "two-index Bessel J_{n,m}(x, y, z)");
    bessel2->add_option("n", n)->required();
    bessel2->add_option("m", m)->required();
    bessel2->add_option("x", x)->required();
    bessel2->add_option("y", y)->required();
    bessel2->add_option("z", z)->required();
    bessel2->add_option("--grid", grid, "FFT grid for the cross-check")->capture_default_str();

    ConfigArgs args;
    struct Sub {
        CLI::App *app;
        wstark::cli::Mode mode;
    };
    const Sub subs[] = {
        {app.add_subcommand("run", "run the outputs declared in a config"),
         wstark::cli::Mode::Run},
        {app.add_subcommand("propagate", "write closed-form kernels and derived data"),
         wstark::cli::Mode::Propagate},
        {app.add_subcommand("verify", "oracle, recurrence and unitarity checks"),
         wstark::cli::Mode::Verify},
        {app.add_subcommand("oracle", "write numerically integrated kernels"),
         wstark::cli::Mode::Oracle},
    };
    for (const auto &s : subs) {
        add_config_args(s.app, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*bessel) {
            std::printf("%.17g\n", wstark::bessel_j(n, x));
            return exit_ok;
        }
        if (*bessel2) {
            const auto v = wstark::two_index_bessel(n, m, x, y, z);
            const auto o = wstark::two_index_bessel_oracle(n, m, x, y, z, grid);
            const double diff = std::abs(v.value - o.value);
            std::printf("value %.17g\n", v.value);
            std::printf("abs_error_estimate %.3g\n", v.abs_error_estimate);
            std::printf("oracle %.17g\n", o.value);
            std::printf("difference %.3g\n", diff);
            std::printf("agreement below 1e-12: %s\n", diff < 1e-12 ? "yes" : "no");
            if (o.accuracy_warning) {
                std::printf("note: %s\n", o.note.c_str());
            }
            return diff < 1e-10 || o.accuracy_warning ? exit_ok : exit_failed_checks;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    for (const auto &s : subs) {
        if (*s.app) {
            return run_config(args, s.mode);
        }
    }
    return exit_usage;
}
