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
 * Experiment configuration: YAML schema, validation and canonical form.
 *
 * Errors carry the 1-based line of the offending node so the CLI can print
 * "path:line: message".
 */

#pragma once

#include "wstark/drive.hpp"
#include "wstark/kernel_table.hpp"
#include "wstark/lattice.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstark::cli {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &what, int line)
        : std::runtime_error(what), line_(line) {}
    /// 1-based, 0 when unknown.
    [[nodiscard]] int line() const noexcept { return line_; }

  private:
    int line_;
};

struct WavepacketSpec {
    std::string kind = "site"; // "site" or "gaussian"
    std::vector<int> site;
    std::vector<double> center;
    double width = 1.0;
    std::vector<double> momentum;

    bool operator==(const WavepacketSpec &) const = default;
};

struct VerifySpec {
    double oracle_step = 1e-3;
    int margin = 10;

    bool operator==(const VerifySpec &) const = default;
};

enum class OutputKind { KernelCsv, ProbabilityMap, Wavepacket, Verify };

std::string to_string(OutputKind kind);

struct OutputSpec {
    OutputKind kind = OutputKind::KernelCsv;
    WavepacketSpec wavepacket;
    VerifySpec verify;

    bool operator==(const OutputSpec &) const = default;
};

struct Tolerances {
    double oracle = 1e-5;
    double residual = 1e-10;
    double unitarity = 1e-8;
    double constraint = 1e-8;

    bool operator==(const Tolerances &) const = default;
};

struct ExperimentConfig {
    std::string lattice_name; // empty for an explicit lattice
    LatticeSpec lattice;
    std::vector<Signal> alphas;
    std::vector<Signal> betas;
    std::vector<double> times;
    Window window;
    Convention convention = Convention::ForwardSchrodinger;
    std::vector<OutputSpec> outputs;
    Tolerances tolerances;

    [[nodiscard]] DriveProtocol drive() const { return {alphas, betas}; }
    [[nodiscard]] std::optional<OutputSpec> find(OutputKind kind) const;
};

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Canonical YAML: builtin lattices by name, times as an explicit list,
/// complex numbers as [re, im], doubles with 17 significant digits.
std::string serialize_config(const ExperimentConfig &config);

} // namespace wstark::cli
