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
 * Pipeline behind the CLI subcommands. Every artifact is written to a
 * temporary name and renamed into place.
 */

#pragma once

#include "config.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wstark::cli {

enum class Mode {
    Run,       ///< outputs declared in the config
    Propagate, ///< kernel tables, probability map, wavepackets
    Verify,    ///< invariant suite only
    Oracle,    ///< numerically integrated kernels only
};

struct RunOptions {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    double tolerance_scale = 1.0;
};

struct RunOutcome {
    bool checks_passed = true;
    std::vector<std::string> warnings;
    std::vector<std::string> files;
    nlohmann::json verdict; ///< null unless verification ran
};

/// Throws ConstraintViolation for an inadmissible triangular drive and
/// wstark errors for invalid requests; failed checks are reported in the
/// outcome, not thrown.
RunOutcome run_experiment(const ExperimentConfig &config, Mode mode,
                          const RunOptions &options);

/// Normalized initial state on the config window.
Eigen::VectorXcd initial_state(const Window &window, const WavepacketSpec &spec);

} // namespace wstark::cli
