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

#include "runner.hpp"

#include "wstark/wstark.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace wstark::cli {

namespace {

namespace fs = std::filesystem;

class ArtifactWriter {
  public:
    explicit ArtifactWriter(std::string dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    void write(const std::string &name, const std::string &content) {
        const auto target = fs::path(dir_) / name;
        const auto tmp = fs::path(dir_) / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot write " + tmp.string());
            }
            out << content;
        }
        fs::rename(tmp, target);
        files_.push_back(name);
    }

    [[nodiscard]] const std::vector<std::string> &files() const { return files_; }

  private:
    std::string dir_;
    std::vector<std::string> files_;
};

std::string indexed(const std::string &stem, std::size_t k, const char *ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_t%03zu.%s", stem.c_str(), k, ext);
    return buf;
}

std::string coordinate_header(int d, const char *prefix) {
    std::string out;
    for (int k = 1; k <= d; ++k) {
        out += std::string(prefix) + (d == 1 ? "" : std::to_string(k)) + ",";
    }
    return out;
}

/// Closed form where one exists, otherwise the oracle (with a warning).
KernelTable build_kernel(const ExperimentConfig &cfg, const DriveProtocol &drive, double t,
                         double oracle_step) {
    if (has_closed_form(cfg.lattice)) {
        TriangularOptions opts;
        opts.constraint_tolerance = cfg.tolerances.constraint;
        return closed_form_kernel(cfg.lattice, drive, t, cfg.window, cfg.convention, opts);
    }
    TruncatedHamiltonian H(cfg.lattice, cfg.window, drive);
    auto table = integrate_unitary(H, t, oracle_step).converted(cfg.convention);
    table.warnings.push_back("no closed form for this lattice; kernel integrated numerically");
    return table;
}

std::size_t origin_or_centre(const Window &w) {
    std::vector<int> c;
    for (const auto &ax : w.axes()) {
        c.push_back(ax.contains(0) ? 0 : (ax.lo + ax.hi) / 2);
    }
    return w.index(c);
}

double unitarity_defect(const KernelTable &table, int margin) {
    const auto &U = table.entries;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < U.rows(); ++k) {
        if (table.window.boundary_distance(static_cast<std::size_t>(k)) < margin) {
            continue;
        }
        worst = std::max(worst, std::abs(U.row(k).squaredNorm() - 1.0));
        worst = std::max(worst, std::abs(U.col(k).squaredNorm() - 1.0));
    }
    return worst;
}

nlohmann::json check(const std::string &name, double value, double tolerance) {
    return {{"check", name},
            {"value", value},
            {"tolerance", tolerance},
            {"pass", value <= tolerance}};
}

nlohmann::json bessel_spot_checks(std::uint64_t seed, double tolerance, bool &ok) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> arg(0.0, 4.0);
    std::uniform_int_distribution<int> order(-10, 10);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        const int n = order(rng);
        const int m = order(rng);
        const double x = arg(rng);
        const double y = arg(rng);
        const double z = arg(rng);
        const auto a = two_index_bessel(n, m, x, y, z).value;
        const auto b = two_index_bessel_oracle(n, m, x, y, z, 128).value;
        worst = std::max(worst, std::abs(a - b));
    }
    auto out = check("two_index_bessel_vs_fft", worst, tolerance);
    out["points"] = 16;
    ok = ok && worst <= tolerance;
    return out;
}

nlohmann::json verify_time(const ExperimentConfig &cfg, const DriveProtocol &drive,
                           const KernelTable &kernel, double t, const VerifySpec &spec,
                           double scale, bool closed_form, bool &ok) {
    nlohmann::json entry;
    entry["time"] = t;
    auto checks = nlohmann::json::array();
    auto record = [&](nlohmann::json c) {
        ok = ok && c["pass"].get<bool>();
        checks.push_back(std::move(c));
    };
    const auto sites = static_cast<Eigen::Index>(kernel.window.sites());

    if (t == 0.0) {
        const double gap =
            (kernel.entries - Eigen::MatrixXcd::Identity(sites, sites)).cwiseAbs().maxCoeff();
        record(check("identity_at_zero", gap, 0.0));
    }
    if (closed_form) {
        TruncatedHamiltonian H(cfg.lattice, cfg.window, drive);
        const auto oracle = integrate_unitary(H, t, spec.oracle_step, spec.margin);
        record(check("oracle_gap", compare_kernels(kernel, oracle, spec.margin),
                     cfg.tolerances.oracle * scale));
    }
    try {
        const auto map = heisenberg_map(cfg.lattice, drive, t);
        const auto report =
            mm_residual_general(cfg.lattice, kernel.converted(Convention::PaperMM), map);
        // a numerically integrated kernel only satisfies them to oracle accuracy
        const double tol = closed_form ? cfg.tolerances.residual : cfg.tolerances.oracle;
        auto c = check("recurrence_residual", report.max_all, tol * scale);
        c["detail"] = residual_json(report)["equations"];
        record(std::move(c));
    } catch (const DomainError &e) {
        entry["skipped"].push_back(std::string("recurrence_residual: ") + e.what());
    }
    record(check("unitarity", unitarity_defect(kernel, spec.margin),
                 cfg.tolerances.unitarity * scale));
    entry["checks"] = checks;
    entry["warnings"] = kernel.warnings;
    return entry;
}

} // namespace

Eigen::VectorXcd initial_state(const Window &window, const WavepacketSpec &spec) {
    const auto sites = window.sites();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sites));
    if (spec.kind == "site") {
        if (!window.contains(spec.site)) {
            throw DomainError("wavepacket site lies outside the window");
        }
        psi(static_cast<Eigen::Index>(window.index(spec.site))) = 1.0;
        return psi;
    }
    for (std::size_t s = 0; s < sites; ++s) {
        const auto n = window.coords(s);
        double r2 = 0.0;
        double phase = 0.0;
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double dx = n[k] - spec.center[k];
            r2 += dx * dx;
            phase += spec.momentum[k] * n[k];
        }
        psi(static_cast<Eigen::Index>(s)) =
            std::polar(std::exp(-r2 / (4.0 * spec.width * spec.width)), phase);
    }
    const double norm = psi.norm();
    if (!(norm > 0.0)) {
        throw DomainError("gaussian wavepacket vanishes on the window");
    }
    return psi / norm;
}

RunOutcome run_experiment(const ExperimentConfig &cfg, Mode mode, const RunOptions &opts) {
    if (!(opts.tolerance_scale > 0.0) || !std::isfinite(opts.tolerance_scale)) {
        throw InputError("tolerance scale must be positive");
    }
    const auto drive = cfg.drive();
    drive.require_compatible(cfg.lattice);
    const int d = cfg.lattice.dimension();
    const bool closed_form = has_closed_form(cfg.lattice);

    const auto declared_verify = cfg.find(OutputKind::Verify);
    const VerifySpec verify_spec = declared_verify ? declared_verify->verify : VerifySpec{};

    bool want_kernel = false;
    bool want_map = false;
    bool want_verify = false;
    bool want_oracle = false;
    std::vector<WavepacketSpec> packets;
    for (const auto &o : cfg.outputs) {
        if (o.kind == OutputKind::Wavepacket) {
            packets.push_back(o.wavepacket);
        }
    }
    switch (mode) {
    case Mode::Run:
        want_kernel = cfg.find(OutputKind::KernelCsv).has_value();
        want_map = cfg.find(OutputKind::ProbabilityMap).has_value();
        want_verify = declared_verify.has_value();
        break;
    case Mode::Propagate:
        want_kernel = true;
        want_map = cfg.find(OutputKind::ProbabilityMap).has_value();
        break;
    case Mode::Verify:
        want_verify = true;
        packets.clear();
        break;
    case Mode::Oracle:
        want_oracle = true;
        packets.clear();
        break;
    }

    ArtifactWriter writer(opts.out_dir);
    RunOutcome outcome;

    std::vector<Eigen::VectorXcd> initial;
    std::vector<std::ostringstream> packet_csv(packets.size());
    for (std::size_t p = 0; p < packets.size(); ++p) {
        initial.push_back(initial_state(cfg.window, packets[p]));
        packet_csv[p] << "t," << coordinate_header(d, "n") << "re,im,prob\n";
    }
    std::ostringstream map_csv;
    const auto source = origin_or_centre(cfg.window);
    if (want_map) {
        map_csv << "t," << coordinate_header(d, "n") << "prob\n";
    }

    bool ok = true;
    nlohmann::json verdict;
    auto per_time = nlohmann::json::array();

    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const double t = cfg.times[k];
        if (want_oracle) {
            TruncatedHamiltonian H(cfg.lattice, cfg.window, drive);
            const auto table = integrate_unitary(H, t, verify_spec.oracle_step);
            std::ostringstream csv;
            write_kernel_csv(table, csv);
            writer.write(indexed("oracle", k, "csv"), csv.str());
            continue;
        }
        const auto kernel = build_kernel(cfg, drive, t, verify_spec.oracle_step);
        for (const auto &w : kernel.warnings) {
            outcome.warnings.push_back("t=" + format_double(t) + ": " + w);
        }
        if (want_kernel) {
            std::ostringstream csv;
            write_kernel_csv(kernel, csv);
            writer.write(indexed("kernel", k, "csv"), csv.str());
        }
        const bool need_forward = want_map || !packets.empty();
        const auto forward =
            need_forward ? kernel.converted(Convention::ForwardSchrodinger) : KernelTable{};
        if (want_map) {
            for (std::size_t s = 0; s < cfg.window.sites(); ++s) {
                map_csv << format_double(t) << ',';
                for (int c : cfg.window.coords(s)) {
                    map_csv << c << ',';
                }
                map_csv << format_double(std::norm(forward.entries(
                               static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(source))))
                        << '\n';
            }
        }
        for (std::size_t p = 0; p < packets.size(); ++p) {
            const Eigen::VectorXcd psi = apply_kernel(forward, initial[p]);
            for (Eigen::Index s = 0; s < psi.size(); ++s) {
                packet_csv[p] << format_double(t) << ',';
                for (int c : cfg.window.coords(static_cast<std::size_t>(s))) {
                    packet_csv[p] << c << ',';
                }
                packet_csv[p] << format_double(psi(s).real()) << ','
                              << format_double(psi(s).imag()) << ','
                              << format_double(std::norm(psi(s))) << '\n';
            }
        }
        if (want_verify) {
            per_time.push_back(verify_time(cfg, drive, kernel, t, verify_spec,
                                           opts.tolerance_scale, closed_form, ok));
        }
    }

    if (want_map) {
        writer.write("probability_map.csv", map_csv.str());
    }
    for (std::size_t p = 0; p < packets.size(); ++p) {
        writer.write("wavepacket_" + std::to_string(p) + ".csv", packet_csv[p].str());
    }
    if (want_verify) {
        verdict["schema_version"] = report_schema_version;
        verdict["kind"] = "verify";
        verdict["lattice"] = cfg.lattice_name.empty() ? "custom" : cfg.lattice_name;
        verdict["convention"] = to_string(cfg.convention);
        verdict["seed"] = opts.seed;
        verdict["tolerance_scale"] = opts.tolerance_scale;
        verdict["oracle_step"] = verify_spec.oracle_step;
        verdict["margin"] = verify_spec.margin;
        verdict["times"] = per_time;
        verdict["bessel"] = bessel_spot_checks(opts.seed, 1e-10 * opts.tolerance_scale, ok);
        verdict["pass"] = ok;
        writer.write("verify.json", verdict.dump(2) + "\n");
        outcome.verdict = verdict;
    }

    nlohmann::json manifest;
    manifest["schema_version"] = report_schema_version;
    manifest["kind"] = "run_manifest";
    manifest["convention"] = to_string(cfg.convention);
    manifest["drive_summary"] = drive.summary();
    manifest["times"] = cfg.times;
    manifest["window"] = window_json(cfg.window);
    manifest["warnings"] = outcome.warnings;
    manifest["files"] = writer.files();
    writer.write("manifest.json", manifest.dump(2) + "\n");

    outcome.files = writer.files();
    outcome.checks_passed = ok;
    return outcome;
}

} // namespace wstark::cli
