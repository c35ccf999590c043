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

#include "config.hpp"

#include "wstark/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wstark::cli {

namespace {

int line_of(const YAML::Node &node) {
    const auto mark = node.Mark();
    return mark.is_null() ? 0 : mark.line + 1;
}

[[noreturn]] void fail(const YAML::Node &node, const std::string &what) {
    throw ConfigError(what, line_of(node));
}

void only_keys(const YAML::Node &node, std::initializer_list<const char *> allowed,
               const std::string &where) {
    if (!node.IsMap()) {
        fail(node, where + " must be a mapping");
    }
    for (const auto &kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char *a) { return key == a; })) {
            fail(kv.first, "unknown key '" + key + "' in " + where);
        }
    }
}

YAML::Node require(const YAML::Node &parent, const char *key, const std::string &where) {
    auto node = parent[key];
    if (!node) {
        fail(parent, where + " is missing '" + key + "'");
    }
    return node;
}

template <class T> T scalar(const YAML::Node &node, const std::string &what) {
    if (!node.IsScalar()) {
        fail(node, what + " must be a scalar");
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception &) {
        fail(node, "cannot read " + what + " from '" + node.Scalar() + "'");
    }
}

double finite_double(const YAML::Node &node, const std::string &what) {
    const auto v = scalar<double>(node, what);
    if (!std::isfinite(v)) {
        fail(node, what + " must be finite");
    }
    return v;
}

/// number | [re, im] | {abs: r, arg: theta}
cplx complex_value(const YAML::Node &node, const std::string &what) {
    if (node.IsScalar()) {
        return {finite_double(node, what), 0.0};
    }
    if (node.IsSequence()) {
        if (node.size() != 2) {
            fail(node, what + " as a list must be [re, im]");
        }
        return {finite_double(node[0], what), finite_double(node[1], what)};
    }
    if (node.IsMap()) {
        only_keys(node, {"abs", "arg"}, what);
        return std::polar(finite_double(require(node, "abs", what), what + ".abs"),
                          finite_double(require(node, "arg", what), what + ".arg"));
    }
    fail(node, what + " must be a number, [re, im] or {abs, arg}");
}

Signal parse_signal(const YAML::Node &node, const std::string &what, bool real) {
    if (!node.IsMap() || node.size() != 1) {
        fail(node, what + " must be one of {constant: ...}, {harmonic: ...}, {sampled: ...}");
    }
    const auto kind = node.begin()->first.as<std::string>();
    const auto body = node.begin()->second;
    auto value = [&](const YAML::Node &v, const std::string &name) {
        const auto z = complex_value(v, name);
        if (real && z.imag() != 0.0) {
            fail(v, name + " must be real");
        }
        return z;
    };
    if (kind == "constant") {
        return Constant{value(body, what + ".constant")};
    }
    if (kind == "harmonic") {
        const auto where = what + ".harmonic";
        only_keys(body, {"amplitude", "omega", "phase"}, where);
        Harmonic h;
        h.amplitude = value(require(body, "amplitude", where), where + ".amplitude");
        h.omega = finite_double(require(body, "omega", where), where + ".omega");
        if (body["phase"]) {
            h.phase = finite_double(body["phase"], where + ".phase");
        }
        return h;
    }
    if (kind == "sampled") {
        const auto where = what + ".sampled";
        only_keys(body, {"t0", "dt", "values", "order"}, where);
        Sampled s;
        if (body["t0"]) {
            s.t0 = finite_double(body["t0"], where + ".t0");
        }
        const auto dt = require(body, "dt", where);
        s.dt = finite_double(dt, where + ".dt");
        if (!(s.dt > 0.0)) {
            fail(dt, where + ".dt must be positive");
        }
        if (s.t0 > 0.0) {
            fail(body["t0"], where + ".t0 must be <= 0 so the drive covers t = 0");
        }
        const auto values = require(body, "values", where);
        if (!values.IsSequence() || values.size() < 2) {
            fail(values, where + ".values needs at least two samples");
        }
        for (const auto &v : values) {
            s.values.push_back(value(v, where + ".values[]"));
        }
        if (body["order"]) {
            s.order = scalar<int>(body["order"], where + ".order");
            if (s.order != 1 && s.order != 3) {
                fail(body["order"], where + ".order must be 1 or 3");
            }
        }
        return s;
    }
    fail(node.begin()->first, "unknown signal kind '" + kind + "' in " + what);
}

std::vector<Signal> parse_signals(const YAML::Node &node, const std::string &what,
                                  bool real) {
    if (!node.IsSequence() || node.size() == 0) {
        fail(node, what + " must be a non-empty list");
    }
    std::vector<Signal> out;
    for (std::size_t k = 0; k < node.size(); ++k) {
        out.push_back(parse_signal(node[k], what + "[" + std::to_string(k) + "]", real));
    }
    return out;
}

void parse_lattice(const YAML::Node &node, ExperimentConfig &cfg) {
    if (node.IsScalar()) {
        cfg.lattice_name = node.as<std::string>();
        try {
            cfg.lattice = builtin_lattice(cfg.lattice_name);
        } catch (const InputError &e) {
            fail(node, e.what());
        }
        return;
    }
    only_keys(node, {"dimension", "coordination", "sigma", "names"}, "lattice");
    const int d = scalar<int>(require(node, "dimension", "lattice"), "lattice.dimension");
    const int c =
        scalar<int>(require(node, "coordination", "lattice"), "lattice.coordination");
    const auto rows = require(node, "sigma", "lattice");
    if (!rows.IsSequence() || static_cast<int>(rows.size()) != d) {
        fail(rows, "lattice.sigma must have 'dimension' rows");
    }
    std::vector<int> sigma;
    for (const auto &row : rows) {
        if (!row.IsSequence() || static_cast<int>(row.size()) != c) {
            fail(row, "each lattice.sigma row must have 'coordination' entries");
        }
        for (const auto &v : row) {
            sigma.push_back(scalar<int>(v, "lattice.sigma entry"));
        }
    }
    std::vector<std::string> names;
    if (node["names"]) {
        for (const auto &v : node["names"]) {
            names.push_back(scalar<std::string>(v, "lattice.names entry"));
        }
    }
    try {
        cfg.lattice = LatticeSpec(d, c, std::move(sigma), std::move(names));
    } catch (const std::exception &e) {
        fail(node, std::string("invalid lattice: ") + e.what());
    }
    // an explicit spec equal to a builtin keeps its explicit form
    cfg.lattice_name.clear();
}

std::vector<double> parse_times(const YAML::Node &node) {
    std::vector<double> times;
    if (node.IsSequence()) {
        for (const auto &v : node) {
            times.push_back(finite_double(v, "times entry"));
        }
    } else if (node.IsMap()) {
        only_keys(node, {"start", "stop", "count"}, "times");
        const double start = finite_double(require(node, "start", "times"), "times.start");
        const double stop = finite_double(require(node, "stop", "times"), "times.stop");
        const auto count_node = require(node, "count", "times");
        const int count = scalar<int>(count_node, "times.count");
        if (count < 1) {
            fail(count_node, "times.count must be >= 1");
        }
        if (count == 1) {
            times.push_back(start);
        }
        for (int k = 0; count > 1 && k < count; ++k) {
            // exact endpoints
            times.push_back(k == count - 1 ? stop
                                           : start + (stop - start) * k / (count - 1));
        }
    } else {
        fail(node, "times must be a list or {start, stop, count}");
    }
    if (times.empty()) {
        fail(node, "times must not be empty");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0) {
            fail(node, "times must be non-negative");
        }
        if (k > 0 && times[k] < times[k - 1]) {
            fail(node, "times must be sorted");
        }
    }
    return times;
}

Window parse_window(const YAML::Node &node, int dimension) {
    std::vector<AxisRange> axes;
    if (node.IsMap()) {
        only_keys(node, {"radius"}, "window");
        const auto r = require(node, "radius", "window");
        const int radius = scalar<int>(r, "window.radius");
        if (radius < 1) {
            fail(r, "window.radius must be >= 1");
        }
        axes.assign(static_cast<std::size_t>(dimension), AxisRange{-radius, radius});
    } else if (node.IsSequence()) {
        for (const auto &ax : node) {
            if (!ax.IsSequence() || ax.size() != 2) {
                fail(ax, "window axes are [lo, hi] pairs");
            }
            const AxisRange range{scalar<int>(ax[0], "window lo"),
                                  scalar<int>(ax[1], "window hi")};
            if (range.hi <= range.lo) {
                fail(ax, "window axis must satisfy lo < hi");
            }
            axes.push_back(range);
        }
    } else {
        fail(node, "window must be a list of [lo, hi] or {radius: r}");
    }
    if (static_cast<int>(axes.size()) != dimension) {
        fail(node, "window has " + std::to_string(axes.size()) +
                       " axes; lattice dimension is " + std::to_string(dimension));
    }
    return Window(std::move(axes));
}

std::vector<double> doubles(const YAML::Node &node, const std::string &what) {
    if (!node.IsSequence()) {
        fail(node, what + " must be a list");
    }
    std::vector<double> out;
    for (const auto &v : node) {
        out.push_back(finite_double(v, what + " entry"));
    }
    return out;
}

OutputSpec parse_output(const YAML::Node &node, int dimension) {
    OutputSpec out;
    if (node.IsScalar()) {
        const auto name = node.as<std::string>();
        if (name == "kernel_csv") {
            out.kind = OutputKind::KernelCsv;
        } else if (name == "probability_map") {
            out.kind = OutputKind::ProbabilityMap;
        } else if (name == "verify") {
            out.kind = OutputKind::Verify;
        } else {
            fail(node, "unknown output '" + name + "'");
        }
        return out;
    }
    if (!node.IsMap() || node.size() != 1) {
        fail(node, "output must be a name or a single-key mapping");
    }
    const auto name = node.begin()->first.as<std::string>();
    const auto body = node.begin()->second;
    auto check_dim = [&](const YAML::Node &at, std::size_t size, const std::string &what) {
        if (static_cast<int>(size) != dimension) {
            fail(at, what + " needs " + std::to_string(dimension) + " coordinates");
        }
    };
    if (name == "verify") {
        out.kind = OutputKind::Verify;
        if (body.IsNull()) {
            return out;
        }
        only_keys(body, {"oracle_step", "margin"}, "verify");
        if (body["oracle_step"]) {
            out.verify.oracle_step = finite_double(body["oracle_step"], "verify.oracle_step");
            if (!(out.verify.oracle_step > 0.0)) {
                fail(body["oracle_step"], "verify.oracle_step must be positive");
            }
        }
        if (body["margin"]) {
            out.verify.margin = scalar<int>(body["margin"], "verify.margin");
            if (out.verify.margin < 1) {
                fail(body["margin"], "verify.margin must be >= 1");
            }
        }
        return out;
    }
    if (name == "wavepacket") {
        out.kind = OutputKind::Wavepacket;
        only_keys(body, {"site", "gaussian"}, "wavepacket");
        if (body.size() != 1) {
            fail(body, "wavepacket needs exactly one of 'site' or 'gaussian'");
        }
        auto &wp = out.wavepacket;
        if (body["site"]) {
            wp.kind = "site";
            for (const auto &v : body["site"]) {
                wp.site.push_back(scalar<int>(v, "wavepacket.site entry"));
            }
            check_dim(body["site"], wp.site.size(), "wavepacket.site");
        } else {
            const auto g = body["gaussian"];
            only_keys(g, {"center", "width", "momentum"}, "wavepacket.gaussian");
            wp.kind = "gaussian";
            wp.center = doubles(require(g, "center", "wavepacket.gaussian"),
                                "wavepacket.gaussian.center");
            check_dim(g["center"], wp.center.size(), "wavepacket.gaussian.center");
            wp.width = finite_double(require(g, "width", "wavepacket.gaussian"),
                                     "wavepacket.gaussian.width");
            if (!(wp.width > 0.0)) {
                fail(g["width"], "wavepacket.gaussian.width must be positive");
            }
            if (g["momentum"]) {
                wp.momentum = doubles(g["momentum"], "wavepacket.gaussian.momentum");
                check_dim(g["momentum"], wp.momentum.size(), "wavepacket.gaussian.momentum");
            } else {
                wp.momentum.assign(static_cast<std::size_t>(dimension), 0.0);
            }
        }
        return out;
    }
    fail(node.begin()->first, "unknown output '" + name + "'");
}

Tolerances parse_tolerances(const YAML::Node &node) {
    only_keys(node, {"oracle", "residual", "unitarity", "constraint"}, "tolerances");
    Tolerances t;
    auto read = [&](const char *key, double &slot) {
        if (node[key]) {
            slot = finite_double(node[key], std::string("tolerances.") + key);
            if (!(slot > 0.0)) {
                fail(node[key], std::string("tolerances.") + key + " must be positive");
            }
        }
    };
    read("oracle", t.oracle);
    read("residual", t.residual);
    read("unitarity", t.unitarity);
    read("constraint", t.constraint);
    return t;
}

ExperimentConfig from_node(const YAML::Node &root) {
    only_keys(root,
              {"lattice", "drive", "times", "window", "convention", "outputs", "tolerances"},
              "config");
    ExperimentConfig cfg;
    parse_lattice(require(root, "lattice", "config"), cfg);

    const auto drive = require(root, "drive", "config");
    only_keys(drive, {"alpha", "beta"}, "drive");
    cfg.alphas = parse_signals(require(drive, "alpha", "drive"), "drive.alpha", false);
    cfg.betas = parse_signals(require(drive, "beta", "drive"), "drive.beta", true);
    try {
        cfg.drive().require_compatible(cfg.lattice);
    } catch (const std::exception &e) {
        fail(drive, e.what());
    }

    const auto times = require(root, "times", "config");
    cfg.times = parse_times(times);
    const double t_max = cfg.drive().t_max();
    if (cfg.times.back() > t_max) {
        fail(times, "times exceed the drive's sampled range (t_max = " +
                        std::to_string(t_max) + ")");
    }
    cfg.window = parse_window(require(root, "window", "config"), cfg.lattice.dimension());

    if (const auto conv = root["convention"]) {
        try {
            cfg.convention = convention_from_string(scalar<std::string>(conv, "convention"));
        } catch (const InputError &e) {
            fail(conv, e.what());
        }
    }
    if (const auto outputs = root["outputs"]) {
        if (!outputs.IsSequence()) {
            fail(outputs, "outputs must be a list");
        }
        std::set<OutputKind> seen;
        for (const auto &o : outputs) {
            auto spec = parse_output(o, cfg.lattice.dimension());
            if (spec.kind != OutputKind::Wavepacket && !seen.insert(spec.kind).second) {
                fail(o, "output '" + to_string(spec.kind) + "' listed twice");
            }
            cfg.outputs.push_back(std::move(spec));
        }
    }
    if (const auto tol = root["tolerances"]) {
        cfg.tolerances = parse_tolerances(tol);
    }
    return cfg;
}

bool signal_equal(const Signal &a, const Signal &b) {
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto *x = std::get_if<Constant>(&a)) {
        return x->value == std::get<Constant>(b).value;
    }
    if (const auto *x = std::get_if<Harmonic>(&a)) {
        const auto &y = std::get<Harmonic>(b);
        return x->amplitude == y.amplitude && x->omega == y.omega && x->phase == y.phase;
    }
    const auto &x = std::get<Sampled>(a);
    const auto &y = std::get<Sampled>(b);
    return x.t0 == y.t0 && x.dt == y.dt && x.values == y.values && x.order == y.order;
}

bool signals_equal(const std::vector<Signal> &a, const std::vector<Signal> &b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), signal_equal);
}

void emit_complex(YAML::Emitter &out, cplx z) {
    out << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

void emit_signal(YAML::Emitter &out, const Signal &s) {
    out << YAML::BeginMap;
    if (const auto *c = std::get_if<Constant>(&s)) {
        out << YAML::Key << "constant" << YAML::Value;
        emit_complex(out, c->value);
    } else if (const auto *h = std::get_if<Harmonic>(&s)) {
        out << YAML::Key << "harmonic" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "amplitude" << YAML::Value;
        emit_complex(out, h->amplitude);
        out << YAML::Key << "omega" << YAML::Value << h->omega;
        out << YAML::Key << "phase" << YAML::Value << h->phase;
        out << YAML::EndMap;
    } else {
        const auto &p = std::get<Sampled>(s);
        out << YAML::Key << "sampled" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "t0" << YAML::Value << p.t0;
        out << YAML::Key << "dt" << YAML::Value << p.dt;
        out << YAML::Key << "order" << YAML::Value << p.order;
        out << YAML::Key << "values" << YAML::Value << YAML::BeginSeq;
        for (const auto &v : p.values) {
            emit_complex(out, v);
        }
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndMap;
}

} // namespace

std::string to_string(OutputKind kind) {
    switch (kind) {
    case OutputKind::KernelCsv:
        return "kernel_csv";
    case OutputKind::ProbabilityMap:
        return "probability_map";
    case OutputKind::Wavepacket:
        return "wavepacket";
    case OutputKind::Verify:
        return "verify";
    }
    return "?";
}

std::optional<OutputSpec> ExperimentConfig::find(OutputKind kind) const {
    for (const auto &o : outputs) {
        if (o.kind == kind) {
            return o;
        }
    }
    return std::nullopt;
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
    return a.lattice_name == b.lattice_name && a.lattice == b.lattice &&
           signals_equal(a.alphas, b.alphas) && signals_equal(a.betas, b.betas) &&
           a.times == b.times && a.window == b.window && a.convention == b.convention &&
           a.outputs == b.outputs && a.tolerances == b.tolerances;
}

ExperimentConfig parse_config(const std::string &text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1);
    }
    if (!root.IsMap()) {
        throw ConfigError("config must be a mapping", line_of(root));
    }
    return from_node(root);
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig &cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "lattice" << YAML::Value;
    if (!cfg.lattice_name.empty()) {
        out << cfg.lattice_name;
    } else {
        const auto &lat = cfg.lattice;
        out << YAML::BeginMap;
        out << YAML::Key << "dimension" << YAML::Value << lat.dimension();
        out << YAML::Key << "coordination" << YAML::Value << lat.coordination();
        out << YAML::Key << "sigma" << YAML::Value << YAML::BeginSeq;
        for (int j = 0; j < lat.dimension(); ++j) {
            out << YAML::Flow << YAML::BeginSeq;
            for (int i = 0; i < lat.coordination(); ++i) {
                out << lat.sigma(j, i);
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndSeq;
        if (!lat.names().empty()) {
            out << YAML::Key << "names" << YAML::Value << YAML::Flow << lat.names();
        }
        out << YAML::EndMap;
    }

    out << YAML::Key << "drive" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "alpha" << YAML::Value << YAML::BeginSeq;
    for (const auto &s : cfg.alphas) {
        emit_signal(out, s);
    }
    out << YAML::EndSeq;
    out << YAML::Key << "beta" << YAML::Value << YAML::BeginSeq;
    for (const auto &s : cfg.betas) {
        emit_signal(out, s);
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "times" << YAML::Value << YAML::Flow << cfg.times;
    out << YAML::Key << "window" << YAML::Value << YAML::BeginSeq;
    for (const auto &ax : cfg.window.axes()) {
        out << YAML::Flow << YAML::BeginSeq << ax.lo << ax.hi << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "convention" << YAML::Value << to_string(cfg.convention);

    out << YAML::Key << "outputs" << YAML::Value << YAML::BeginSeq;
    for (const auto &o : cfg.outputs) {
        switch (o.kind) {
        case OutputKind::KernelCsv:
        case OutputKind::ProbabilityMap:
            out << to_string(o.kind);
            break;
        case OutputKind::Verify:
            out << YAML::BeginMap << YAML::Key << "verify" << YAML::Value << YAML::BeginMap
                << YAML::Key << "oracle_step" << YAML::Value << o.verify.oracle_step
                << YAML::Key << "margin" << YAML::Value << o.verify.margin << YAML::EndMap
                << YAML::EndMap;
            break;
        case OutputKind::Wavepacket: {
            const auto &wp = o.wavepacket;
            out << YAML::BeginMap << YAML::Key << "wavepacket" << YAML::Value << YAML::BeginMap;
            if (wp.kind == "site") {
                out << YAML::Key << "site" << YAML::Value << YAML::Flow << wp.site;
            } else {
                out << YAML::Key << "gaussian" << YAML::Value << YAML::BeginMap;
                out << YAML::Key << "center" << YAML::Value << YAML::Flow << wp.center;
                out << YAML::Key << "width" << YAML::Value << wp.width;
                out << YAML::Key << "momentum" << YAML::Value << YAML::Flow << wp.momentum;
                out << YAML::EndMap;
            }
            out << YAML::EndMap << YAML::EndMap;
            break;
        }
        }
    }
    out << YAML::EndSeq;

    const auto &t = cfg.tolerances;
    out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "oracle" << YAML::Value << t.oracle;
    out << YAML::Key << "residual" << YAML::Value << t.residual;
    out << YAML::Key << "unitarity" << YAML::Value << t.unitarity;
    out << YAML::Key << "constraint" << YAML::Value << t.constraint;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace wstark::cli
