// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dqlm/error.hpp"

namespace dqlm {

using nlohmann::json;

namespace {

/// Object reader that remembers which keys were consumed and rejects the rest.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
    }
    ~Obj() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& at(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }
    std::string where(const std::string& key) const { return path_ + "." + key; }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) throw SchemaError(where(key) + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(where(key) + ": not finite");
        return x;
    }
    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw SchemaError(where(key) + ": expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw SchemaError(where(key) + ": expected a boolean");
        return v.get<bool>();
    }
    std::string string(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw SchemaError(where(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::vector<double> numbers(const std::string& key) {
        const json& v = at(key);
        if (!v.is_array()) throw SchemaError(where(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw SchemaError(where(key) + ": expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.contains(item.key())) throw SchemaError(path_ + ": unknown key '" + item.key() + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Task parse_task(const std::string& s) {
    if (s == "spectrum") return Task::Spectrum;
    if (s == "steady-state") return Task::SteadyState;
    if (s == "dynamics") return Task::Dynamics;
    if (s == "winding") return Task::Winding;
    if (s == "verify-exact") return Task::VerifyExact;
    if (s == "profile") return Task::Profile;
    throw SchemaError("task: unknown task '" + s + "'");
}

JumpFamily parse_jump(const json& j, const std::string& path, double J) {
    Obj o(j, path);
    const std::string type = o.string("type", "");
    JumpFamily family;
    if (type == "biased") {
        BiasedJumps b{o.number("gamma_u", 0.0), o.number("gamma_d", 0.0), std::nullopt, std::nullopt};
        if (o.has("gamma_u_vertical")) b.gamma_u_vertical = o.number("gamma_u_vertical", 0.0);
        if (o.has("gamma_d_vertical")) b.gamma_d_vertical = o.number("gamma_d_vertical", 0.0);
        family = b;
    } else if (type == "x-like") {
        family = XLikeJumps{o.number("gamma_u", 0.0), o.number("gamma_d", 0.0)};
    } else if (type == "dephasing") {
        family = DephasingJumps{o.number("gamma", 0.0)};
    } else if (type == "gauge-fixing") {
        family = GaugeFixingJumps{o.number("Gamma", 0.0)};
    } else if (type == "effective-asep") {
        if (o.has("gamma_u") || o.has("gamma_d")) {
            family = EffectiveAsepJumps::from_strong_dissipation(o.number("gamma_u", 0.0), o.number("gamma_d", 0.0), J);
        } else {
            family = EffectiveAsepJumps{o.number("gamma_r", 0.0), o.number("gamma_l", 0.0)};
        }
    } else {
        throw SchemaError(path + ".type: unknown jump family '" + type + "'");
    }
    o.finish();
    return family;
}

json jump_to_json(const JumpFamily& f) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, BiasedJumps>) {
                json j{{"type", "biased"}, {"gamma_u", v.gamma_u}, {"gamma_d", v.gamma_d}};
                if (v.gamma_u_vertical) j["gamma_u_vertical"] = *v.gamma_u_vertical;
                if (v.gamma_d_vertical) j["gamma_d_vertical"] = *v.gamma_d_vertical;
                return j;
            } else if constexpr (std::is_same_v<T, XLikeJumps>) {
                return {{"type", "x-like"}, {"gamma_u", v.gamma_u}, {"gamma_d", v.gamma_d}};
            } else if constexpr (std::is_same_v<T, DephasingJumps>) {
                return {{"type", "dephasing"}, {"gamma", v.gamma}};
            } else if constexpr (std::is_same_v<T, GaugeFixingJumps>) {
                return {{"type", "gauge-fixing"}, {"Gamma", v.Gamma}};
            } else {
                return {{"type", "effective-asep"}, {"gamma_r", v.gamma_r}, {"gamma_l", v.gamma_l}};
            }
        },
        f);
}

const char* variant_name(TwistVariant v) { return v == TwistVariant::Lindblad ? "lindblad" : "double-space"; }

}  // namespace

std::string to_string(Task t) {
    switch (t) {
        case Task::Spectrum: return "spectrum";
        case Task::SteadyState: return "steady-state";
        case Task::Dynamics: return "dynamics";
        case Task::Winding: return "winding";
        case Task::VerifyExact: return "verify-exact";
        case Task::Profile: return "profile";
    }
    return "?";
}

ModelSpec ExperimentConfig::model(const std::string& boundary) const {
    ModelSpec spec;
    if (layout == "chain") {
        spec.layout = build_layout(boundary == "pbc" ? LatticeKind::ChainPBC : LatticeKind::ChainOBC, L);
        spec.hamiltonian = QlmChain{J, phi};
    } else if (layout == "hierarchical") {
        spec.layout = build_layout(LatticeKind::Hierarchical, L);
        spec.hamiltonian = QlmHierarchical{J1, J2};
    } else {
        spec.layout = build_layout(LatticeKind::Square2D, L, Ly);
        spec.hamiltonian = Qlm2D{J1, J2};
    }
    if (!with_hamiltonian) spec.hamiltonian = NoHamiltonian{};
    spec.jumps = jumps;
    spec.disorder = disorder;
    return spec;
}

std::optional<std::vector<int>> ExperimentConfig::strong_integers() const {
    if (!sector.strong) return std::nullopt;
    const double unit = layout == "hierarchical" ? 2.0 : 1.0;
    std::vector<int> out;
    for (double v : *sector.strong) {
        const double scaled = v * unit;
        if (std::abs(scaled - std::round(scaled)) > 1e-9)
            throw SchemaError("sector.strong: value " + std::to_string(v) + " is not on the charge lattice");
        out.push_back(static_cast<int>(std::lround(scaled)));
    }
    return out;
}

json ExperimentConfig::to_json() const {
    json model{{"layout", layout}, {"boundaries", boundaries}, {"L", L},     {"Ly", Ly},
               {"J", J},           {"J1", J1},                 {"J2", J2},   {"phi", phi},
               {"hamiltonian", with_hamiltonian ? "qlm" : "none"}};
    model["jumps"] = json::array();
    for (const auto& f : jumps) model["jumps"].push_back(jump_to_json(f));
    if (disorder) {
        model["disorder"] = {{"seed", disorder->seed},
                             {"W", disorder->W},
                             {"W_prime", disorder->W_prime},
                             {"potentials", disorder->potentials},
                             {"long_range", disorder->long_range}};
    }
    json sec{{"gauge", sector.gauge}};
    if (sector.strong) sec["strong"] = *sector.strong;
    json prof{{"alpha", profile.alpha},
              {"beta_prime", profile.beta_prime},
              {"alpha_prime", profile.alpha_prime},
              {"fillings", profile.fillings}};
    if (profile.beta) prof["beta"] = *profile.beta;
    return json{{"task", to_string(task)},
                {"model", model},
                {"sector", sec},
                {"phi", {{"steps", phi_scan.steps}, {"max", phi_scan.max}, {"variant", variant_name(phi_scan.variant)}}},
                {"time", {{"t_max", time.t_max}, {"points", time.points}}},
                {"initial", {{"sites", initial.sites}, {"links", initial.links}}},
                {"profile", prof},
                {"tolerances",
                 {{"kernel", tolerances.kernel},
                  {"residual", tolerances.residual},
                  {"abs", tolerances.abs},
                  {"rel", tolerances.rel},
                  {"dense_cap", tolerances.dense_cap}}},
                {"output_dir", output_dir}};
}

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig c;
    Obj root(doc, "config");
    c.task = parse_task(root.string("task", "spectrum"));
    c.output_dir = root.string("output_dir", c.output_dir);

    if (root.has("model")) {
        Obj m(root.at("model"), "model");
        std::string layout = m.string("layout", "chain");
        if (layout == "chain-obc" || layout == "chain-pbc") {
            c.boundaries = {layout.substr(6)};
            layout = "chain";
        }
        if (layout != "chain" && layout != "hierarchical" && layout != "square-2d")
            throw SchemaError("model.layout: unknown layout '" + layout + "'");
        c.layout = layout;
        if (m.has("boundaries")) {
            const json& b = m.at("boundaries");
            if (!b.is_array() || b.empty()) throw SchemaError("model.boundaries: expected a non-empty array");
            c.boundaries.clear();
            for (const auto& x : b) {
                if (!x.is_string() || (x != "obc" && x != "pbc"))
                    throw SchemaError("model.boundaries: entries must be \"obc\" or \"pbc\"");
                c.boundaries.push_back(x.get<std::string>());
            }
        }
        c.L = m.integer("L", c.L);
        c.Ly = m.integer("Ly", c.Ly);
        c.J = m.number("J", c.J);
        c.J1 = m.number("J1", c.J1);
        c.J2 = m.number("J2", c.J2);
        c.phi = m.number("phi", c.phi);
        const std::string ham = m.string("hamiltonian", "qlm");
        if (ham != "qlm" && ham != "none") throw SchemaError("model.hamiltonian: expected \"qlm\" or \"none\"");
        c.with_hamiltonian = ham == "qlm";
        if (m.has("jumps")) {
            const json& arr = m.at("jumps");
            if (!arr.is_array()) throw SchemaError("model.jumps: expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i)
                c.jumps.push_back(parse_jump(arr[i], "model.jumps[" + std::to_string(i) + "]", c.J));
        }
        if (m.has("disorder")) {
            Obj d(m.at("disorder"), "model.disorder");
            Disorder dis;
            const int seed = d.integer("seed", 0);
            if (seed < 0) throw SchemaError("model.disorder.seed: must be non-negative");
            dis.seed = static_cast<std::uint64_t>(seed);
            dis.W = d.number("W", dis.W);
            dis.W_prime = d.number("W_prime", dis.W_prime);
            dis.potentials = d.boolean("potentials", dis.potentials);
            dis.long_range = d.boolean("long_range", dis.long_range);
            d.finish();
            c.disorder = dis;
        }
        m.finish();
    }
    if (c.jumps.empty()) c.jumps.push_back(BiasedJumps{2.4, 1.6, std::nullopt, std::nullopt});

    // x-like and effective ASEP jumps do not conserve the ket-bra gauge difference.
    const bool gauge_breaking = std::any_of(c.jumps.begin(), c.jumps.end(), [](const JumpFamily& f) {
        return std::holds_alternative<XLikeJumps>(f) || std::holds_alternative<EffectiveAsepJumps>(f);
    });
    if (gauge_breaking) c.sector.gauge = "none";
    if (root.has("sector")) {
        Obj s(root.at("sector"), "sector");
        if (s.has("strong")) c.sector.strong = s.numbers("strong");
        c.sector.gauge = s.string("gauge", c.sector.gauge);
        if (c.sector.gauge != "weak" && c.sector.gauge != "none")
            throw SchemaError("sector.gauge: expected \"weak\" or \"none\"");
        if (gauge_breaking && c.sector.gauge == "weak")
            throw SchemaError("sector.gauge: the configured jumps leave the weak gauge sector; use \"none\"");
        s.finish();
    }
    if (root.has("phi")) {
        Obj p(root.at("phi"), "phi");
        c.phi_scan.steps = p.integer("steps", c.phi_scan.steps);
        c.phi_scan.max = p.number("max", c.phi_scan.max);
        const std::string v = p.string("variant", "double-space");
        if (v == "lindblad") c.phi_scan.variant = TwistVariant::Lindblad;
        else if (v == "double-space") c.phi_scan.variant = TwistVariant::DoubleSpace;
        else throw SchemaError("phi.variant: expected \"lindblad\" or \"double-space\"");
        p.finish();
    }
    if (root.has("time")) {
        Obj t(root.at("time"), "time");
        c.time.t_max = t.number("t_max", c.time.t_max);
        c.time.points = t.integer("points", c.time.points);
        t.finish();
    }
    if (root.has("initial")) {
        Obj i(root.at("initial"), "initial");
        c.initial.sites = i.string("sites", "");
        c.initial.links = i.string("links", "down");
        i.finish();
    }
    if (root.has("profile")) {
        Obj p(root.at("profile"), "profile");
        if (p.has("beta")) c.profile.beta = p.number("beta", 1.0);
        c.profile.alpha = p.number("alpha", c.profile.alpha);
        c.profile.beta_prime = p.number("beta_prime", c.profile.beta_prime);
        c.profile.alpha_prime = p.number("alpha_prime", c.profile.alpha_prime);
        if (p.has("fillings")) c.profile.fillings = p.numbers("fillings");
        p.finish();
    }
    if (root.has("tolerances")) {
        Obj t(root.at("tolerances"), "tolerances");
        c.tolerances.kernel = t.number("kernel", c.tolerances.kernel);
        c.tolerances.residual = t.number("residual", c.tolerances.residual);
        c.tolerances.abs = t.number("abs", c.tolerances.abs);
        c.tolerances.rel = t.number("rel", c.tolerances.rel);
        const int cap = t.integer("dense_cap", static_cast<int>(c.tolerances.dense_cap));
        if (cap <= 0) throw SchemaError("tolerances.dense_cap: must be positive");
        c.tolerances.dense_cap = static_cast<std::size_t>(cap);
        t.finish();
    }
    root.finish();

    if (!c.sector.strong) {
        if (c.layout == "chain") c.sector.strong = std::vector<double>{2.0};
        else if (c.layout == "hierarchical") c.sector.strong = std::vector<double>{0.0, 0.0};
        else c.sector.strong = std::vector<double>{static_cast<double>(c.L * c.Ly / 2)};
    }

    // Semantic checks that need the whole document.
    if (c.phi_scan.steps < 1) throw SchemaError("phi.steps: must be at least 1");
    if (c.time.points < 2 || !(c.time.t_max > 0.0)) throw SchemaError("time: need t_max > 0 and points >= 2");
    if (c.initial.links != "down" && c.initial.links != "up")
        throw SchemaError("initial.links: expected \"down\" or \"up\"");
    for (char ch : c.initial.sites)
        if (ch != '0' && ch != '1') throw SchemaError("initial.sites: expected a string of '0' and '1'");
    if (c.profile.beta && !(*c.profile.beta > 0.0)) throw SchemaError("profile.beta: must be positive");
    for (double nu : c.profile.fillings)
        if (!(nu >= 0.0 && nu <= 1.0)) throw SchemaError("profile.fillings: entries must lie in [0, 1]");
    if (c.layout != "chain" && (c.boundaries.size() != 1 || c.boundaries[0] != "obc"))
        throw SchemaError("model.boundaries: only chains support periodic boundaries");
    try {
        for (const auto& b : c.boundaries) c.model(b).validate();
        (void)c.strong_integers();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(std::string("model: ") + e.what());
    }
    return c;
}

json read_config_document(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw SchemaError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
}

}  // namespace dqlm
