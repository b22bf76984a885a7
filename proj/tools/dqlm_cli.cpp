// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

// dqlm: config-driven runner for the dissipative quantum link model engine.
//
//   dqlm run --config exp.json
//   dqlm spectrum --L 5 --N 2 --out out/
//   dqlm profile --layout hierarchical --L 14 --beta 3 --sector 0,0

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqlm/error.hpp"
#include "dqlm/runner.hpp"

namespace {

using nlohmann::json;

struct Overrides {
    std::string config;
    std::optional<std::string> layout;
    std::optional<int> L;
    std::optional<int> Ly;
    std::optional<double> beta;
    std::optional<std::string> fillings;
    std::optional<std::string> sector;
    std::optional<int> phi_steps;
    std::optional<std::string> variant;
    std::optional<double> gamma_u;
    std::optional<double> gamma_d;
    std::optional<double> J;
    std::optional<int> N;
    std::optional<int> seed;
    std::optional<std::string> out;
    std::optional<double> t_max;
    std::optional<std::string> boundaries;
    std::optional<std::string> initial;
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

json numbers(const std::string& s) {
    json arr = json::array();
    for (const auto& x : split(s)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(x, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != x.size()) throw dqlm::SchemaError("not a number: '" + x + "'");
        arr.push_back(v);
    }
    return arr;
}

json& biased_family(json& doc) {
    json& jumps = doc["model"]["jumps"];
    if (!jumps.is_array()) jumps = json::array();
    for (auto& j : jumps)
        if (j.value("type", "") == "biased") return j;
    jumps.push_back({{"type", "biased"}, {"gamma_u", 2.4}, {"gamma_d", 1.6}});
    return jumps.back();
}

/// Applies command-line overrides on top of the config document.
json merge(json doc, const Overrides& o, const std::string& task) {
    if (!doc.is_object()) throw dqlm::SchemaError("config: expected an object");
    if (!task.empty()) doc["task"] = task;
    auto& model = doc["model"];
    if (model.is_null()) model = json::object();
    if (o.layout) {
        std::string layout = *o.layout;
        if (layout == "2d") layout = "square-2d";
        model["layout"] = layout;
    }
    if (o.L) model["L"] = *o.L;
    if (o.Ly) model["Ly"] = *o.Ly;
    if (o.J) model["J"] = *o.J;
    if (o.boundaries) model["boundaries"] = split(*o.boundaries);
    if (o.gamma_u) biased_family(doc)["gamma_u"] = *o.gamma_u;
    if (o.gamma_d) biased_family(doc)["gamma_d"] = *o.gamma_d;
    if (o.seed) model["disorder"]["seed"] = *o.seed;
    if (o.beta) doc["profile"]["beta"] = *o.beta;
    if (o.fillings) doc["profile"]["fillings"] = numbers(*o.fillings);
    if (o.sector) doc["sector"]["strong"] = numbers(*o.sector);
    if (o.N) doc["sector"]["strong"] = json::array({*o.N});
    if (o.phi_steps) doc["phi"]["steps"] = *o.phi_steps;
    if (o.variant) doc["phi"]["variant"] = *o.variant;
    if (o.t_max) doc["time"]["t_max"] = *o.t_max;
    if (o.initial) doc["initial"]["sites"] = *o.initial;
    return doc;
}

void add_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "JSON experiment config");
    app->add_option("--layout", o.layout, "chain | chain-obc | chain-pbc | hierarchical | square-2d");
    app->add_option("--L", o.L, "sites along x");
    app->add_option("--Ly", o.Ly, "sites along y (square-2d)");
    app->add_option("--beta", o.beta, "gamma_u / gamma_d for analytic profiles");
    app->add_option("--fillings", o.fillings, "comma-separated filling fractions");
    app->add_option("--sector", o.sector, "comma-separated strong charges, e.g. 0,0 for (N_H', D_H')");
    app->add_option("--phi-steps", o.phi_steps, "number of twist-phase steps");
    app->add_option("--variant", o.variant, "lindblad | double-space");
    app->add_option("--gamma-u", o.gamma_u, "link raising rate");
    app->add_option("--gamma-d", o.gamma_d, "link lowering rate");
    app->add_option("--J", o.J, "hopping amplitude");
    app->add_option("--N", o.N, "particle number sector");
    app->add_option("--seed", o.seed, "disorder seed (enables disorder)");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--t-max", o.t_max, "final time for dynamics");
    app->add_option("--boundaries", o.boundaries, "comma-separated obc,pbc");
    app->add_option("--initial", o.initial, "initial site occupations, e.g. 1100000");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact diagonalization and analytic checks for dissipative U(1) quantum link models"};
    app.require_subcommand(1);
    Overrides o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"run", "run the task named in the config"},
        {"spectrum", "Liouvillian spectrum in a symmetry sector"},
        {"steady-state", "numerical kernel and steady-state profile"},
        {"dynamics", "quench dynamics of site densities"},
        {"winding", "spectra under a twisted boundary phase"},
        {"verify-exact", "residual checks of the closed-form results"},
        {"profile", "exact steady-state marginals by dynamic programming"},
    };
    for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "schema"}, {"message", e.what()}, {"exit_code", dqlm::kExitSchema}}.dump() << "\n";
        return dqlm::kExitSchema;
    }

    const std::string task = app.get_subcommands().front()->get_name();
    try {
        json doc = o.config.empty() ? json::object() : dqlm::read_config_document(o.config);
        doc = merge(std::move(doc), o, task == "run" ? std::string{} : task);
        return dqlm::run_document(doc, o.out, std::cout, std::cerr);
    } catch (const std::exception& e) {
        const int code = dqlm::exit_code_for(e);
        std::cerr << json{{"error", "schema"}, {"message", e.what()}, {"exit_code", code}}.dump() << "\n";
        return code;
    }
}
