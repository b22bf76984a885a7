// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "dqlm/error.hpp"
#include "dqlm/exact.hpp"
#include "dqlm/io.hpp"
#include "dqlm/liouvillian.hpp"
#include "dqlm/numerics.hpp"

namespace dqlm {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects artifacts and diagnostics for the manifest.
class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const CsvTable& table) {
        const std::string body = table.str();
        write_file_atomic(dir_ / name, body);
        files_.push_back({{"file", name}, {"sha1", git_blob_sha1(body)}, {"rows", table.rows()}});
    }
    json& diagnostics() { return diag_; }
    json& timings() { return timings_; }
    json files() const { return files_; }

private:
    std::filesystem::path dir_;
    json files_ = json::array();
    json diag_ = json::object();
    json timings_ = json::object();
};

struct Rates {
    double gamma_u;
    double gamma_d;
    std::optional<double> gamma_u_vertical;
    std::optional<double> gamma_d_vertical;
};

Rates biased_rates(const ExperimentConfig& cfg) {
    for (const auto& f : cfg.jumps) {
        if (const auto* b = std::get_if<BiasedJumps>(&f))
            return {b->gamma_u, b->gamma_d, b->gamma_u_vertical, b->gamma_d_vertical};
        if (const auto* x = std::get_if<XLikeJumps>(&f)) return {x->gamma_u, x->gamma_d, std::nullopt, std::nullopt};
    }
    throw ModelError("this task needs a biased or x-like jump family to fix gamma_u and gamma_d");
}

double rate_ratio(double gu, double gd) {
    if (!(gu > 0.0) || !(gd > 0.0)) throw ModelError("exact steady states need gamma_u, gamma_d > 0");
    return gu / gd;
}

CsvTable spectrum_table(const Spectrum& sp) {
    CsvTable t({"re_lambda[J]", "im_lambda[J]"});
    for (const auto& z : sp.values) t.add_row({z.real(), z.imag()});
    return t;
}

CsvTable profile_table(const LatticeLayout& layout, const std::vector<double>& z) {
    CsvTable t({"layer", "n", "sz[hbar]"});
    for (std::size_t slot = 0; slot < layout.total_spins(); ++slot) {
        const auto [layer, n] = slot_label(layout, slot);
        t.add_row(layer, {static_cast<double>(n), z[slot]});
    }
    return t;
}

/// <z_slot> of a full-space density matrix (diagonal entries only).
std::vector<double> z_profile(const LatticeLayout& layout, const SparseOperator& rho) {
    std::vector<double> z(layout.total_spins(), 0.0);
    const auto diag = rho.diagonal_values();
    for (State s = 0; s < diag.size(); ++s) {
        const double p = diag[s].real();
        if (p == 0.0) continue;
        for (std::size_t slot = 0; slot < z.size(); ++slot) z[slot] += 0.5 * twice_z(s, slot) * p;
    }
    return z;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

ModelSpec base_model(const ExperimentConfig& cfg, const LatticeLayout& layout, std::vector<JumpFamily> jumps) {
    ModelSpec spec = cfg.model("obc");
    spec.layout = layout;
    spec.jumps = std::move(jumps);
    spec.disorder.reset();
    return spec;
}

void run_spectrum(const ExperimentConfig& cfg, Artifacts& art) {
    for (const auto& b : cfg.boundaries) {
        const auto t0 = Clock::now();
        const ModelSpec spec = cfg.model(b);
        DoubleSector sector = enumerate_double_sector(spec.layout, selected_constraints(cfg, spec.layout));
        if (sector.empty()) throw EmptySectorError("selected sector is empty on " + spec.layout.describe());
        const Superoperator l = Superoperator::assemble(lindblad_terms(spec), std::move(sector));
        const Spectrum sp = eig_dense(l, false, cfg.tolerances.dense_cap);
        art.write("spectrum_" + b + ".csv", spectrum_table(sp));
        std::vector<cplx> conj;
        double max_re = -INFINITY;
        for (const auto& z : sp.values) {
            conj.push_back(std::conj(z));
            max_re = std::max(max_re, z.real());
        }
        art.diagnostics()[b] = {{"layout", spec.layout.describe()},
                                {"sector", l.sector().constraints().describe()},
                                {"dim", l.dim()},
                                {"leakage", l.leakage()},
                                {"max_real_part", max_re},
                                {"kernel_count", count_near(sp.values, 0.0, cfg.tolerances.kernel)},
                                {"conjugation_defect", hausdorff_distance(sp.values, conj)}};
        art.timings()["spectrum_" + b] = seconds_since(t0);
    }
}

void run_steady_state(const ExperimentConfig& cfg, Artifacts& art) {
    for (const auto& b : cfg.boundaries) {
        const auto t0 = Clock::now();
        const ModelSpec spec = cfg.model(b);
        DoubleSector sector = enumerate_double_sector(spec.layout, selected_constraints(cfg, spec.layout));
        if (sector.empty()) throw EmptySectorError("selected sector is empty on " + spec.layout.describe());
        const Superoperator l = Superoperator::assemble(lindblad_terms(spec), std::move(sector));
        const Kernel ker = kernel(l, cfg.tolerances.kernel, cfg.tolerances.dense_cap);
        json d{{"layout", spec.layout.describe()}, {"dim", l.dim()}, {"kernel_dimension", ker.dim()}};
        if (ker.dim() == 0) throw SolverError("empty numerical kernel on " + spec.layout.describe());
        if (ker.dim() == 1) {
            const SparseOperator rho = steady_state_from_vector(ker.basis[0], l.sector());
            const auto z = z_profile(spec.layout, rho);
            art.write("steady_state_" + b + ".csv", profile_table(spec.layout, z));
            d["residual"] = relative_residual(lindblad_terms(spec), rho);
            // Cross-check against the closed form where one exists.
            const auto strong = cfg.strong_integers();
            if (!spec.layout.periodic() && !spec.disorder && spec.jumps.size() == 1 &&
                std::holds_alternative<BiasedJumps>(spec.jumps[0]) && strong && !strong->empty()) {
                const Rates r = biased_rates(cfg);
                const double beta = rate_ratio(r.gamma_u, r.gamma_d);
                double beta_v = beta;
                if (r.gamma_u_vertical && r.gamma_d_vertical)
                    beta_v = rate_ratio(*r.gamma_u_vertical, *r.gamma_d_vertical);
                DiagonalEnsemble ens = exact_steady_state(spec.layout, 1.0, beta, beta_v);
                ens.strong = *strong;
                d["max_deviation_from_exact"] = max_abs_diff(ens.to_operator(), rho);
            }
        }
        art.diagnostics()[b] = d;
        art.timings()["steady_state_" + b] = seconds_since(t0);
    }
}

State initial_state(const ExperimentConfig& cfg, const LatticeLayout& layout) {
    const auto matter = layout.matter_slots();
    if (cfg.initial.sites.size() != matter.size())
        throw SchemaError("initial.sites: expected " + std::to_string(matter.size()) + " characters");
    State s = 0;
    for (std::size_t i = 0; i < matter.size(); ++i)
        if (cfg.initial.sites[i] == '1') s |= State{1} << matter[i];
    if (cfg.initial.links == "up")
        for (auto slot : layout.dissipative_slots()) s |= State{1} << slot;
    return s;
}

void run_dynamics(const ExperimentConfig& cfg, Artifacts& art) {
    for (const auto& b : cfg.boundaries) {
        const auto t0 = Clock::now();
        const ModelSpec spec = cfg.model(b);
        const State s0 = initial_state(cfg, spec.layout);
        const auto strong = strong_charges(spec.layout, s0);
        DoubleSector sector = enumerate_double_sector(spec.layout, DoubleConstraints::weak_gauge(spec.layout, strong));
        const Superoperator l = Superoperator::assemble(lindblad_terms(spec), std::move(sector));
        std::vector<cplx> v0(l.dim(), 0.0);
        v0.at(*l.sector().index_of(s0, s0)) = 1.0;

        std::vector<Observable> obs;
        const auto matter = spec.layout.matter_slots();
        for (std::size_t i = 0; i < matter.size(); ++i) {
            const std::size_t slot = matter[i];
            obs.push_back(diagonal_observable("N_" + std::to_string(i + 1), l.sector(),
                                              [slot](State s) { return bit(s, slot) ? 1.0 : 0.0; }));
        }
        std::vector<double> grid(static_cast<std::size_t>(cfg.time.points));
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = cfg.time.t_max * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
        EvolveOptions opts;
        opts.abs_tol = cfg.tolerances.abs;
        opts.rel_tol = cfg.tolerances.rel;
        const StateSeries series = evolve(l, v0, grid, obs, opts);

        std::vector<std::string> header{"t[1/J]"};
        for (const auto& o : obs) header.push_back(o.name);
        header.push_back("trace_defect");
        CsvTable table(header);
        for (std::size_t i = 0; i < series.t.size(); ++i) {
            std::vector<double> row{series.t[i]};
            for (const auto& column : series.values) row.push_back(column[i]);
            row.push_back(series.trace_defect[i]);
            table.add_row(row);
        }
        art.write("dynamics_" + b + ".csv", table);
        std::vector<double> final_profile;
        for (const auto& column : series.values) final_profile.push_back(column.back());
        art.diagnostics()[b] = {{"layout", spec.layout.describe()},
                                {"dim", l.dim()},
                                {"steps", series.steps},
                                {"rejected", series.rejected},
                                {"max_trace_defect", max_abs(series.trace_defect)},
                                {"max_hermiticity_defect", max_abs(series.hermiticity_defect)},
                                {"final_profile", final_profile}};
        art.timings()["dynamics_" + b] = seconds_since(t0);
    }
}

void run_winding(const ExperimentConfig& cfg, Artifacts& art) {
    if (cfg.layout != "chain") throw SchemaError("winding needs the chain layout");
    const auto t0 = Clock::now();
    const ModelSpec spec = cfg.model("pbc");
    std::vector<double> phis;
    for (int k = 0; k <= cfg.phi_scan.steps; ++k) phis.push_back(cfg.phi_scan.max * k / cfg.phi_scan.steps);
    const auto spectra = winding_scan(spec, selected_constraints(cfg, spec.layout), phis, cfg.phi_scan.variant,
                                      cfg.tolerances.dense_cap);
    CsvTable summary({"k", "phi[rad]", "hausdorff_to_phi0[J]", "multiset_distance_to_phi0[J]"});
    for (std::size_t k = 0; k < spectra.size(); ++k) {
        art.write("winding_phi" + std::to_string(k) + ".csv", spectrum_table(spectra[k]));
        summary.add_row({static_cast<double>(k), phis[k], hausdorff_distance(spectra[k].values, spectra[0].values),
                         multiset_distance(spectra[k].values, spectra[0].values)});
    }
    art.write("winding_summary.csv", summary);
    art.diagnostics()["variant"] = cfg.phi_scan.variant == TwistVariant::Lindblad ? "lindblad" : "double-space";
    art.diagnostics()["dim"] = spectra.empty() ? 0 : spectra[0].values.size();
    art.timings()["winding"] = seconds_since(t0);
}

void run_profile(const ExperimentConfig& cfg, Artifacts& art) {
    const auto t0 = Clock::now();
    const LatticeLayout layout = cfg.model("obc").layout;
    double beta = 0.0;
    double beta_prime = cfg.profile.beta_prime;
    if (cfg.profile.beta) {
        beta = *cfg.profile.beta;
    } else {
        const Rates r = biased_rates(cfg);
        beta = rate_ratio(r.gamma_u, r.gamma_d);
        if (r.gamma_u_vertical && r.gamma_d_vertical) beta_prime = rate_ratio(*r.gamma_u_vertical, *r.gamma_d_vertical);
    }
    const DiagonalEnsemble base = exact_steady_state(layout, cfg.profile.alpha, beta, beta_prime, cfg.profile.alpha_prime);

    std::vector<std::vector<int>> sectors;
    if (!cfg.profile.fillings.empty()) {
        if (cfg.layout == "hierarchical") throw SchemaError("profile.fillings applies to chains and 2D lattices");
        const double sites = static_cast<double>(layout.matter_slots().size());
        for (double nu : cfg.profile.fillings) sectors.push_back({static_cast<int>(std::lround(nu * sites))});
    } else {
        const auto strong = cfg.strong_integers();
        sectors.push_back(strong ? *strong : std::vector<int>{});
    }

    json per_sector = json::array();
    for (const auto& q : sectors) {
        DiagonalEnsemble ens = base;
        if (!q.empty()) ens.strong = q;
        const Marginals m = ensemble_marginals(ens);
        std::string name = "profile";
        for (int v : q) name += "_" + std::to_string(v);
        art.write(name + ".csv", profile_table(layout, m.z));

        json d{{"strong", q}, {"log_partition", m.log_partition}};
        const double centre = (layout.length() + 1) / 2.0;
        if (cfg.layout == "hierarchical") {
            double quad = 0.0;
            int sign_changes = 0;
            double prev = 0.0;
            for (std::size_t slot = 0; slot < layout.total_spins(); ++slot) {
                const SlotInfo& info = layout.slot_info(slot);
                const double pos = info.i + 1.0;
                if (info.species == Species::Top) quad += (pos - centre) * (pos - centre) * m.z[slot];
                if (info.species == Species::Middle) {
                    if (prev != 0.0 && m.z[slot] * prev < 0.0) ++sign_changes;
                    if (m.z[slot] != 0.0) prev = m.z[slot];
                }
            }
            d["top_quadrupole"] = quad;
            d["middle_sign_changes"] = sign_changes;
        } else {
            double dipole = 0.0;
            for (std::size_t slot : layout.matter_slots()) {
                const double pos = layout.slot_info(slot).i + 1.0;
                dipole += (pos - centre) * (m.z[slot] + 0.5);
            }
            d["site_dipole"] = dipole;
            d["link_polarisation_expected"] = (beta - 1.0) / (2.0 * beta + 2.0);
        }
        per_sector.push_back(d);
    }
    art.diagnostics()["beta"] = beta;
    art.diagnostics()["sectors"] = per_sector;
    art.timings()["profile"] = seconds_since(t0);
}

CheckResult below(std::string name, double value, double tol) {
    return {std::move(name), value, tol, value < tol};
}

}  // namespace

std::pair<std::string, int> slot_label(const LatticeLayout& layout, std::size_t slot) {
    const SlotInfo& info = layout.slot_info(slot);
    std::string layer = to_string(info.species);
    if (layout.kind() == LatticeKind::Square2D) layer += "(y=" + std::to_string(info.j + 1) + ")";
    return {layer, info.i + 1};
}

DoubleConstraints selected_constraints(const ExperimentConfig& cfg, const LatticeLayout& layout) {
    DoubleConstraints c;
    const auto strong = cfg.strong_integers();
    if (strong && !strong->empty()) {
        c.strong_ket = *strong;
        c.strong_bra = *strong;
    }
    if (cfg.sector.gauge == "weak") c.gauge_shift_twice = std::vector<int>(layout.num_gauge_sites(), 0);
    return c;
}

std::vector<CheckResult> verify_exact(const ExperimentConfig& cfg) {
    const double tol = cfg.tolerances.residual;
    const Rates r = biased_rates(cfg);
    const double beta = rate_ratio(r.gamma_u, r.gamma_d);
    double beta_v = beta;
    std::optional<double> gu_v = r.gamma_u_vertical, gd_v = r.gamma_d_vertical;
    if (gu_v && gd_v) beta_v = rate_ratio(*gu_v, *gd_v);
    const LatticeLayout layout = cfg.model("obc").layout;
    const BiasedJumps biased{r.gamma_u, r.gamma_d, gu_v, gd_v};

    std::vector<CheckResult> out;
    const ModelSpec clean = base_model(cfg, layout, {biased});
    const SparseOperator rho = exact_steady_state(layout, 1.0, beta, beta_v).to_operator();
    out.push_back(below("steady_state_residual", relative_residual(lindblad_terms(clean), rho), tol));

    if (layout.kind() == LatticeKind::ChainOBC) {
        ModelSpec dis = clean;
        dis.disorder = cfg.disorder ? *cfg.disorder : Disorder{1, 0.5, 0.5, true, true};
        out.push_back(below("steady_state_residual_disorder", relative_residual(lindblad_terms(dis), rho), tol));
    }
    const ModelSpec fixed = base_model(cfg, layout, {biased, GaugeFixingJumps{1.0}});
    out.push_back(below("steady_state_residual_gauge_fixing", relative_residual(lindblad_terms(fixed), rho), tol));

    if (layout.kind() == LatticeKind::ChainOBC) {
        const SparseOperator h = build_hamiltonian(clean);
        const SparseOperator t = similarity_transform(layout, 1.0, beta);
        const SparseOperator t_inv = exact_steady_state(layout, 1.0, beta).to_operator_unnormalised();
        out.push_back(below("similarity_defect", max_abs_diff(t * h * t_inv, h), 1e-12));

        if (layout.length() <= 10) {
            const LindbladTerms biased_terms = lindblad_terms(clean);
            const LindbladTerms xlike_terms = lindblad_terms(base_model(cfg, layout, {XLikeJumps{r.gamma_u, r.gamma_d}}));
            double worst_b = 0.0, worst_x = 0.0;
            const int nk = layout.length() - 1;
            for (int mask = 0; mask < (1 << nk); ++mask) {
                std::vector<int> k(static_cast<std::size_t>(nk));
                for (int i = 0; i < nk; ++i) k[static_cast<std::size_t>(i)] = (mask >> i) & 1;
                const ExactEigenoperator e = exact_eigenoperator(layout, k, 1.0, r.gamma_u, r.gamma_d);
                const SparseOperator op = e.ensemble.to_operator_unnormalised();
                worst_b = std::max(worst_b, relative_residual(biased_terms, op, e.lambda));
                worst_x = std::max(worst_x, relative_residual(xlike_terms, op, e.lambda));
            }
            out.push_back(below("eigenoperator_residual_max", worst_b, tol));
            out.push_back(below("eigenoperator_residual_max_xlike", worst_x, tol));
        }
    }

    if (layout.total_spins() <= 16) {
        DiagonalEnsemble ens = exact_steady_state(layout, 1.0, beta, beta_v);
        const auto strong = cfg.strong_integers();
        if (strong && !strong->empty()) ens.strong = *strong;
        try {
            const Marginals dp = ensemble_marginals(ens);
            const Marginals en = ensemble_marginals_enumerated(ens);
            double diff = 0.0;
            for (std::size_t i = 0; i < dp.z.size(); ++i) diff = std::max(diff, std::abs(dp.z[i] - en.z[i]));
            out.push_back(below("marginals_dp_vs_enumeration", diff, 1e-12));
            if (layout.is_chain()) {
                double dev = 0.0;
                for (auto slot : layout.dissipative_slots())
                    dev = std::max(dev, std::abs(dp.z[slot] - (beta - 1.0) / (2.0 * beta + 2.0)));
                out.push_back(below("link_polarisation_deviation", dev, 1e-12));
            }
        } catch (const EmptySectorError&) {
            out.push_back({"marginals_dp_vs_enumeration(empty sector)", 0.0, 0.0, true});
        }
    }
    return out;
}

RunOutcome run_task(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const auto t0 = Clock::now();
    std::filesystem::create_directories(out_dir);
    Artifacts art(out_dir);
    RunOutcome outcome;
    switch (cfg.task) {
        case Task::Spectrum: run_spectrum(cfg, art); break;
        case Task::SteadyState: run_steady_state(cfg, art); break;
        case Task::Dynamics: run_dynamics(cfg, art); break;
        case Task::Winding: run_winding(cfg, art); break;
        case Task::Profile: run_profile(cfg, art); break;
        case Task::VerifyExact: {
            const auto checks = verify_exact(cfg);
            CsvTable table({"check", "value", "tolerance", "pass"});
            bool all = true;
            for (const auto& c : checks) {
                table.add_row(c.name, {c.value, c.tolerance, c.pass ? 1.0 : 0.0});
                all = all && c.pass;
            }
            art.write("verify.csv", table);
            art.diagnostics()["all_pass"] = all;
            art.diagnostics()["checks"] = checks.size();
            if (!all) outcome.exit_code = kExitFailed;
            break;
        }
    }
    art.timings()["total"] = seconds_since(t0);
    outcome.manifest = {{"tool", "dqlm"},
                        {"version", kVersion},
                        {"task", to_string(cfg.task)},
                        {"config", cfg.to_json()},
                        {"outputs", art.files()},
                        {"timings_seconds", art.timings()},
                        {"diagnostics", art.diagnostics()},
                        {"exit_code", outcome.exit_code}};
    write_file_atomic(out_dir / "manifest.json", outcome.manifest.dump(2) + "\n");
    return outcome;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const std::optional<std::string>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("DQLM_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const ModelError*>(&e)) return kExitSchema;
    if (dynamic_cast<const EmptySectorError*>(&e) || dynamic_cast<const SizeError*>(&e)) return kExitInfeasible;
    if (dynamic_cast<const SolverError*>(&e) || dynamic_cast<const LeakageError*>(&e)) return kExitSolver;
    return kExitFailed;
}

namespace {

std::string error_kind(int code) {
    switch (code) {
        case kExitSchema: return "schema";
        case kExitInfeasible: return "infeasible-sector";
        case kExitSolver: return "solver";
        default: return "error";
    }
}

}  // namespace

int run_document(const json& doc, const std::optional<std::string>& out_flag, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = parse_config(doc);
        const auto dir = resolve_output_dir(cfg, out_flag);
        const RunOutcome res = run_task(cfg, dir);
        for (const auto& f : res.manifest["outputs"]) out << dir.string() << "/" << f["file"].get<std::string>() << "\n";
        if (cfg.task == Task::VerifyExact)
            out << (res.exit_code == kExitOk ? "verify-exact: all checks passed" : "verify-exact: FAILED") << "\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        err << json{{"error", error_kind(code)}, {"message", e.what()}, {"exit_code", code}}.dump() << "\n";
        return code;
    }
}

}  // namespace dqlm
