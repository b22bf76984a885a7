// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/models.hpp"

#include <cmath>
#include <random>

#include "dqlm/error.hpp"
#include "dqlm/spin.hpp"
#include "dqlm/symmetry.hpp"

namespace dqlm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_rate(double r, const char* name) {
    if (!std::isfinite(r) || r < 0.0) throw ModelError(std::string("rate ") + name + " must be finite and >= 0");
}

void check_coupling(double j, const char* name) {
    if (!std::isfinite(j)) throw ModelError(std::string("coupling ") + name + " must be finite");
}

// Chain bonds (n, n+1) for n < L-1 as coherent hops tau_n^+ s^+ tau_{n+1}^- + h.c.
void add_chain_open_bonds(OperatorBuilder& b, const LatticeLayout& layout, double J) {
    for (int n = 0; n + 1 < layout.length(); ++n)
        b.add_product_hc({{layout.site(n), SpinOp::Raise},
                          {layout.link(n), SpinOp::Raise},
                          {layout.site(n + 1), SpinOp::Lower}},
                         J);
}

void add_hierarchical(OperatorBuilder& b, const LatticeLayout& layout, const QlmHierarchical& h) {
    const int L = layout.length();
    for (int n = 0; n + 1 < L; ++n)
        b.add_product_hc({{layout.top(n), SpinOp::Raise},
                          {layout.middle(n), SpinOp::Raise},
                          {layout.top(n + 1), SpinOp::Lower}},
                         h.J1);
    for (int n = 0; n + 2 < L; ++n)
        b.add_product_hc({{layout.middle(n), SpinOp::Raise},
                          {layout.bottom(n + 1), SpinOp::Raise},
                          {layout.middle(n + 1), SpinOp::Lower}},
                         h.J2);
}

void add_square(OperatorBuilder& b, const LatticeLayout& layout, const Qlm2D& h) {
    const int Lx = layout.length();
    const int Ly = layout.width();
    for (int y = 0; y < Ly; ++y)
        for (int x = 0; x + 1 < Lx; ++x)
            b.add_product_hc({{layout.site(x, y), SpinOp::Raise},
                              {layout.link_x(x, y), SpinOp::Raise},
                              {layout.site(x + 1, y), SpinOp::Lower}},
                             h.J1);
    for (int y = 0; y + 1 < Ly; ++y)
        for (int x = 0; x < Lx; ++x)
            b.add_product_hc({{layout.site(x, y), SpinOp::Raise},
                              {layout.link_y(x, y), SpinOp::Raise},
                              {layout.site(x, y + 1), SpinOp::Lower}},
                             h.J2);
}

void add_disorder(OperatorBuilder& b, const LatticeLayout& layout, const Disorder& d) {
    std::mt19937_64 rng(d.seed);
    std::uniform_real_distribution<double> potential(-d.W, d.W);
    std::uniform_real_distribution<double> hopping(0.0, d.W_prime);
    const int L = layout.length();
    if (d.potentials) {
        for (int n = 0; n < L; ++n) b.add_product({{layout.site(n), SpinOp::Z}}, potential(rng));
        for (auto slot : layout.dissipative_slots()) b.add_product({{slot, SpinOp::Z}}, potential(rng));
    }
    if (d.long_range)
        for (int n = 0; n + 2 < L; ++n)
            b.add_product_hc({{layout.site(n), SpinOp::Raise},
                              {layout.link(n), SpinOp::Raise},
                              {layout.link(n + 1), SpinOp::Raise},
                              {layout.site(n + 2), SpinOp::Lower}},
                             hopping(rng));
}

}  // namespace

EffectiveAsepJumps EffectiveAsepJumps::from_strong_dissipation(double gamma_u, double gamma_d, double J) {
    const double total = gamma_u + gamma_d;
    if (!(total > 0.0)) throw ModelError("strong-dissipation rates need gamma_u + gamma_d > 0");
    return {gamma_u * J * J / (total * total), gamma_d * J * J / (total * total)};
}

void ModelSpec::validate() const {
    std::visit(overloaded{
                   [](const NoHamiltonian&) {},
                   [&](const QlmChain& h) {
                       if (!layout.is_chain()) throw ModelError("qlm-1d Hamiltonian needs a chain layout");
                       check_coupling(h.J, "J");
                       check_coupling(h.phi, "phi");
                   },
                   [&](const QlmHierarchical& h) {
                       if (layout.kind() != LatticeKind::Hierarchical)
                           throw ModelError("hierarchical Hamiltonian needs a hierarchical layout");
                       check_coupling(h.J1, "J1");
                       check_coupling(h.J2, "J2");
                   },
                   [&](const Qlm2D& h) {
                       if (layout.kind() != LatticeKind::Square2D)
                           throw ModelError("qlm-2d Hamiltonian needs a square-2d layout");
                       check_coupling(h.J1, "J1");
                       check_coupling(h.J2, "J2");
                   },
               },
               hamiltonian);
    for (const auto& j : jumps)
        std::visit(overloaded{
                       [](const BiasedJumps& b) {
                           check_rate(b.gamma_u, "gamma_u");
                           check_rate(b.gamma_d, "gamma_d");
                           if (b.gamma_u_vertical) check_rate(*b.gamma_u_vertical, "gamma_u'");
                           if (b.gamma_d_vertical) check_rate(*b.gamma_d_vertical, "gamma_d'");
                       },
                       [](const XLikeJumps& x) {
                           check_rate(x.gamma_u, "gamma_u");
                           check_rate(x.gamma_d, "gamma_d");
                       },
                       [](const DephasingJumps& d) { check_rate(d.gamma, "gamma"); },
                       [](const GaugeFixingJumps& g) { check_rate(g.Gamma, "Gamma"); },
                       [&](const EffectiveAsepJumps& e) {
                           check_rate(e.gamma_r, "gamma_r");
                           check_rate(e.gamma_l, "gamma_l");
                           if (!layout.is_chain()) throw ModelError("effective-asep jumps need a chain layout");
                       },
                   },
                   j);
    if (disorder) {
        if (!layout.is_chain()) throw ModelError("disorder terms are defined on chain layouts only");
        if (!(disorder->W >= 0.0) || !(disorder->W_prime >= 0.0))
            throw ModelError("disorder strengths must be >= 0");
    }
}

std::string describe(const JumpFamily& family) {
    return std::visit(overloaded{
                          [](const BiasedJumps&) { return std::string("biased"); },
                          [](const XLikeJumps&) { return std::string("x-like"); },
                          [](const DephasingJumps&) { return std::string("dephasing"); },
                          [](const GaugeFixingJumps&) { return std::string("gauge-fixing"); },
                          [](const EffectiveAsepJumps&) { return std::string("effective-asep"); },
                      },
                      family);
}

SparseOperator twist_hamiltonian(const LatticeLayout& layout, double J, double phi) {
    if (!layout.periodic()) throw ModelError("twisted boundary needs a chain-pbc layout");
    const int L = layout.length();
    OperatorBuilder b(layout);
    b.add_product_hc({{layout.site(L - 1), SpinOp::Raise},
                      {layout.link(L - 1), SpinOp::Raise},
                      {layout.site(0), SpinOp::Lower}},
                     J * std::polar(1.0, phi));
    return b.build();
}

SparseOperator disorder_hamiltonian(const ModelSpec& spec) {
    OperatorBuilder b(spec.layout);
    if (spec.disorder) add_disorder(b, spec.layout, *spec.disorder);
    return b.build();
}

SparseOperator open_bond_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    OperatorBuilder b(spec.layout);
    std::visit(overloaded{
                   [](const NoHamiltonian&) {},
                   [&](const QlmChain& h) { add_chain_open_bonds(b, spec.layout, h.J); },
                   [&](const QlmHierarchical& h) { add_hierarchical(b, spec.layout, h); },
                   [&](const Qlm2D& h) { add_square(b, spec.layout, h); },
               },
               spec.hamiltonian);
    if (spec.disorder) add_disorder(b, spec.layout, *spec.disorder);
    return b.build();
}

SparseOperator build_hamiltonian(const ModelSpec& spec) {
    auto h = open_bond_hamiltonian(spec);
    if (const auto* chain = std::get_if<QlmChain>(&spec.hamiltonian); chain && spec.layout.periodic())
        h = h + twist_hamiltonian(spec.layout, chain->J, chain->phi);
    return h;
}

std::vector<SparseOperator> build_jumps(const LatticeLayout& layout, const JumpFamily& family) {
    std::vector<SparseOperator> out;
    const auto slots = layout.dissipative_slots();
    std::visit(overloaded{
                   [&](const BiasedJumps& b) {
                       check_rate(b.gamma_u, "gamma_u");
                       check_rate(b.gamma_d, "gamma_d");
                       for (auto slot : slots) {
                           const bool vertical = layout.slot_info(slot).species == Species::LinkY;
                           const double gu = vertical ? b.gamma_u_vertical.value_or(b.gamma_u) : b.gamma_u;
                           const double gd = vertical ? b.gamma_d_vertical.value_or(b.gamma_d) : b.gamma_d;
                           check_rate(gu, "gamma_u");
                           check_rate(gd, "gamma_d");
                           out.push_back(OperatorBuilder(layout).add_product({{slot, SpinOp::Raise}}, std::sqrt(gu)).build());
                           out.push_back(OperatorBuilder(layout).add_product({{slot, SpinOp::Lower}}, std::sqrt(gd)).build());
                       }
                   },
                   [&](const XLikeJumps& x) {
                       check_rate(x.gamma_u, "gamma_u");
                       check_rate(x.gamma_d, "gamma_d");
                       for (auto slot : slots)
                           out.push_back(OperatorBuilder(layout)
                                             .add_product({{slot, SpinOp::Raise}}, std::sqrt(x.gamma_u))
                                             .add_product({{slot, SpinOp::Lower}}, std::sqrt(x.gamma_d))
                                             .build());
                   },
                   [&](const DephasingJumps& d) {
                       check_rate(d.gamma, "gamma");
                       for (auto slot : slots)
                           out.push_back(OperatorBuilder(layout).add_product({{slot, SpinOp::Z}}, std::sqrt(d.gamma)).build());
                   },
                   [&](const GaugeFixingJumps& g) {
                       check_rate(g.Gamma, "Gamma");
                       for (std::size_t n = 0; n < layout.num_gauge_sites(); ++n)
                           out.push_back(scale(std::sqrt(g.Gamma), gauss_generator(layout, n)));
                   },
                   [&](const EffectiveAsepJumps& e) {
                       check_rate(e.gamma_r, "gamma_r");
                       check_rate(e.gamma_l, "gamma_l");
                       if (!layout.is_chain()) throw ModelError("effective-asep jumps need a chain layout");
                       const int L = layout.length();
                       const int bonds = layout.periodic() ? L : L - 1;
                       for (int n = 0; n < bonds; ++n) {
                           const auto a = layout.site(n);
                           const auto c = layout.site((n + 1) % L);
                           out.push_back(OperatorBuilder(layout)
                                             .add_product({{a, SpinOp::Lower}, {c, SpinOp::Raise}}, std::sqrt(e.gamma_r))
                                             .build());
                           out.push_back(OperatorBuilder(layout)
                                             .add_product({{a, SpinOp::Raise}, {c, SpinOp::Lower}}, std::sqrt(e.gamma_l))
                                             .build());
                       }
                   },
               },
               family);
    return out;
}

std::vector<SparseOperator> build_jump_set(const ModelSpec& spec) {
    spec.validate();
    std::vector<SparseOperator> out;
    for (const auto& family : spec.jumps) {
        auto ops = build_jumps(spec.layout, family);
        out.insert(out.end(), std::make_move_iterator(ops.begin()), std::make_move_iterator(ops.end()));
    }
    return out;
}

}  // namespace dqlm
