// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>
#include <set>

#include "dqlm/error.hpp"
#include "dqlm/models.hpp"
#include "dqlm/spin.hpp"
#include "dqlm/symmetry.hpp"
#include "oracles.hpp"

using namespace dqlm;

namespace {

ModelSpec qlm(LatticeKind kind, int lx, int ly = 1) {
    ModelSpec spec;
    spec.layout = build_layout(kind, lx, ly);
    if (kind == LatticeKind::Hierarchical) spec.hamiltonian = QlmHierarchical{1.0, 1.0};
    else if (kind == LatticeKind::Square2D) spec.hamiltonian = Qlm2D{1.0, 0.7};
    else spec.hamiltonian = QlmChain{1.0, 0.0};
    return spec;
}

}  // namespace

TEST_CASE("chain Gauss generators match the dense oracle") {
    for (bool pbc : {false, true}) {
        const int L = 3;
        const auto layout = build_layout(pbc ? LatticeKind::ChainPBC : LatticeKind::ChainOBC, L);
        for (int n = 0; n < L; ++n) {
            const auto g = gauss_generator(layout, static_cast<std::size_t>(n));
            CHECK((g.to_dense() - oracle::chain_gauss(L, pbc, n)).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    CHECK_THROWS_AS(gauss_generator(build_layout(LatticeKind::ChainOBC, 3), 3), IndexError);
}

TEST_CASE("Gauss eigenvalue of a two-site state") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 2);
    const State s = (1U << layout.site(0)) | (1U << layout.link(0));
    CHECK(gauge_charges(layout, s).value(0) == 0.0);
}

TEST_CASE("Gauss generators telescope to the matter charge") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 4);
    SparseOperator sum = SparseOperator::zero(layout.hilbert_dim(), full_tag(layout));
    SparseOperator tau = sum;
    for (int n = 0; n < 4; ++n) {
        sum = sum + gauss_generator(layout, static_cast<std::size_t>(n));
        tau = tau + single_spin_operator(layout, layout.site(n), SpinOp::Z);
    }
    CHECK(max_abs_diff(sum, tau) == 0.0);
}

TEST_CASE("generators commute with each other and with every Hamiltonian") {
    for (auto [kind, lx, ly] : {std::tuple{LatticeKind::ChainOBC, 4, 1}, std::tuple{LatticeKind::ChainPBC, 4, 1},
                                std::tuple{LatticeKind::Hierarchical, 4, 1}, std::tuple{LatticeKind::Square2D, 2, 2}}) {
        const ModelSpec spec = qlm(kind, lx, ly);
        const auto h = build_hamiltonian(spec);
        CHECK(h.nnz() > 0);
        const auto& layout = spec.layout;
        for (std::size_t m = 0; m < layout.num_gauge_sites(); ++m) {
            const auto gm = gauss_generator(layout, m);
            CHECK(commutator(gm, h).max_abs() < 1e-14);
            for (std::size_t n = 0; n < layout.num_gauge_sites(); ++n)
                CHECK(commutator(gm, gauss_generator(layout, n)).nnz() == 0);
        }
    }
}

TEST_CASE("charge values") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 7);
    const State s = (1U << layout.site(0)) | (1U << layout.site(1)) | (1U << layout.link(3));
    CHECK(charge_value(layout, Charge::N, s) == 2.0);
    CHECK(charge_value(layout, Charge::D, 0) == 0.0);
    CHECK(strong_charges(layout, s) == std::vector<int>{2});
    CHECK_THROWS_AS(charge_operator(layout, Charge::NH), ModelError);
    const auto h = build_hamiltonian(qlm(LatticeKind::ChainOBC, 4));
    const auto l4 = build_layout(LatticeKind::ChainOBC, 4);
    CHECK(commutator(charge_operator(l4, Charge::N), h).nnz() == 0);
    const auto lad = build_layout(LatticeKind::Hierarchical, 4);
    const auto hh = build_hamiltonian(qlm(LatticeKind::Hierarchical, 4));
    CHECK(commutator(charge_operator(lad, Charge::NH), hh).max_abs() < 1e-14);
    CHECK(commutator(charge_operator(lad, Charge::DH), hh).max_abs() < 1e-14);
}

TEST_CASE("sector enumeration agrees with a brute-force filter") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 7);
    CHECK(enumerate_sector(layout, {std::vector<int>{2}, std::nullopt}).size() == 1344);

    // interior G_n are half-integers here, so the target is read off a basis state
    const auto l4 = build_layout(LatticeKind::ChainOBC, 4);
    const State ref = (1U << l4.site(0)) | (1U << l4.site(1));
    const auto target = gauge_charges(l4, ref).twice;
    const auto sec = enumerate_sector(l4, {std::vector<int>{2}, target});
    std::vector<State> brute;
    for (State s = 0; s < 128; ++s) {
        bool ok = oracle::popcount_bits(s, 0, 4) == 2;
        for (int n = 0; n < 4; ++n) {
            const auto g = oracle::chain_gauss(4, false, n);
            ok = ok && 2.0 * g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real() == target[static_cast<std::size_t>(n)];
        }
        if (ok) brute.push_back(s);
    }
    CHECK(!brute.empty());
    CHECK(sec.states() == brute);
    for (std::size_t i = 0; i < sec.size(); ++i) CHECK(sec.index_of(sec.state(i)) == i);
    CHECK(!sec.index_of(0).has_value());
}

TEST_CASE("weak-gauge double sector is a union of gauge blocks") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 7);
    std::map<std::vector<int>, std::size_t> d;
    for (State s = 0; s < layout.hilbert_dim(); ++s)
        if (strong_charges(layout, s)[0] == 2) ++d[gauge_charges(layout, s).twice];
    std::size_t total = 0, squares = 0;
    for (const auto& [g, n] : d) {
        total += n;
        squares += n * n;
    }
    CHECK(total == 1344);
    const auto dbl = enumerate_double_sector(layout, DoubleConstraints::weak_gauge(layout, {2}));
    CHECK(dbl.size() == squares);
    CHECK(dbl.size() == 5754);  // regression constant
    CHECK(dbl.blocks().size() == d.size());
    for (std::size_t i = 0; i < dbl.size(); i += 97) {
        const auto [k, b] = dbl.pair(i);
        CHECK(gauge_charges(layout, k) == gauge_charges(layout, b));
        CHECK(dbl.index_of(k, b) == i);
    }
}

TEST_CASE("weak symmetry blocks partition the full double space") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 3);
    std::size_t total = 0;
    for (const auto& b : weak_symmetry_blocks(layout)) total += b.size();
    CHECK(total == layout.hilbert_dim() * layout.hilbert_dim());
    const auto full = DoubleSector::full(layout);
    CHECK(full.size() == 1024);
    CHECK(full.index_of(3, 5) == 3 * 32 + 5);
}

TEST_CASE("projection detects leakage") {
    const ModelSpec spec = qlm(LatticeKind::ChainOBC, 4);
    const auto& layout = spec.layout;
    const State ref = (1U << layout.site(0)) | (1U << layout.site(1));
    const auto sec = enumerate_sector(layout, {std::vector<int>{2}, gauge_charges(layout, ref).twice});
    REQUIRE(sec.size() > 0);
    const auto hp = project_operator(build_hamiltonian(spec), sec);
    CHECK(hp.dim() == sec.size());
    CHECK(hp.tag() == sec.tag());
    CHECK_THROWS_AS(project_operator(single_spin_operator(layout, layout.link(0), SpinOp::Raise), sec), LeakageError);
}

TEST_CASE("gauge sector counts") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 2);
    std::set<std::vector<int>> seen;
    for (State s = 0; s < 8; ++s) seen.insert(gauge_charges(layout, s).twice);
    CHECK(count_gauge_sectors(layout) == seen.size());
}
