// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <set>

#include "dqlm/error.hpp"
#include "dqlm/lattice.hpp"
#include "dqlm/sparse.hpp"
#include "dqlm/spin.hpp"
#include "oracles.hpp"

using namespace dqlm;

namespace {

double dense_diff(const SparseOperator& a, const oracle::Mat& b) { return (a.to_dense() - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("layout spin counts") {
    CHECK(build_layout(LatticeKind::ChainOBC, 7).total_spins() == 13);
    CHECK(build_layout(LatticeKind::ChainPBC, 7).total_spins() == 14);
    CHECK(build_layout(LatticeKind::Square2D, 2, 3).total_spins() == 13);
    CHECK(build_layout(LatticeKind::Hierarchical, 5).total_spins() == 12);
    CHECK(build_layout(LatticeKind::Hierarchical, 5).num_gauge_sites() == 5);
}

TEST_CASE("layout size errors") {
    CHECK_THROWS_AS(build_layout(LatticeKind::ChainOBC, 1), SizeError);
    CHECK_THROWS_AS(build_layout(LatticeKind::Hierarchical, 2), SizeError);
    CHECK_THROWS_AS(build_layout(LatticeKind::Square2D, 2, 1), SizeError);
    CHECK_THROWS_AS(build_layout(LatticeKind::ChainOBC, 40), SizeError);
}

TEST_CASE("slot maps are a bijection onto the register") {
    for (auto [kind, lx, ly] : {std::tuple{LatticeKind::ChainOBC, 5, 1}, std::tuple{LatticeKind::ChainPBC, 4, 1},
                                std::tuple{LatticeKind::Hierarchical, 6, 1}, std::tuple{LatticeKind::Square2D, 3, 2}}) {
        const auto layout = build_layout(kind, lx, ly);
        std::set<std::size_t> seen;
        if (layout.is_chain()) {
            for (int n = 0; n < lx; ++n) seen.insert(layout.site(n));
            const int links = layout.periodic() ? lx : lx - 1;
            for (int n = 0; n < links; ++n) seen.insert(layout.link(n));
        } else if (kind == LatticeKind::Hierarchical) {
            for (int n = 0; n < lx; ++n) seen.insert(layout.top(n));
            for (int m = 0; m + 1 < lx; ++m) seen.insert(layout.middle(m));
            for (int j = 1; j + 1 < lx; ++j) seen.insert(layout.bottom(j));
        } else {
            for (int y = 0; y < ly; ++y)
                for (int x = 0; x < lx; ++x) {
                    seen.insert(layout.site(x, y));
                    if (x + 1 < lx) seen.insert(layout.link_x(x, y));
                    if (y + 1 < ly) seen.insert(layout.link_y(x, y));
                }
        }
        CHECK(seen.size() == layout.total_spins());
        CHECK(*seen.rbegin() == layout.total_spins() - 1);
    }
}

TEST_CASE("out-of-range slot access") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 3);
    CHECK_THROWS_AS(layout.link(2), IndexError);
    CHECK_THROWS_AS(layout.site(3), IndexError);
    CHECK_THROWS_AS(single_spin_operator(layout, 5, SpinOp::Z), IndexError);
}

TEST_CASE("single spin conventions") {
    const auto one = build_layout(LatticeKind::ChainOBC, 2);  // 3 spins; check slot 0 against the oracle
    for (std::size_t k = 0; k < one.total_spins(); ++k) {
        CHECK(dense_diff(single_spin_operator(one, k, SpinOp::Z), oracle::spin(3, k, 'z')) == 0.0);
        CHECK(dense_diff(single_spin_operator(one, k, SpinOp::Raise), oracle::spin(3, k, '+')) == 0.0);
        CHECK(dense_diff(single_spin_operator(one, k, SpinOp::Lower), oracle::spin(3, k, '-')) == 0.0);
    }
    const auto up = single_spin_operator(one, 0, SpinOp::Raise);
    const auto down = single_spin_operator(one, 0, SpinOp::Lower);
    CHECK((up * up).nnz() == 0);
    CHECK(max_abs_diff(adjoint(up), down) == 0.0);
    // s^+ s^- projects onto up: entry 1 exactly on states with bit 0 set
    const auto proj = up * down;
    for (State s = 0; s < 8; ++s) CHECK(proj.at(s, s) == cplx(bit(s, 0) ? 1.0 : 0.0));
    // raise on slot 1: one entry per state with slot 1 down
    const auto r1 = single_spin_operator(one, 1, SpinOp::Raise);
    CHECK(r1.nnz() == 4);
    for (State s = 0; s < 8; ++s)
        if (!bit(s, 1)) CHECK(r1.at(s | 2U, s) == cplx(1.0));
}

TEST_CASE("spin algebra on random slots") {
    const auto layout = build_layout(LatticeKind::ChainPBC, 3);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, layout.total_spins() - 1);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t k = pick(rng);
        const auto z = single_spin_operator(layout, k, SpinOp::Z);
        const auto p = single_spin_operator(layout, k, SpinOp::Raise);
        const auto m = single_spin_operator(layout, k, SpinOp::Lower);
        CHECK(max_abs_diff(commutator(z, p), p) == 0.0);
        CHECK(max_abs_diff(commutator(z, m), scale(-1.0, m)) == 0.0);
        CHECK(max_abs_diff(commutator(p, m), scale(2.0, z)) == 0.0);
        CHECK(commutator(z, z).nnz() == 0);
        const std::size_t q = (k + 1 + pick(rng) % (layout.total_spins() - 1)) % layout.total_spins();
        CHECK(commutator(p, single_spin_operator(layout, q, SpinOp::Lower)).nnz() == 0);
        CHECK(max_abs_diff(adjoint(adjoint(p)), p) == 0.0);
    }
}

TEST_CASE("sparse algebra matches dense arithmetic") {
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    const BasisTag tag{"t"};
    auto random_op = [&](std::size_t dim) {
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                if ((i + 2 * j) % 3 == 0) t.push_back({i, j, cplx(g(rng), g(rng))});
        return SparseOperator::from_triplets(dim, t, tag);
    };
    const auto a = random_op(6);
    const auto b = random_op(6);
    const auto da = a.to_dense();
    const auto db = b.to_dense();
    CHECK(dense_diff(a + b, da + db) < 1e-14);
    CHECK(dense_diff(a * b, da * db) < 1e-13);
    CHECK(dense_diff(adjoint(a), da.adjoint()) == 0.0);
    CHECK(dense_diff(transpose(a), da.transpose()) == 0.0);
    CHECK(dense_diff(conjugate(a), da.conjugate()) == 0.0);
    CHECK(dense_diff(commutator(a, b), da * db - db * da) < 1e-13);
    CHECK(dense_diff(scale(cplx(0.0, 2.0), a), cplx(0.0, 2.0) * da) == 0.0);
    const auto k = kron(a, b, BasisTag{"k"});
    CHECK((k.to_dense() - oracle::Mat(Eigen::kroneckerProduct(da, db))).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(a.frobenius_norm() - da.norm()) < 1e-12);

    std::vector<cplx> v(6);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    const auto av = a.apply(v);
    const Eigen::VectorXcd ref = da * Eigen::Map<const Eigen::VectorXcd>(v.data(), 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(av[static_cast<std::size_t>(i)] - ref(i)) < 1e-13);
}

TEST_CASE("canonical assembly merges duplicates and drops zeros") {
    const BasisTag tag{"t"};
    const auto a = SparseOperator::from_triplets(3, {{2, 1, 1.0}, {0, 0, 2.0}, {2, 1, -1.0}, {1, 2, 0.5}}, tag);
    CHECK(a.nnz() == 2);
    CHECK(a.at(0, 0) == cplx(2.0));
    CHECK(a.at(2, 1) == cplx(0.0));
    const auto d = SparseOperator::from_triplets(2, {{0, 0, 1e-15}, {1, 1, 1.0}}, tag, 1e-12);
    CHECK(d.nnz() == 1);
}

TEST_CASE("mismatched operands are rejected") {
    const auto a = SparseOperator::identity(2, BasisTag{"a"});
    const auto b = SparseOperator::identity(3, BasisTag{"a"});
    const auto c = SparseOperator::identity(2, BasisTag{"c"});
    CHECK_THROWS_AS(add(a, b), DimensionMismatch);
    CHECK_THROWS_AS(mul(a, c), DimensionMismatch);
    std::vector<cplx> v(3);
    CHECK_THROWS_AS(a.apply(v), DimensionMismatch);
}

TEST_CASE("operator builder sums products") {
    const auto layout = build_layout(LatticeKind::ChainOBC, 2);
    const auto h = OperatorBuilder(layout)
                       .add_product_hc({{layout.site(0), SpinOp::Raise},
                                        {layout.link(0), SpinOp::Raise},
                                        {layout.site(1), SpinOp::Lower}},
                                       1.0)
                       .build();
    // <tau_1 up, s up, tau_2 down| H |tau_1 down, s down, tau_2 up> = 1
    const State ket = (1U << layout.site(0)) | (1U << layout.link(0));
    const State bra = 1U << layout.site(1);
    CHECK(h.at(ket, bra) == cplx(1.0));
    CHECK(h.at(bra, ket) == cplx(1.0));
    CHECK(h.nnz() == 2);
}
