// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dqlm/error.hpp"
#include "dqlm/exact.hpp"
#include "dqlm/numerics.hpp"
#include "dqlm/spin.hpp"

using namespace dqlm;

namespace {

ModelSpec chain(int L, bool pbc, JumpFamily jumps) {
    ModelSpec spec;
    spec.layout = build_layout(pbc ? LatticeKind::ChainPBC : LatticeKind::ChainOBC, L);
    spec.hamiltonian = QlmChain{1.0, 0.0};
    spec.jumps = {jumps};
    return spec;
}

const BiasedJumps kFig1{2.4, 1.6, {}, {}};

}  // namespace

TEST_CASE("upper-triangular eigenvalues are the diagonal") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) a(i, j) = cplx(i == j ? -i : 0.3 * (i + j), 0.1 * j);
    const auto sp = eig_dense(a, true);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(sp.values[static_cast<std::size_t>(i)] - a(i, i)) < 1e-12);
    CHECK(sp.residual_max < 1e-12);
}

TEST_CASE("random Hermitian matrices against the symmetric solver") {
    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    for (int n : {4, 17, 60}) {
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
        const Eigen::MatrixXcd h = m + m.adjoint();
        const auto sp = eig_dense(h, true);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        for (int i = 0; i < n; ++i) {
            const cplx z = sp.values[static_cast<std::size_t>(i)];
            CHECK(std::abs(z.imag()) < 1e-10);
            CHECK(std::abs(z.real() - es.eigenvalues()(n - 1 - i)) < 1e-10);
        }
        CHECK(sp.residual_max < 1e-8);
    }
}

TEST_CASE("canonical order and dense cap") {
    std::vector<cplx> v{{-1.0, 2.0}, {0.0, 0.0}, {-1.0, -2.0}};
    sort_canonical(v);
    CHECK(v[0] == cplx(0.0, 0.0));
    CHECK(v[1] == cplx(-1.0, -2.0));
    CHECK_THROWS_AS(eig_dense(Eigen::MatrixXcd::Identity(10, 10), false, 8), SizeError);
}

TEST_CASE("model spectra are conjugation symmetric and stable") {
    for (bool pbc : {false, true}) {
        const auto spec = chain(3, pbc, kFig1);
        for (const auto& block : weak_symmetry_blocks(spec.layout)) {
            const auto l = Superoperator::assemble(lindblad_terms(spec), block);
            const auto sp = eig_dense(l, true);
            std::vector<cplx> conj;
            for (const auto& z : sp.values) {
                CHECK(z.real() <= 1e-10);
                conj.push_back(std::conj(z));
            }
            if (block.constraints().strong_ket == block.constraints().strong_bra &&
                block.constraints().gauge_shift_twice == std::vector<int>(3, 0))
                CHECK(multiset_distance(sp.values, conj) < 1e-8);
            CHECK(sp.residual_max < 1e-8);
        }
    }
}

TEST_CASE("kernel of the open chain: L+1 in the weak gauge sector") {
    const auto spec = chain(4, false, kFig1);
    std::vector<Superoperator> weak, rest;
    for (auto& b : weak_symmetry_blocks(spec.layout)) {
        const auto& c = b.constraints();
        const bool zero_shift = *c.gauge_shift_twice == std::vector<int>(4, 0);
        (zero_shift ? weak : rest).push_back(Superoperator::assemble(lindblad_terms(spec), b));
    }
    CHECK(kernel_dimension(weak) == 5);
    // H vanishes at N=0 and N=L, so |empty><full| times the link steady state is stationary too
    CHECK(kernel_dimension(rest) == 2);
}

TEST_CASE("kernel extraction agrees with an SVD count") {
    const auto spec = chain(3, false, DephasingJumps{1.0});
    const auto l = Superoperator::assemble(lindblad_terms(spec), DoubleSector::full(spec.layout));
    const auto k = kernel(l);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l.matrix().to_dense());
    std::size_t null = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) null += svd.singularValues()(i) < 1e-9;
    CHECK(k.dim() == null);
    // every kernel vector is annihilated
    for (const auto& v : k.basis) {
        const auto lv = l.apply(v);
        double m = 0.0;
        for (const auto& x : lv) m = std::max(m, std::abs(x));
        CHECK(m < 1e-9);
    }
    // dephasing: one steady state per realised gauge-charge configuration in the weak gauge sector
    std::vector<Superoperator> weak;
    for (auto& b : weak_symmetry_blocks(spec.layout))
        if (*b.constraints().gauge_shift_twice == std::vector<int>(3, 0))
            weak.push_back(Superoperator::assemble(lindblad_terms(spec), b));
    CHECK(kernel_dimension(weak) == count_gauge_sectors(spec.layout));
    CHECK(k.dim() > count_gauge_sectors(spec.layout));
}

TEST_CASE("numerical steady state matches the closed form") {
    const auto spec = chain(5, false, kFig1);
    const auto sector = enumerate_double_sector(spec.layout, DoubleConstraints::weak_gauge(spec.layout, {2}));
    const auto l = Superoperator::assemble(lindblad_terms(spec), sector);
    const auto rho = unique_steady_state(l);
    auto ens = exact_steady_state(spec.layout, 1.0, 1.5);
    ens.strong = std::vector<int>{2};
    const auto exact = ens.to_operator();
    CHECK(max_abs_diff(rho, exact) < 1e-10);
    // fidelity with a diagonal reference: F = (sum_ij sqrt(p_i) sigma_ij sqrt(p_j)) eigen-decomposed
    const Eigen::MatrixXcd s = rho.to_dense();
    Eigen::VectorXd sq(s.rows());
    for (Eigen::Index i = 0; i < s.rows(); ++i) sq(i) = std::sqrt(std::max(0.0, exact.at(i, i).real()));
    const Eigen::MatrixXcd m = sq.asDiagonal() * s * sq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) f += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    CHECK(f * f > 1.0 - 1e-10);
}

TEST_CASE("spectrum comparison helpers") {
    const std::vector<cplx> a{{0, 0}, {-1, 1}, {-1, -1}, {-2, 0}};
    const std::vector<cplx> b{{-1, -1}, {-2, 0}, {0, 0}, {-1, 1}};
    CHECK(multiset_distance(a, b) == 0.0);
    CHECK(multiset_distance(a, b, 0) == 0.0);
    std::vector<cplx> c = b;
    c[0] += cplx(1e-3, 0);
    CHECK(std::abs(multiset_distance(a, c) - 1e-3) < 1e-12);
    CHECK(std::isinf(multiset_distance(a, std::vector<cplx>{{0, 0}})));
    CHECK(std::abs(hausdorff_distance(a, std::vector<cplx>{{0, 0}}) - 2.0) < 1e-15);

    const auto hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}});
    CHECK(hull.size() == 4);
    CHECK(hull_excess(std::vector<cplx>{{0.2, 0.3}, {1, 1}}, hull) == 0.0);
    CHECK(std::abs(hull_excess(std::vector<cplx>{{1.5, 0.5}}, hull) - 0.5) < 1e-15);
}

TEST_CASE("single-link relaxation follows the two-level solution") {
    ModelSpec spec;
    spec.layout = build_layout(LatticeKind::ChainOBC, 2);
    spec.jumps = {BiasedJumps{3.0, 1.0, {}, {}}};
    const auto sector = enumerate_double_sector(spec.layout, DoubleConstraints::strong_only({1}));
    const auto l = Superoperator::assemble(lindblad_terms(spec), sector);
    std::vector<cplx> v0(l.dim(), 0.0);
    const State s0 = State{1} << spec.layout.site(0);
    v0[*sector.index_of(s0, s0)] = 1.0;
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.025 * i);
    const std::size_t link = spec.layout.link(0);
    const auto series = evolve(l, v0, grid, {diagonal_observable("sz", sector, [&](State s) { return 0.5 * twice_z(s, link); })});
    const double z_inf = (3.0 - 1.0) / (2.0 * 3.0 + 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double exact = z_inf + (-0.5 - z_inf) * std::exp(-2.0 * 4.0 * grid[i]);
        worst = std::max(worst, std::abs(series.values[0][i] - exact));
        CHECK(series.trace_defect[i] < 1e-9);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("integrator agrees with dense exponentiation") {
    const auto spec = chain(3, false, kFig1);
    const State s0 = State{1} << spec.layout.site(0);
    const auto sector =
        enumerate_double_sector(spec.layout, DoubleConstraints::weak_gauge(spec.layout, strong_charges(spec.layout, s0)));
    CHECK(sector.size() <= 64);
    const auto l = Superoperator::assemble(lindblad_terms(spec), sector);
    std::vector<cplx> v0(l.dim(), 0.0);
    v0[*sector.index_of(s0, s0)] = 1.0;
    EvolveOptions opts;
    opts.check_positivity = true;
    const std::vector<double> grid{0.0, 0.5, 1.7};
    const auto series = evolve(l, v0, grid, {}, opts);
    const auto ref = propagate_expm(l, v0, 1.7);
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) diff = std::max(diff, std::abs(ref[i] - series.final_state[i]));
    CHECK(diff < 1e-8);
    for (double m : series.min_eigenvalue) CHECK(m > -1e-9);
}

TEST_CASE("twist scans on a small ring") {
    const auto spec = chain(3, true, kFig1);
    const auto constraints = DoubleConstraints::weak_gauge(spec.layout, {1});
    const std::vector<double> phis{0.0, 0.4, std::numbers::pi / 2, std::numbers::pi};
    const auto lind = winding_scan(spec, constraints, phis, TwistVariant::Lindblad);
    for (const auto& s : lind) CHECK(multiset_distance(s.values, lind[0].values) < 1e-8);
    const auto dbl = winding_scan(spec, constraints, phis, TwistVariant::DoubleSpace);
    CHECK(multiset_distance(dbl[3].values, dbl[0].values) < 1e-8);
    CHECK(hausdorff_distance(dbl[2].values, dbl[0].values) > 1e-4);
}
