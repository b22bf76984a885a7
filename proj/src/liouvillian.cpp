// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "dqlm/error.hpp"
#include "dqlm/spin.hpp"

namespace dqlm {

namespace {

constexpr cplx kI{0.0, 1.0};

SparseOperator jump_rate_operator(const LindbladTerms& terms) {
    SparseOperator k = SparseOperator::zero(terms.h_ket.dim(), terms.h_ket.tag());
    for (const auto& l : terms.jumps) k = k + mul(adjoint(l), l);
    return k;
}

}  // namespace

/// Column access to the generator: for a column pair (k, l) it enumerates the
/// nonzero rows (i, j) and their values.
struct Superoperator::Kernel {
    SparseOperator a_t;   // (H_ket - iK)^T, rows give the columns of the ket-side factor
    SparseOperator b;     // H_bra + iK, rows give the bra-side factor
    std::vector<SparseOperator> jumps_t;

    explicit Kernel(const LindbladTerms& terms) {
        const auto k = jump_rate_operator(terms);
        a_t = transpose(terms.h_ket - kI * k);
        b = terms.h_bra + kI * k;
        for (const auto& l : terms.jumps) jumps_t.push_back(transpose(l));
    }

    template <class F>
    void for_column(State ket, State bra, F&& emit) const {
        {
            const auto rp = a_t.row_ptr();
            const auto ci = a_t.col_index();
            const auto va = a_t.values();
            for (std::size_t p = rp[ket]; p < rp[ket + 1]; ++p) emit(ci[p], bra, -kI * va[p]);
        }
        {
            const auto rp = b.row_ptr();
            const auto ci = b.col_index();
            const auto va = b.values();
            for (std::size_t p = rp[bra]; p < rp[bra + 1]; ++p) emit(ket, ci[p], kI * va[p]);
        }
        for (const auto& lt : jumps_t) {
            const auto rp = lt.row_ptr();
            const auto ci = lt.col_index();
            const auto va = lt.values();
            for (std::size_t p = rp[ket]; p < rp[ket + 1]; ++p)
                for (std::size_t q = rp[bra]; q < rp[bra + 1]; ++q)
                    emit(ci[p], ci[q], 2.0 * va[p] * std::conj(va[q]));
        }
    }
};

LindbladTerms lindblad_terms(const ModelSpec& spec) {
    auto h = build_hamiltonian(spec);
    return {h, h, build_jump_set(spec)};
}

LindbladTerms twisted_terms(const ModelSpec& spec, double phi, TwistVariant variant) {
    if (!spec.layout.periodic()) throw ModelError("twisted generators need a chain-pbc layout");
    const auto* chain = std::get_if<QlmChain>(&spec.hamiltonian);
    if (!chain) throw ModelError("twisted generators need a qlm-1d Hamiltonian");
    const auto open = open_bond_hamiltonian(spec);
    LindbladTerms t;
    t.h_ket = open + twist_hamiltonian(spec.layout, chain->J, chain->phi + phi);
    // The bra side enters as I (x) H_bra^T: the Lindblad form uses H_bra = H,
    // the double-space twist keeps H_twist(phi) untransposed, i.e. H_bra = H_twist(-phi).
    t.h_bra = variant == TwistVariant::Lindblad ? t.h_ket
                                                : open + twist_hamiltonian(spec.layout, chain->J, -(chain->phi + phi));
    t.jumps = build_jump_set(spec);
    return t;
}

std::vector<cplx> vectorize(const SparseOperator& rho, const DoubleSector& sector) {
    if (rho.dim() != sector.layout().hilbert_dim()) throw DimensionMismatch("vectorize: operator dimension mismatch");
    std::vector<cplx> v(sector.size(), 0.0);
    const auto rp = rho.row_ptr();
    const auto ci = rho.col_index();
    const auto va = rho.values();
    for (std::size_t r = 0; r < rho.dim(); ++r)
        for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
            const auto idx = sector.index_of(r, ci[p]);
            if (!idx) throw IndexError("vectorize: operator has support outside " + sector.tag().label);
            v[*idx] = va[p];
        }
    return v;
}

SparseOperator devectorize(std::span<const cplx> v, const DoubleSector& sector) {
    if (v.size() != sector.size()) throw DimensionMismatch("devectorize: vector length mismatch");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == cplx{}) continue;
        const auto [ket, bra] = sector.pair(i);
        t.push_back({ket, bra, v[i]});
    }
    return SparseOperator::from_triplets(sector.layout().hilbert_dim(), std::move(t), full_tag(sector.layout()));
}

SparseOperator apply_operator_form(const LindbladTerms& terms, const SparseOperator& rho) {
    const auto k = jump_rate_operator(terms);
    auto out = scale(-kI, mul(terms.h_ket, rho) - mul(rho, terms.h_bra)) - mul(k, rho) - mul(rho, k);
    for (const auto& l : terms.jumps) out = out + scale(2.0, mul(mul(l, rho), adjoint(l)));
    return out;
}

SparseOperator apply_adjoint_operator_form(const LindbladTerms& terms, const SparseOperator& o) {
    const auto k = jump_rate_operator(terms);
    auto out = scale(kI, mul(adjoint(terms.h_ket), o) - mul(o, adjoint(terms.h_bra))) - mul(k, o) - mul(o, k);
    for (const auto& l : terms.jumps) out = out + scale(2.0, mul(mul(adjoint(l), o), l));
    return out;
}

double relative_residual(const LindbladTerms& terms, const SparseOperator& rho, cplx lambda) {
    const double norm = rho.frobenius_norm();
    if (norm == 0.0) throw DimensionMismatch("residual of a zero operator");
    return (apply_operator_form(terms, rho) - lambda * rho).frobenius_norm() / norm;
}

Superoperator Superoperator::assemble(const LindbladTerms& terms, DoubleSector sector, double leak_tol) {
    Superoperator s;
    s.sector_ = std::make_shared<const DoubleSector>(std::move(sector));
    s.kernel_ = std::make_shared<const Kernel>(terms);
    s.assembled_ = true;
    const auto& sec = *s.sector_;
    std::vector<Triplet> t;
    double leak2 = 0.0;
    for (std::size_t c = 0; c < sec.size(); ++c) {
        const auto [ket, bra] = sec.pair(c);
        s.kernel_->for_column(ket, bra, [&](State i, State j, cplx v) {
            if (const auto r = sec.index_of(i, j))
                t.push_back({*r, c, v});
            else
                leak2 += std::norm(v);
        });
    }
    s.leakage_ = std::sqrt(leak2);
    if (s.leakage_ > leak_tol)
        throw LeakageError("Liouvillian couples " + sec.tag().label + " to its complement (leak " +
                               std::to_string(s.leakage_) + ")",
                           s.leakage_);
    s.matrix_ = SparseOperator::from_triplets(sec.size(), std::move(t), sec.tag());
    return s;
}

Superoperator Superoperator::matrix_free(LindbladTerms terms, DoubleSector sector) {
    Superoperator s;
    s.sector_ = std::make_shared<const DoubleSector>(std::move(sector));
    s.kernel_ = std::make_shared<const Kernel>(terms);
    return s;
}

const SparseOperator& Superoperator::matrix() const {
    if (!assembled_) throw Error("superoperator is matrix-free");
    return matrix_;
}

std::vector<cplx> Superoperator::apply(std::span<const cplx> v) const {
    std::vector<cplx> out(dim(), 0.0);
    apply_into(v, out);
    return out;
}

void Superoperator::apply_into(std::span<const cplx> v, std::span<cplx> out) const {
    if (v.size() != dim() || out.size() != dim()) throw DimensionMismatch("superoperator apply: length mismatch");
    std::fill(out.begin(), out.end(), cplx{});
    if (assembled_) {
        matrix_.apply_add(v, out);
        return;
    }
    const auto& sec = *sector_;
    for (std::size_t c = 0; c < sec.size(); ++c) {
        if (v[c] == cplx{}) continue;
        const auto [ket, bra] = sec.pair(c);
        kernel_->for_column(ket, bra, [&](State i, State j, cplx val) {
            if (const auto r = sec.index_of(i, j)) out[*r] += val * v[c];
        });
    }
}

Superoperator assemble(const ModelSpec& spec, const DoubleSector& sector, double leak_tol) {
    return Superoperator::assemble(lindblad_terms(spec), sector, leak_tol);
}

SparseOperator double_gauss_generator(const LatticeLayout& layout, std::size_t n, const DoubleSector& sector) {
    if (n >= layout.num_gauge_sites()) throw IndexError("gauge site out of range");
    const auto forms = gauss_terms(layout);
    const auto value = [&](State s) {
        int twice = 0;
        for (const auto& term : forms[n]) twice += term.coef * twice_z(s, term.slot);
        return 0.5 * twice;
    };
    std::vector<cplx> d(sector.size());
    for (std::size_t i = 0; i < sector.size(); ++i) {
        const auto [ket, bra] = sector.pair(i);
        d[i] = value(ket) - value(bra);
    }
    return SparseOperator::diagonal(d, sector.tag());
}

double weak_symmetry_defect(const LindbladTerms& terms, const LatticeLayout& layout) {
    const auto forms = gauss_terms(layout);
    const State dim = layout.hilbert_dim();
    std::vector<std::vector<int>> g(dim);
    for (State s = 0; s < dim; ++s) {
        g[s].resize(forms.size());
        for (std::size_t n = 0; n < forms.size(); ++n)
            for (const auto& term : forms[n]) g[s][n] += term.coef * twice_z(s, term.slot);
    }
    const Superoperator::Kernel kernel(terms);
    double worst = 0.0;
    for (State k = 0; k < dim; ++k)
        for (State l = 0; l < dim; ++l)
            kernel.for_column(k, l, [&](State i, State j, cplx v) {
                for (std::size_t n = 0; n < forms.size(); ++n) {
                    const int shift = (g[i][n] - g[j][n]) - (g[k][n] - g[l][n]);
                    if (shift != 0) worst = std::max(worst, 0.5 * std::abs(shift) * std::abs(v));
                }
            });
    return worst;
}

}  // namespace dqlm
