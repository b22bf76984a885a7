// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/spin.hpp"

#include "dqlm/error.hpp"

namespace dqlm {

BasisTag full_tag(const LatticeLayout& layout) { return {"full:" + layout.describe()}; }

SparseOperator single_spin_operator(const LatticeLayout& layout, std::size_t slot, SpinOp which) {
    if (slot >= layout.total_spins())
        throw IndexError("slot " + std::to_string(slot) + " out of range for " + layout.describe());
    const Factor f{slot, which};
    return OperatorBuilder(layout).add_product({f}, 1.0).build();
}

OperatorBuilder::OperatorBuilder(const LatticeLayout& layout) : layout_(&layout) {}

OperatorBuilder& OperatorBuilder::add_product(std::span<const Factor> factors, cplx coef) {
    State mask = 0;
    for (const auto& f : factors) {
        if (f.slot >= layout_->total_spins()) throw IndexError("factor slot out of range");
        const State b = State{1} << f.slot;
        if (mask & b) throw IndexError("product factors must act on distinct slots");
        mask |= b;
    }
    const State dim = layout_->hilbert_dim();
    for (State col = 0; col < dim; ++col) {
        State row = col;
        cplx amp = coef;
        bool alive = true;
        for (const auto& f : factors) {
            const State b = State{1} << f.slot;
            const bool up = row & b;
            switch (f.op) {
                case SpinOp::Raise:
                    if (up) alive = false;
                    row |= b;
                    break;
                case SpinOp::Lower:
                    if (!up) alive = false;
                    row &= ~b;
                    break;
                case SpinOp::Z:
                    amp *= up ? 0.5 : -0.5;
                    break;
            }
            if (!alive) break;
        }
        if (alive && amp != cplx{}) entries_.push_back({static_cast<std::size_t>(row), static_cast<std::size_t>(col), amp});
    }
    return *this;
}

OperatorBuilder& OperatorBuilder::add_product_hc(std::initializer_list<Factor> factors, cplx coef) {
    add_product(factors, coef);
    std::vector<Factor> conj(factors);
    for (auto& f : conj) {
        if (f.op == SpinOp::Raise)
            f.op = SpinOp::Lower;
        else if (f.op == SpinOp::Lower)
            f.op = SpinOp::Raise;
    }
    return add_product(conj, std::conj(coef));
}

OperatorBuilder& OperatorBuilder::add_diagonal(const std::function<cplx(State)>& f) {
    const State dim = layout_->hilbert_dim();
    for (State s = 0; s < dim; ++s) {
        const cplx v = f(s);
        if (v != cplx{}) entries_.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(s), v});
    }
    return *this;
}

SparseOperator OperatorBuilder::build() const {
    return SparseOperator::from_triplets(layout_->hilbert_dim(), entries_, full_tag(*layout_));
}

SparseOperator diagonal_operator(const LatticeLayout& layout, const std::function<cplx(State)>& f) {
    return OperatorBuilder(layout).add_diagonal(f).build();
}

}  // namespace dqlm
