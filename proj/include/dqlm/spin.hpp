// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dqlm/lattice.hpp"
#include "dqlm/sparse.hpp"

namespace dqlm {

/// Single spin-1/2 operators: s^z = diag(+1/2, -1/2) on (up, down), s^+ = |up><down|.
enum class SpinOp { Raise, Lower, Z };

/// Tag of the full 2^total_spins Hilbert space of a layout.
BasisTag full_tag(const LatticeLayout& layout);

SparseOperator single_spin_operator(const LatticeLayout& layout, std::size_t slot, SpinOp which);

struct Factor {
    std::size_t slot;
    SpinOp op;
};

/// Accumulates sums of c * (product of single-spin factors on distinct slots)
/// over the full register and assembles them once.
class OperatorBuilder {
public:
    explicit OperatorBuilder(const LatticeLayout& layout);

    /// Adds coef * prod(factors). Factors must act on distinct slots.
    OperatorBuilder& add_product(std::span<const Factor> factors, cplx coef);
    OperatorBuilder& add_product(std::initializer_list<Factor> factors, cplx coef) {
        return add_product(std::span<const Factor>(factors.begin(), factors.size()), coef);
    }
    /// Adds the hermitian conjugate term as well.
    OperatorBuilder& add_product_hc(std::initializer_list<Factor> factors, cplx coef);
    OperatorBuilder& add_diagonal(const std::function<cplx(State)>& f);

    SparseOperator build() const;

private:
    const LatticeLayout* layout_;
    std::vector<Triplet> entries_;
};

SparseOperator diagonal_operator(const LatticeLayout& layout, const std::function<cplx(State)>& f);

}  // namespace dqlm
