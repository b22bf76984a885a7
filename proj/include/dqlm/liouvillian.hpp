// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file liouvillian.hpp
 * @brief Vectorisation and Lindblad superoperators on the double space.
 *
 * Convention: A rho B maps to (A (x) B^T) vec(rho), with vec(|i><j|) the
 * basis pair (i, j) and full-space index i * dim + j. The generator is
 *
 *   L[rho] = -i (H_ket rho - rho H_bra) + sum_mu (2 L_mu rho L_mu^dag - {L_mu^dag L_mu, rho}),
 *
 * where H_ket = H_bra = H for a Lindblad equation. Keeping the two sides
 * separate represents the double-space twisted generator, whose bra-side
 * Hamiltonian is the transpose of the ket-side one.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dqlm/models.hpp"
#include "dqlm/sparse.hpp"
#include "dqlm/symmetry.hpp"

namespace dqlm {

/// Operator data of a generator on the full Hilbert space.
struct LindbladTerms {
    SparseOperator h_ket;
    SparseOperator h_bra;
    std::vector<SparseOperator> jumps;
};

LindbladTerms lindblad_terms(const ModelSpec& spec);

enum class TwistVariant {
    Lindblad,     ///< H_PBC(phi) inside a genuine Lindblad generator
    DoubleSpace,  ///< +i I (x) H_twist(phi) on the bra side, not transposed
};

/// Generator on a chain-pbc layout with twisted wrap bond. Throws ModelError
/// for other layouts or a non-chain Hamiltonian.
LindbladTerms twisted_terms(const ModelSpec& spec, double phi, TwistVariant variant);

std::vector<cplx> vectorize(const SparseOperator& rho, const DoubleSector& sector);
/// Inverse of vectorize; entries outside the sector are zero.
SparseOperator devectorize(std::span<const cplx> v, const DoubleSector& sector);

/// Operator-form application L[rho] through sparse products; no double-space
/// basis is needed, so it reaches registers whose double space cannot be indexed.
SparseOperator apply_operator_form(const LindbladTerms& terms, const SparseOperator& rho);
/// ||L[rho] - lambda rho||_F / ||rho||_F through the operator form.
double relative_residual(const LindbladTerms& terms, const SparseOperator& rho, cplx lambda = 0.0);
/// Adjoint generator L^dag[O] = i (H_ket^dag O - O H_bra^dag) + sum (2 L^dag O L - {L^dag L, O}).
SparseOperator apply_adjoint_operator_form(const LindbladTerms& terms, const SparseOperator& o);

/// Superoperator restricted to a double-space sector, either assembled as a
/// sparse matrix or applied matrix-free from the operator data.
class Superoperator {
public:
    /// Column access to the generator, shared by assembly and matrix-free paths.
    struct Kernel;

    /// Assembles the sector block. Throws LeakageError if the generator maps
    /// sector vectors outside the sector by more than leak_tol.
    static Superoperator assemble(const LindbladTerms& terms, DoubleSector sector, double leak_tol = 1e-12);
    static Superoperator matrix_free(LindbladTerms terms, DoubleSector sector);

    std::size_t dim() const noexcept { return sector_->size(); }
    const DoubleSector& sector() const noexcept { return *sector_; }
    bool assembled() const noexcept { return assembled_; }
    /// Throws Error for a matrix-free superoperator.
    const SparseOperator& matrix() const;
    /// Column leakage norm ||(1 - P) L P|| measured during assembly.
    double leakage() const noexcept { return leakage_; }

    std::vector<cplx> apply(std::span<const cplx> v) const;
    /// out = L v
    void apply_into(std::span<const cplx> v, std::span<cplx> out) const;

private:
    std::shared_ptr<const DoubleSector> sector_;
    bool assembled_ = false;
    SparseOperator matrix_;
    double leakage_ = 0.0;
    std::shared_ptr<const Kernel> kernel_;
};

/// Assembles the model on a sector (twist-free Lindblad generator).
Superoperator assemble(const ModelSpec& spec, const DoubleSector& sector, double leak_tol = 1e-12);

/// Double-space Gauss generator G_n (x) I - I (x) G_n^T restricted to a sector.
SparseOperator double_gauss_generator(const LatticeLayout& layout, std::size_t n, const DoubleSector& sector);

/// Largest entry of the commutators [G_n (x) I - I (x) G_n^T, L] over all n,
/// evaluated column by column on the full double space (small registers only).
double weak_symmetry_defect(const LindbladTerms& terms, const LatticeLayout& layout);

}  // namespace dqlm
