// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file numerics.hpp
 * @brief Dense non-Hermitian eigensolver, kernel extraction, spectrum
 *        comparison, twisted-boundary scans and time integration.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dqlm/liouvillian.hpp"
#include "dqlm/models.hpp"
#include "dqlm/sparse.hpp"

namespace dqlm {

inline constexpr std::size_t kDefaultDenseCap = 6000;

struct Spectrum {
    /// Sorted by real part descending, then imaginary part ascending.
    std::vector<cplx> values;
    /// Right eigenvectors as columns (empty unless requested).
    Eigen::MatrixXcd vectors;
    /// max ||A v - lambda v|| / ||v|| over returned pairs (0 without vectors).
    double residual_max = 0.0;
    std::string basis;
};

/// All eigenvalues of a general complex matrix (LAPACK zgeev: balancing,
/// Hessenberg reduction, shifted QR). Throws SizeError above `cap`.
Spectrum eig_dense(const Eigen::MatrixXcd& a, bool want_vectors = false, std::size_t cap = kDefaultDenseCap);
Spectrum eig_dense(const SparseOperator& a, bool want_vectors = false, std::size_t cap = kDefaultDenseCap);
Spectrum eig_dense(const Superoperator& l, bool want_vectors = false, std::size_t cap = kDefaultDenseCap);

void sort_canonical(std::vector<cplx>& values);

/// Number of values within `radius` of z.
std::size_t count_near(std::span<const cplx> values, cplx z, double radius);

struct Kernel {
    /// Orthonormal basis of the numerical kernel (|lambda| < tol), on the superoperator's sector.
    std::vector<std::vector<cplx>> basis;
    std::size_t dim() const noexcept { return basis.size(); }
};

/// Kernel of an assembled superoperator from its eigenpairs.
Kernel kernel(const Superoperator& l, double tol = 1e-9, std::size_t cap = kDefaultDenseCap);
/// Kernel dimension counted block by block over a list of superoperators.
std::size_t kernel_dimension(const std::vector<Superoperator>& blocks, double tol = 1e-9,
                             std::size_t cap = kDefaultDenseCap);

/// Hermitised, unit-trace density matrix from a kernel vector. Throws
/// SolverError if the vector has zero trace.
SparseOperator steady_state_from_vector(std::span<const cplx> v, const DoubleSector& sector);
/// The unique steady state of a block; throws SolverError unless the kernel is one-dimensional.
SparseOperator unique_steady_state(const Superoperator& l, double tol = 1e-9, std::size_t cap = kDefaultDenseCap);

/// Largest distance between matched eigenvalues under an optimal bipartite
/// matching (Hungarian algorithm, min-sum of squared distances); above
/// `sorted_threshold` values are matched after canonical sorting instead.
/// Returns +inf when the sizes differ.
double multiset_distance(std::span<const cplx> a, std::span<const cplx> b, std::size_t sorted_threshold = 2000);
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Convex hull in counter-clockwise order (collinear points dropped).
std::vector<cplx> convex_hull(std::vector<cplx> points);
/// Largest distance of any point outside the convex polygon `hull` (0 if all inside).
double hull_excess(std::span<const cplx> points, std::span<const cplx> hull);

/// Spectra of the twisted generator on a fixed sector for each phase.
std::vector<Spectrum> winding_scan(const ModelSpec& spec, const DoubleConstraints& sector,
                                   std::span<const double> phis, TwistVariant variant,
                                   std::size_t cap = kDefaultDenseCap);

struct EvolveOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    std::size_t max_steps = 50'000'000;
    /// Record min-eigenvalue of the Hermitian part at every grid point (dense, small supports only).
    bool check_positivity = false;
};

/// A linear functional on vectorised states: value = sum_i weights[i] v[i].
struct Observable {
    std::string name;
    std::vector<cplx> weights;
};

/// Tr(rho O) for a diagonal operator O given by its values on basis states.
Observable diagonal_observable(std::string name, const DoubleSector& sector, const std::function<double(State)>& f);

struct StateSeries {
    std::vector<double> t;
    std::vector<std::string> names;
    /// values[k][i]: observable k at time t[i] (real part).
    std::vector<std::vector<double>> values;
    std::vector<double> trace_defect;
    std::vector<double> hermiticity_defect;
    std::vector<double> min_eigenvalue;
    std::vector<cplx> final_state;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

/// Integrates dv/dt = L v with the Dormand-Prince 5(4) pair and records the
/// observables on `t_grid` (increasing, starting at the initial time).
/// Throws SolverError on step-size underflow or when max_steps is exceeded.
StateSeries evolve(const Superoperator& l, std::span<const cplx> v0, std::span<const double> t_grid,
                   const std::vector<Observable>& observables, const EvolveOptions& opts = {});

/// Dense propagation exp(t L) v0 (validation path for small blocks).
std::vector<cplx> propagate_expm(const Superoperator& l, std::span<const cplx> v0, double t);

}  // namespace dqlm
