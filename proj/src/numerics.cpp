// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dqlm/error.hpp"

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace dqlm {

namespace {

bool canonical_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
}

}  // namespace

void sort_canonical(std::vector<cplx>& values) { std::sort(values.begin(), values.end(), canonical_less); }

Spectrum eig_dense(const Eigen::MatrixXcd& a, bool want_vectors, std::size_t cap) {
    if (a.rows() != a.cols()) throw DimensionMismatch("eig_dense: matrix is not square");
    const auto n = static_cast<std::size_t>(a.rows());
    if (n > cap)
        throw SizeError("eig_dense: dimension " + std::to_string(n) + " exceeds the dense cap " + std::to_string(cap) +
                        "; shrink L or restrict to a smaller sector");
    Spectrum out;
    if (n == 0) return out;
    Eigen::MatrixXcd work = a;  // column-major, overwritten by LAPACK
    std::vector<cplx> w(n);
    Eigen::MatrixXcd vr;
    if (want_vectors) vr.resize(a.rows(), a.cols());
    const lapack_int nn = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', nn, work.data(), nn,
                                          w.data(), nullptr, 1, want_vectors ? vr.data() : nullptr, nn);
    if (info != 0) throw SolverError("zgeev failed with info = " + std::to_string(info));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return canonical_less(w[i], w[j]); });
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = w[order[i]];
    if (want_vectors) {
        out.vectors.resize(a.rows(), a.cols());
        for (std::size_t i = 0; i < n; ++i) out.vectors.col(static_cast<Eigen::Index>(i)) = vr.col(static_cast<Eigen::Index>(order[i]));
        const Eigen::MatrixXcd r = a * out.vectors - out.vectors * Eigen::Map<const Eigen::VectorXcd>(out.values.data(), static_cast<Eigen::Index>(n)).asDiagonal();
        for (Eigen::Index i = 0; i < r.cols(); ++i)
            out.residual_max = std::max(out.residual_max, r.col(i).norm() / out.vectors.col(i).norm());
    }
    return out;
}

Spectrum eig_dense(const SparseOperator& a, bool want_vectors, std::size_t cap) {
    if (a.dim() > cap)
        throw SizeError("eig_dense: dimension " + std::to_string(a.dim()) + " exceeds the dense cap " +
                        std::to_string(cap) + "; shrink L or restrict to a smaller sector");
    auto s = eig_dense(a.to_dense(), want_vectors, cap);
    s.basis = a.tag().label;
    return s;
}

Spectrum eig_dense(const Superoperator& l, bool want_vectors, std::size_t cap) {
    return eig_dense(l.matrix(), want_vectors, cap);
}

std::size_t count_near(std::span<const cplx> values, cplx z, double radius) {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](const cplx& v) { return std::abs(v - z) < radius; }));
}

Kernel kernel(const Superoperator& l, double tol, std::size_t cap) {
    const auto s = eig_dense(l, true, cap);
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (std::abs(s.values[i]) < tol) cols.push_back(static_cast<Eigen::Index>(i));
    Kernel k;
    if (cols.empty()) return k;
    Eigen::MatrixXcd m(s.vectors.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = s.vectors.col(cols[j]);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j) k.basis.emplace_back(q.col(j).data(), q.col(j).data() + q.rows());
    return k;
}

std::size_t kernel_dimension(const std::vector<Superoperator>& blocks, double tol, std::size_t cap) {
    std::size_t total = 0;
    for (const auto& b : blocks) total += count_near(eig_dense(b, false, cap).values, 0.0, tol);
    return total;
}

SparseOperator steady_state_from_vector(std::span<const cplx> v, const DoubleSector& sector) {
    const auto rho = devectorize(v, sector);
    auto h = scale(0.5, rho + adjoint(rho));
    cplx trace = 0.0;
    for (const auto& d : h.diagonal_values()) trace += d;
    if (std::abs(trace) < 1e-300) throw SolverError("kernel vector has zero trace");
    return scale(1.0 / trace, h);
}

SparseOperator unique_steady_state(const Superoperator& l, double tol, std::size_t cap) {
    const auto k = kernel(l, tol, cap);
    if (k.dim() != 1)
        throw SolverError("expected a one-dimensional kernel, found " + std::to_string(k.dim()));
    return steady_state_from_vector(k.basis.front(), l.sector());
}

namespace {

// Hungarian algorithm (shortest augmenting paths) on a dense square cost matrix.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> match(n);
    for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
    return match;
}

}  // namespace

double multiset_distance(std::span<const cplx> a, std::span<const cplx> b, std::size_t sorted_threshold) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    double worst = 0.0;
    if (n > sorted_threshold) {
        std::vector<cplx> x(a.begin(), a.end()), y(b.begin(), b.end());
        sort_canonical(x);
        sort_canonical(y);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
        return worst;
    }
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::norm(a[i] - b[j]);
    const auto match = hungarian(cost);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[match[i]]));
    return worst;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    const auto directed = [](std::span<const cplx> x, std::span<const cplx> y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

namespace {

double cross(const cplx& o, const cplx& a, const cplx& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(const cplx& p, const cplx& a, const cplx& b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<cplx> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double hull_excess(std::span<const cplx> points, std::span<const cplx> hull) {
    double worst = 0.0;
    for (const auto& p : points) {
        if (hull.empty()) return std::numeric_limits<double>::infinity();
        bool inside = hull.size() >= 3;
        for (std::size_t i = 0; i < hull.size() && inside; ++i)
            if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0.0) inside = false;
        if (inside) continue;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < hull.size(); ++i) d = std::min(d, segment_distance(p, hull[i], hull[(i + 1) % hull.size()]));
        worst = std::max(worst, d);
    }
    return worst;
}

std::vector<Spectrum> winding_scan(const ModelSpec& spec, const DoubleConstraints& constraints,
                                   std::span<const double> phis, TwistVariant variant, std::size_t cap) {
    const auto sector = enumerate_double_sector(spec.layout, constraints);
    std::vector<Spectrum> out;
    out.reserve(phis.size());
    for (double phi : phis) {
        const auto l = Superoperator::assemble(twisted_terms(spec, phi, variant), sector);
        out.push_back(eig_dense(l, false, cap));
    }
    return out;
}

Observable diagonal_observable(std::string name, const DoubleSector& sector, const std::function<double(State)>& f) {
    Observable o{std::move(name), std::vector<cplx>(sector.size(), 0.0)};
    for (std::size_t i = 0; i < sector.size(); ++i) {
        const auto [ket, bra] = sector.pair(i);
        if (ket == bra) o.weights[i] = f(ket);
    }
    return o;
}

namespace {

struct Diagnostics {
    double trace_defect = 0.0;
    double hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
};

Diagnostics diagnose(const DoubleSector& sector, std::span<const cplx> v, bool positivity) {
    Diagnostics d;
    cplx trace = 0.0;
    for (std::size_t i = 0; i < sector.size(); ++i) {
        const auto [ket, bra] = sector.pair(i);
        if (ket == bra) trace += v[i];
        else if (ket < bra) {
            const auto j = sector.index_of(bra, ket);
            const cplx mirror = j ? v[*j] : cplx{};
            d.hermiticity_defect = std::max(d.hermiticity_defect, std::abs(v[i] - std::conj(mirror)));
        }
    }
    d.trace_defect = std::abs(trace - 1.0);
    if (positivity) {
        const auto kets = sector.ket_states();
        std::unordered_map<State, Eigen::Index> pos;
        for (std::size_t i = 0; i < kets.size(); ++i) pos.emplace(kets[i], static_cast<Eigen::Index>(i));
        const auto n = static_cast<Eigen::Index>(kets.size());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t i = 0; i < sector.size(); ++i) {
            const auto [ket, bra] = sector.pair(i);
            const auto a = pos.find(ket);
            const auto b = pos.find(bra);
            if (a != pos.end() && b != pos.end()) m(a->second, b->second) = v[i];
        }
        const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        d.min_eigenvalue = n > 0 ? es.eigenvalues()(0) : 0.0;
    }
    return d;
}

}  // namespace

StateSeries evolve(const Superoperator& l, std::span<const cplx> v0, std::span<const double> t_grid,
                   const std::vector<Observable>& observables, const EvolveOptions& opts) {
    const std::size_t n = l.dim();
    if (v0.size() != n) throw DimensionMismatch("evolve: initial vector length mismatch");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw Error("evolve: time grid must be strictly increasing");
    for (const auto& o : observables)
        if (o.weights.size() != n) throw DimensionMismatch("evolve: observable length mismatch");

    StateSeries series;
    for (const auto& o : observables) series.names.push_back(o.name);
    series.values.assign(observables.size(), {});
    if (t_grid.empty()) return series;

    std::vector<cplx> y(v0.begin(), v0.end());
    const auto record = [&](double t) {
        series.t.push_back(t);
        for (std::size_t k = 0; k < observables.size(); ++k) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += observables[k].weights[i] * y[i];
            series.values[k].push_back(acc.real());
        }
        const auto d = diagnose(l.sector(), y, opts.check_positivity);
        series.trace_defect.push_back(d.trace_defect);
        series.hermiticity_defect.push_back(d.hermiticity_defect);
        series.min_eigenvalue.push_back(d.min_eigenvalue);
    };

    // Dormand-Prince 5(4) tableau.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    double t = t_grid.front();
    double h = opts.initial_step;
    record(t);
    l.apply_into(y, k1);
    for (std::size_t g = 1; g < t_grid.size(); ++g) {
        const double target = t_grid[g];
        while (t < target) {
            if (series.steps + series.rejected >= opts.max_steps) throw SolverError("evolve: step budget exhausted");
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            const auto stage = [&](std::initializer_list<std::pair<double, const std::vector<cplx>*>> terms,
                                   std::vector<cplx>& out) {
                for (std::size_t i = 0; i < n; ++i) {
                    cplx acc = y[i];
                    for (const auto& [coef, k] : terms) acc += step * coef * (*k)[i];
                    tmp[i] = acc;
                }
                l.apply_into(tmp, out);
            };
            stage({{a21, &k1}}, k2);
            stage({{a31, &k1}, {a32, &k2}}, k3);
            stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}, k4);
            stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, k5);
            stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, k6);
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            l.apply_into(ynew, k7);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const cplx e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(e) / sc);
            }
            if (err <= 1.0) {
                t = last ? target : t + step;
                y.swap(ynew);
                k1.swap(k7);
                ++series.steps;
            } else {
                ++series.rejected;
            }
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (!last || err > 1.0) h = step * factor;
            if (h < opts.min_step) throw SolverError("evolve: step size underflow");
        }
        record(t);
    }
    series.final_state = y;
    return series;
}

std::vector<cplx> propagate_expm(const Superoperator& l, std::span<const cplx> v0, double t) {
    const Eigen::MatrixXcd m = (t * l.matrix().to_dense()).exp();
    const Eigen::VectorXcd v = m * Eigen::Map<const Eigen::VectorXcd>(v0.data(), static_cast<Eigen::Index>(v0.size()));
    return {v.data(), v.data() + v.size()};
}

}  // namespace dqlm
