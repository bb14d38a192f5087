#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "latscat/common.hpp"

// Lanczos iteration for the lowest eigenpair of a large symmetric operator,
// with full reorthogonalization and thick restarts from the Ritz vector.
// The starting vector is generated from a fixed seed so repeated runs are
// deterministic.

namespace latscat::lanczos {

struct Options {
    int krylov_dim = 80;     // vectors kept per restart cycle
    int max_restarts = 60;
    double tol = 1e-10;      // residual ||Hv - Ev||
    uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct Result {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    int matvecs = 0;
};

namespace detail {

inline Eigen::VectorXd seeded_unit_vector(Eigen::Index dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
    v.normalize();
    return v;
}

}  // namespace detail

/// Lowest eigenpair of the symmetric operator given as apply(in, out).
/// `project_out`, if nonempty, deflates known eigenvectors (used to reach the
/// second eigenvalue). Convergence is declared on the explicit residual.
template <class Apply>
Result lowest_eigenpair(const Apply& apply, Eigen::Index dim, const Options& opt = {},
                        const std::vector<Eigen::VectorXd>& project_out = {}) {
    if (dim <= 0) throw config_error("operator dimension must be positive");

    auto deflate = [&](Eigen::VectorXd& v) {
        for (const auto& p : project_out) v -= p.dot(v) * p;
    };

    Result res;
    Eigen::VectorXd v0 = detail::seeded_unit_vector(dim, opt.seed);
    deflate(v0);
    if (v0.norm() < 1e-12) throw numerical_error("start vector lies in the deflated subspace");
    v0.normalize();

    const int m = std::min<Eigen::Index>(opt.krylov_dim, dim);
    Eigen::MatrixXd V(dim, m);
    Eigen::VectorXd alpha(m), beta(m), w(dim);

    for (int restart = 0; restart < opt.max_restarts; ++restart) {
        int k = 0;
        V.col(0) = v0;
        for (; k < m; ++k) {
            apply(V.col(k), w);
            ++res.matvecs;
            deflate(w);
            alpha(k) = V.col(k).dot(w);
            w -= alpha(k) * V.col(k);
            if (k > 0) w -= beta(k - 1) * V.col(k - 1);
            // two-pass full reorthogonalization keeps the basis clean
            for (int pass = 0; pass < 2; ++pass)
                for (int j = 0; j <= k; ++j) w -= V.col(j).dot(w) * V.col(j);
            beta(k) = w.norm();
            if (k + 1 == m || beta(k) < 1e-13) {
                ++k;
                break;
            }
            V.col(k + 1) = w / beta(k);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(alpha.head(k), beta.head(std::max(k - 1, 0)));
        if (es.info() != Eigen::Success) throw numerical_error("tridiagonal eigensolve failed");
        res.value = es.eigenvalues()(0);
        res.vector = V.leftCols(k) * es.eigenvectors().col(0);
        res.vector.normalize();

        apply(res.vector, w);
        ++res.matvecs;
        deflate(w);
        res.residual = (w - res.value * res.vector).norm();
        if (res.residual <= opt.tol) return res;
        v0 = res.vector;
    }
    throw numerical_error("ground-state iteration did not converge: residual " +
                          format_g12(res.residual) + " after " + std::to_string(res.matvecs) +
                          " operator applications");
}

}  // namespace latscat::lanczos
