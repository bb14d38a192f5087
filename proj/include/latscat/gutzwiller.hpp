#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "latscat/common.hpp"

// Self-consistent single-site mean-field (decoupling) treatment of the
// Bose-Hubbard model. The condensate amplitude Phi = <b> is determined as a
// fixed point of the single-site Hamiltonian
//   h(Phi) = -z J Phi (b + b^dag) + (U/2) n(n-1) - mu n + z J Phi^2,
// and the converged state supplies the matter-field moments that enter the
// scattered-light observables.

namespace latscat::gutzwiller {

struct BoseHubbardParams {
    double hopping_J = 1.0;
    double interaction_U = 0.0;
    double mu = 0.0;
    int z = 2;       // lattice coordination: 2 (1D), 4 (2D), 6 (3D)
    int n_max = 12;  // Fock cutoff, doubled automatically if the tail is occupied

    void validate() const {
        if (!(interaction_U >= 0.0)) throw config_error("interaction U \xe2\x89\xa5 0 violated");
        if (n_max < 6) throw config_error("Fock cutoff n_max \xe2\x89\xa5 6 required");
        if (z != 2 && z != 4 && z != 6) throw config_error("coordination z must be 2, 4 or 6");
    }
};

struct GutzwillerState {
    Eigen::VectorXd f;  // real Fock amplitudes f_0..f_{n_cutoff}
    int n_cutoff = 0;
    double phi = 0.0;       // <b>, gauge-fixed >= 0
    double density = 0.0;   // <n>
    double b2 = 0.0;        // <b^2>
    double nn = 0.0;        // <n^2>
    double energy = 0.0;    // variational energy per site
    bool converged = false;
    double residual = 0.0;
    int iterations = 0;
};

namespace detail {

inline double order_parameter(const Eigen::VectorXd& f) {
    double s = 0.0;
    for (int n = 0; n + 1 < f.size(); ++n) s += std::sqrt(n + 1.0) * f(n) * f(n + 1);
    return s;
}

struct SiteSolve {
    Eigen::VectorXd f;
    double energy;
};

// Ground state of h(Phi) in the truncated Fock basis. The matrix is real
// symmetric tridiagonal, so the solver skips the Householder reduction.
inline SiteSolve site_ground_state(const BoseHubbardParams& p, double phi, int n_max) {
    const double zJ = p.z * p.hopping_J;
    Eigen::VectorXd diag(n_max + 1), sub(n_max);
    for (int n = 0; n <= n_max; ++n) {
        diag(n) = 0.5 * p.interaction_U * n * (n - 1.0) - p.mu * n + zJ * phi * phi;
        if (n + 1 <= n_max) sub(n) = -zJ * phi * std::sqrt(n + 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw numerical_error("single-site eigensolve failed at Phi = " + format_g12(phi));
    Eigen::VectorXd f = es.eigenvectors().col(0);
    // gauge: for phi > 0 the ground state is sign-definite; make <b> >= 0.
    // Fock-like states (phi = 0) get their dominant amplitude made positive.
    if (order_parameter(f) < -1e-15) {
        f = -f;
    } else if (std::abs(order_parameter(f)) <= 1e-15) {
        int imax = 0;
        f.cwiseAbs().maxCoeff(&imax);
        if (f(imax) < 0.0) f = -f;
    }
    return {f, es.eigenvalues()(0)};
}

}  // namespace detail

/// Build a state record (moments, energy if params given) from Fock
/// amplitudes; normalizes and gauge-fixes. Used both by the solver and to
/// construct reference states (e.g. truncated coherent states) in analyses.
inline GutzwillerState make_state(Eigen::VectorXd f) {
    const double norm = f.norm();
    if (!(norm > 0.0)) throw config_error("state amplitudes must not vanish");
    f /= norm;
    if (detail::order_parameter(f) < 0.0) f = -f;
    GutzwillerState s;
    s.n_cutoff = static_cast<int>(f.size()) - 1;
    s.f = f;
    s.phi = detail::order_parameter(f);
    for (int n = 0; n <= s.n_cutoff; ++n) {
        s.density += n * f(n) * f(n);
        s.nn += static_cast<double>(n) * n * f(n) * f(n);
        if (n + 2 <= s.n_cutoff) s.b2 += std::sqrt((n + 1.0) * (n + 2.0)) * f(n) * f(n + 2);
    }
    s.converged = true;
    return s;
}

/// Mean-field ground state at fixed (J, U, mu). A damped fixed-point
/// iteration runs first; if the map is too marginal to converge (slope near
/// one close to the transition or at tiny U), a bracketed root solve on
/// g(Phi) - Phi takes over. The Phi = 0 branch is always solved as well and
/// wins energy ties.
inline GutzwillerState solve_gutzwiller(const BoseHubbardParams& params, double tol = 1e-12,
                                        int max_iter = 500, double phi_init = 0.5,
                                        bool root_fallback = true) {
    params.validate();
    if (!(tol > 0.0) || tol > 1e-10) throw config_error("tolerance must satisfy 0 < tol \xe2\x89\xa4 1e-10");
    if (max_iter < 1) throw config_error("max_iter \xe2\x89\xa5 1 required");

    const int n_cap = 192;
    struct TailOverflow {};
    for (int n_max = params.n_max; n_max <= n_cap; n_max *= 2) {
        // Any ground state reaching the Fock tail bumps the ladder immediately;
        // solving again at a doubled cutoff is cheaper than iterating blind.
        auto solve_site = [&](double phi) {
            auto s = detail::site_ground_state(params, phi, n_max);
            if (s.f(n_max) * s.f(n_max) >= 1e-8) throw TailOverflow{};
            return s;
        };
        auto g = [&](double phi) { return detail::order_parameter(solve_site(phi).f); };

        try {
            // symmetry-broken branch
            double phi = std::abs(phi_init);
            int iters = 0;
            double residual = 0.0, residual_then = 0.0;
            bool ok = false;
            for (; iters < max_iter; ++iters) {
                const double next = g(phi);
                residual = std::abs(next - phi);
                phi = 0.5 * phi + 0.5 * next;  // damping kills period-2 cycles
                if (residual <= tol) {
                    ok = true;
                    break;
                }
                // Near the transition (and at tiny U) the map slope approaches
                // one and the iteration stalls; hand over to the root solve.
                if (root_fallback && iters % 50 == 0) {
                    if (iters >= 100 && residual > 0.3 * residual_then) break;
                    residual_then = residual;
                }
            }
            if (!ok && root_fallback) {
                // The fixed point solves F(phi) = g(phi) - phi = 0 with F(0) = 0;
                // any symmetry-broken root lies where F turns negative.
                const double lo = 1e-8;
                if (g(lo) - lo > 0.0) {
                    double hi = 0.25;
                    while (hi < 16.0 && g(hi) - hi > 0.0) hi *= 2.0;
                    if (g(hi) - hi <= 0.0) {
                        double a = lo, b = hi;
                        double fa = g(a) - a;
                        for (int k = 0; k < 200 && b - a > 1e-14; ++k) {
                            const double m = 0.5 * (a + b);
                            const double fm = g(m) - m;
                            if ((fa <= 0.0) == (fm <= 0.0)) {
                                a = m;
                                fa = fm;
                            } else {
                                b = m;
                            }
                        }
                        phi = 0.5 * (a + b);
                        residual = std::abs(g(phi) - phi);
                        ok = residual <= 1e-8;  // root bracketed to machine width
                    }
                } else {
                    phi = 0.0;  // no broken-symmetry root above the bracket floor
                    residual = 0.0;
                    ok = true;
                }
            }
            if (!ok)
                throw numerical_error("mean-field iteration did not converge: residual " +
                                      format_g12(residual) + " after " + std::to_string(iters) +
                                      " iterations");

            auto broken = solve_site(phi);
            auto trivial = solve_site(0.0);
            const double scale = std::max({std::abs(broken.energy), std::abs(trivial.energy), 1.0});
            const bool prefer_trivial = trivial.energy <= broken.energy + 1e-12 * scale;
            const auto& winner = prefer_trivial ? trivial : broken;

            GutzwillerState s = make_state(winner.f);
            s.energy = winner.energy;
            s.converged = true;
            s.residual = prefer_trivial ? 0.0 : residual;
            s.iterations = iters;
            if (prefer_trivial) s.phi = 0.0;
            return s;
        } catch (const TailOverflow&) {
            continue;
        }
    }
    throw numerical_error("Fock cutoff exceeded: occupation tail above n = " +
                          std::to_string(n_cap) + " (|f_nmax|\xc2\xb2 \xe2\x89\xa5 1e-8)");
}

/// Chemical potential reaching a target mean density, by bisection; the
/// density is nondecreasing in mu.
inline double find_mu_for_density(BoseHubbardParams params, double target_n, double tol_n = 1e-9) {
    if (!(target_n > 0.0)) throw config_error("target density must be positive");
    const double zJ = params.z * params.hopping_J;
    double lo = -2.0 * (zJ + params.interaction_U) - 1.0;
    double hi = params.interaction_U * (target_n + 1.0) + 2.0 * zJ + 1.0;
    auto density_at = [&](double mu) {
        params.mu = mu;
        try {
            return solve_gutzwiller(params).density;
        } catch (const numerical_error&) {
            // Fock cutoff exceeded: the density at this mu is beyond any
            // representable state, which for bisection just means "too high".
            return std::numeric_limits<double>::infinity();
        }
    };
    if (density_at(lo) > target_n) throw numerical_error("density bracket failed from below");
    if (density_at(hi) < target_n) throw numerical_error("density bracket failed from above");
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double n_mid = density_at(mid);
        if (std::abs(n_mid - target_n) <= tol_n) return mid;
        (n_mid < target_n ? lo : hi) = mid;
        if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

/// Variance of the matter quadrature X_alpha = (b e^{-i alpha} + b^dag e^{i alpha})/2,
/// evaluated directly in the Fock basis (exact for the stored amplitudes).
/// At alpha = 0 and pi/2 this reduces to 1/4 + [(n - Phi^2) +- (<b^2> - Phi^2)]/2.
inline double matter_quadrature_variance(const GutzwillerState& state, double alpha) {
    if (!state.converged) throw config_error("quadrature variance requires a converged state");
    const int n = state.n_cutoff;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n + 2);  // b^dag pushes one level up
    const cd em = std::exp(cd(0.0, -alpha)), ep = std::exp(cd(0.0, alpha));
    for (int m = 0; m <= n; ++m) {
        if (m > 0) x(m - 1) += 0.5 * em * std::sqrt(static_cast<double>(m)) * state.f(m);
        x(m + 1) += 0.5 * ep * std::sqrt(m + 1.0) * state.f(m);
    }
    double mean = 0.0, sq = 0.0;
    for (int m = 0; m <= n + 1; ++m) {
        if (m <= n) mean += std::real(std::conj(cd(state.f(m), 0.0)) * x(m));
        sq += std::norm(x(m));
    }
    return sq - mean * mean;
}

/// Photon number in the density-suppressed (diffraction-minimum) geometry:
/// 2 |C|^2 (K-1) F^2[W1](pi/d) [( <b^2> - Phi^2 )^2 + (n - Phi^2)(1 + n - Phi^2)].
inline double min_intensity(const GutzwillerState& state, int K, double absC, double ftW1_pi) {
    if (K < 2) throw config_error("need at least 2 illuminated sites (K \xe2\x89\xa5 2)");
    const double db = state.b2 - state.phi * state.phi;
    const double dn = state.density - state.phi * state.phi;
    return 2.0 * absC * absC * (K - 1) * ftW1_pi * ftW1_pi * (db * db + dn * (1.0 + dn));
}

/// Mean light quadrature at the density-suppressed diffraction maximum:
/// <X_{beta=0}> = Phi^2 F[W1](2 pi/d) (K-1). Probes the order parameter.
inline double max_quadrature_mean(const GutzwillerState& state, int K, double ftW1_2pi) {
    if (K < 2) throw config_error("need at least 2 illuminated sites (K \xe2\x89\xa5 2)");
    return state.phi * state.phi * ftW1_2pi * (K - 1);
}

}  // namespace latscat::gutzwiller
