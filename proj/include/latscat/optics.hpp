#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "latscat/common.hpp"
#include "latscat/wannier.hpp"

// Light modes, measurement geometry, and the light-matter coupling
// coefficients J_{i,j} = \int w(r-r_i) u1*(r) u0(r) w(r-r_j) dr that weight
// the density operator D = sum_i J_{ii} n_i and the bond (matter-interference)
// operator B = sum_<ij> J_{ij} b_i^dag b_j.

namespace latscat::optics {

enum class ModeKind { travelling, standing };

/// A probe (label 0) or detected (label 1) light mode. Wavevectors are stored
/// in rad/d, so the value pi corresponds to the lattice wavevector pi/d.
struct LightMode {
    ModeKind kind = ModeKind::standing;
    Eigen::Vector3d k = Eigen::Vector3d::Zero();
    double phase = 0.0;
    int label = 0;  // 0 probe, 1 detected

    void validate() const {
        if (kind == ModeKind::travelling && !(k.norm() > 0.0))
            throw config_error("travelling mode requires |k| > 0");
    }
};

inline cd mode_value(const LightMode& m, const Eigen::Vector3d& r) {
    const double arg = m.k.dot(r) + m.phase;
    if (m.kind == ModeKind::standing) return cd(std::cos(arg), 0.0);
    return std::exp(cd(0.0, arg));
}

/// Mode amplitude along the lattice axis; only k_x matters in 1D geometry.
inline cd mode_value_x(const LightMode& m, double x) {
    const double arg = m.k.x() * x + m.phase;
    if (m.kind == ModeKind::standing) return cd(std::cos(arg), 0.0);
    return std::exp(cd(0.0, arg));
}

/// Scattered-light prefactor: the scattered amplitude is a1 = C F, with C set
/// by the cavity geometry or by free-space dipole radiation at the detector.
struct CouplingPrefactor {
    enum class Variant { cavity, free_space };
    Variant variant = Variant::cavity;

    // cavity: C = (g1 g0 / Delta_a) a0 / (Delta_p + i kappa); rates in rad/s
    double g0 = 0.0, g1 = 0.0, delta_a = 1.0, delta_p = 0.0, kappa = 0.0, a0 = 1.0;

    // free space: C_E = omega_a^2 d_A^2 E0 / (8 pi hbar eps0 c^2 Delta_a r_obs); SI
    double dipole_dA = 0.0, field_E0 = 0.0, omega_a = 0.0, r_obs = 1.0;

    cd value() const {
        if (delta_a == 0.0) throw config_error("atom-light detuning must be nonzero");
        if (variant == Variant::cavity) {
            const cd denom(delta_p, kappa);
            if (std::abs(denom) == 0.0) throw config_error("cavity requires Delta_p + i kappa != 0");
            return (g1 * g0 / delta_a) * a0 / denom;
        }
        if (!(r_obs > 0.0)) throw config_error("observation distance must be positive");
        constexpr double hbar = 1.054571817e-34, eps0 = 8.8541878128e-12, c0 = 2.99792458e8;
        return cd(omega_a * omega_a * dipole_dA * dipole_dA * field_E0 /
                      (8.0 * pi * hbar * eps0 * c0 * c0 * delta_a * r_obs),
                  0.0);
    }
};

/// Coupling coefficients for the K illuminated sites (contiguous, centered in
/// the M-site chain; sites outside the window couple to nothing).
struct CouplingCoefficients {
    int sites_K = 0;
    int lattice_M = 0;
    int window_start = 0;            // absolute index of the first illuminated site
    std::vector<cd> density;         // J_{i,i}, length K
    std::vector<cd> bond;            // J_{i,i+1}, length K-1
    double dropped_next_nearest = 0.0;  // max |J_{i,i+2}|, excluded from B
};

namespace detail {

// \int P(t) u1*(t+c) u0(t+c) dt over the stored Wannier grid (trapezoid).
inline cd pair_mode_integral(const wannier::WannierBasis& basis, const std::vector<double>& P,
                             const LightMode& probe, const LightMode& detected, double c) {
    cd acc(0.0, 0.0);
    const size_t n = P.size();
    for (size_t i = 0; i < n; ++i) {
        if (P[i] == 0.0) continue;
        const double x = basis.grid[i] + c;
        cd term = P[i] * std::conj(mode_value_x(detected, x)) * mode_value_x(probe, x);
        if (i == 0 || i == n - 1) term *= 0.5;
        acc += term;
    }
    return acc * basis.dx;
}

}  // namespace detail

/// Numerically integrated density and bond coupling coefficients. The pair
/// product w(x-r_i) w(x-r_j) depends only on x - (r_i+r_j)/2, so every integral
/// reduces to the stored overlap tables against the analytic mode product;
/// the grid therefore covers every site's tails by construction.
inline CouplingCoefficients coupling_coefficients(const wannier::WannierBasis& basis,
                                                  const LightMode& probe, const LightMode& detected,
                                                  int K, int M) {
    probe.validate();
    detected.validate();
    if (K < 2) throw config_error("need at least 2 illuminated sites (K \xe2\x89\xa5 2)");
    if (K > M) throw config_error("illuminated block exceeds the lattice: K > M");

    CouplingCoefficients out;
    out.sites_K = K;
    out.lattice_M = M;
    out.window_start = (M - K) / 2;

    // next-nearest pair product w(t-1) w(t+1), dropped from B but reported
    const int n = static_cast<int>(basis.w.size());
    const int p = basis.points_per_period;
    std::vector<double> P2(static_cast<size_t>(n), 0.0);
    for (int i = p; i + p < n; ++i)
        P2[static_cast<size_t>(i)] = basis.w[static_cast<size_t>(i - p)] * basis.w[static_cast<size_t>(i + p)];

    out.density.resize(static_cast<size_t>(K));
    out.bond.resize(static_cast<size_t>(K - 1));
    for (int i = 0; i < K; ++i) {
        const double site = out.window_start + i;
        out.density[static_cast<size_t>(i)] =
            detail::pair_mode_integral(basis, basis.W0, probe, detected, site);
        if (i + 1 < K)
            out.bond[static_cast<size_t>(i)] =
                detail::pair_mode_integral(basis, basis.W1, probe, detected, site + 0.5);
        if (i + 2 <= K - 1)
            out.dropped_next_nearest =
                std::max(out.dropped_next_nearest,
                         std::abs(detail::pair_mode_integral(basis, P2, probe, detected, site + 1.0)));
    }
    return out;
}

/// Closed-form standing-wave coefficients. For standing probe and detected
/// modes the product u1 u0 splits into cosines at k± = k0x ± k1x with phases
/// phi± = phi0 ± phi1, and each J integral collapses onto the tabulated
/// Fourier transforms: the bond term is sampled half a period off the sites.
struct StandingCoefficients {
    int sites_K = 0;
    int lattice_M = 0;
    int window_start = 0;
    std::vector<double> density;  // length K
    std::vector<double> bond;     // length K-1
};

inline StandingCoefficients closed_form_DB(const wannier::WannierBasis& basis, double k0x,
                                           double k1x, double phi0, double phi1, int K, int M) {
    if (K < 2) throw config_error("need at least 2 illuminated sites (K \xe2\x89\xa5 2)");
    if (K > M) throw config_error("illuminated block exceeds the lattice: K > M");
    const double km = k0x - k1x, kp = k0x + k1x;
    const double pm = phi0 - phi1, pp = phi0 + phi1;
    const double f0m = fourier_overlap(basis, wannier::Overlap::W0, km);
    const double f0p = fourier_overlap(basis, wannier::Overlap::W0, kp);
    const double f1m = fourier_overlap(basis, wannier::Overlap::W1, km);
    const double f1p = fourier_overlap(basis, wannier::Overlap::W1, kp);

    StandingCoefficients out;
    out.sites_K = K;
    out.lattice_M = M;
    out.window_start = (M - K) / 2;
    out.density.resize(static_cast<size_t>(K));
    out.bond.resize(static_cast<size_t>(K - 1));
    for (int i = 0; i < K; ++i) {
        const double xm = out.window_start + i;
        out.density[static_cast<size_t>(i)] =
            0.5 * (f0m * std::cos(km * xm + pm) + f0p * std::cos(kp * xm + pp));
        if (i + 1 < K)
            out.bond[static_cast<size_t>(i)] = 0.5 * (f1m * std::cos(km * (xm + 0.5) + pm) +
                                                      f1p * std::cos(kp * (xm + 0.5) + pp));
    }
    return out;
}

inline StandingCoefficients closed_form_DB(const wannier::WannierBasis& basis,
                                           const LightMode& probe, const LightMode& detected,
                                           int K, int M) {
    if (probe.kind != ModeKind::standing || detected.kind != ModeKind::standing)
        throw config_error("closed-form coefficients require standing waves "
                           "(use coupling_coefficients for travelling modes)");
    return closed_form_DB(basis, probe.k.x(), detected.k.x(), probe.phase, detected.phase, K, M);
}

/// Phase that suppresses the density signal in the diffraction maximum
/// (k0x = k1x = pi/d, phi0 = -phi1): the two cosine terms of D cancel.
inline double density_suppression_phase(const wannier::WannierBasis& basis) {
    const double ratio = -fourier_overlap(basis, wannier::Overlap::W0, 2.0 * pi) /
                         fourier_overlap(basis, wannier::Overlap::W0, 0.0);
    if (ratio < -1.0 || ratio > 1.0)
        throw numerical_error("density suppression phase does not exist: |F[W0](2\xcf\x80/d)/F[W0](0)| > 1");
    return std::acos(ratio) / 2.0;
}

/// Detection angles theta_1 with |k1| = |k0| that satisfy the scattering-peak
/// conditions under a theta_1 scan. Angles are in radians; trivial n = 0
/// solutions (forward self-term, degenerate k1 = 0 standing mode) are dropped.
struct BraggPeaks {
    std::vector<double> travelling_pairs;    // 2(k0 - k1) = G: quadrature peaks, travelling modes
    std::vector<double> standing_detection;  // 2 k1 = G: standing detected mode
    std::vector<double> classical;           // k0 - k1 = G: classical diffraction
};

inline BraggPeaks bragg_peaks(const LightMode& probe) {
    probe.validate();
    const double mag = probe.k.norm();
    if (!(mag > 0.0)) throw config_error("probe wavevector must be nonzero for an angle scan");
    const double k0x = probe.k.x();

    BraggPeaks out;
    auto collect = [&](std::vector<double>& dst, auto k1x_of_n) {
        const int nmax = static_cast<int>(std::ceil(2.0 * mag / pi)) + 2;
        for (int n = -nmax; n <= nmax; ++n) {
            if (n == 0) continue;
            const double k1x = k1x_of_n(n);
            const double s = k1x / mag;
            if (s < -1.0 - 1e-12 || s > 1.0 + 1e-12) continue;
            dst.push_back(std::asin(std::clamp(s, -1.0, 1.0)));
        }
        std::sort(dst.begin(), dst.end());
    };
    collect(out.travelling_pairs, [&](int n) { return k0x - pi * n; });
    collect(out.standing_detection, [&](int n) { return pi * n; });
    collect(out.classical, [&](int n) { return k0x - 2.0 * pi * n; });
    return out;
}

}  // namespace latscat::optics
