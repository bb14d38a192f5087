#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "latscat/common.hpp"

// Lowest-band Wannier function of the 1D optical lattice V0 sin^2(pi x / d),
// its overlap products W0(x) = w(x)^2 and W1(x) = w(x - d/2) w(x + d/2), and
// tabulated Fourier transforms F[W0], F[W1]. These parameterize every
// light-matter coupling coefficient downstream.

namespace latscat::wannier {

struct LatticePotential {
    double depth_V0 = 5.0;  // lattice depth in recoil energies E_R
    double period_d = 1.0;  // all lengths are expressed in units of d

    void validate() const {
        if (!(depth_V0 >= 0.0)) throw config_error("depth \xe2\x89\xa5 0 violated (lattice depth_V0)");
        if (!(period_d > 0.0)) throw config_error("period_d > 0 violated");
    }
};

/// Lowest-band Bloch data on a quasimomentum grid over the first Brillouin
/// zone. Plane-wave coefficients are gauge fixed so u_q(0) > 0, which makes
/// the band sum a real, even, maximally localized Wannier orbital.
struct BlochTable {
    double depth_V0 = 0.0;
    int cutoff = 0;              // number of plane waves (odd)
    std::vector<double> q;       // midpoint grid over (-pi, pi), rad/d
    std::vector<double> band;    // lowest-band E(q) in E_R
    Eigen::MatrixXd coeff;       // cutoff x nq; row r is the G = 2*pi*(r - L) component
    std::vector<std::string> warnings;
};

namespace detail {

// Plane-wave Hamiltonian of V0 sin^2(pi x) at quasimomentum q (rad/d):
// diagonal (q/pi + 2n)^2 + V0/2, first off-diagonals -V0/4; energies in E_R.
inline Eigen::MatrixXd plane_wave_hamiltonian(double V0, double q, int cutoff) {
    const int L = cutoff / 2;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int r = 0; r < cutoff; ++r) {
        const int n = r - L;
        const double kr = q / pi + 2.0 * n;
        h(r, r) = kr * kr + 0.5 * V0;
        if (r + 1 < cutoff) {
            h(r, r + 1) = -0.25 * V0;
            h(r + 1, r) = -0.25 * V0;
        }
    }
    return h;
}

}  // namespace detail

/// Lowest eigenvalue of the plane-wave Hamiltonian at a single quasimomentum.
inline double bloch_band_energy(double V0, double q, int cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::plane_wave_hamiltonian(V0, q, cutoff));
    if (es.info() != Eigen::Success)
        throw numerical_error("Bloch eigensolve failed at q = " + format_g12(q));
    return es.eigenvalues()(0);
}

/// Diagonalize the plane-wave Hamiltonian on a quasimomentum grid spanning the
/// first Brillouin zone. The midpoint grid contains q and -q in pairs and
/// avoids the zone-edge duplication.
inline BlochTable solve_bloch_band(const LatticePotential& pot, int cutoff = 21, int nq = 64) {
    pot.validate();
    if (cutoff < 11 || cutoff % 2 == 0) throw config_error("cutoff \xe2\x89\xa5 11 and odd required");
    if (nq < 32) throw config_error("quasimomentum grid size \xe2\x89\xa5 32 required");

    BlochTable out;
    out.depth_V0 = pot.depth_V0;
    out.cutoff = cutoff;
    out.q.resize(static_cast<size_t>(nq));
    out.band.resize(static_cast<size_t>(nq));
    out.coeff.resize(cutoff, nq);

    for (int j = 0; j < nq; ++j) {
        const double q = -pi + 2.0 * pi * (j + 0.5) / nq;
        out.q[static_cast<size_t>(j)] = q;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            detail::plane_wave_hamiltonian(pot.depth_V0, q, cutoff));
        if (es.info() != Eigen::Success)
            throw numerical_error("Bloch eigensolve failed at q = " + format_g12(q));
        out.band[static_cast<size_t>(j)] = es.eigenvalues()(0);
        Eigen::VectorXd c = es.eigenvectors().col(0);
        if (c.sum() < 0.0) c = -c;  // gauge: u_q(0) = sum_n c_n > 0
        out.coeff.col(j) = c;
    }

    // Cutoff adequacy: the band energy must be insensitive to 4 extra waves.
    double dmax = 0.0;
    for (double q : {0.0, 0.5 * pi, out.q.back()}) {
        dmax = std::max(dmax, std::abs(bloch_band_energy(pot.depth_V0, q, cutoff) -
                                       bloch_band_energy(pot.depth_V0, q, cutoff + 4)));
    }
    if (dmax > 1e-10)
        out.warnings.push_back("plane-wave cutoff " + std::to_string(cutoff) +
                               " not converged: band shift " + format_g12(dmax) + " E_R");
    return out;
}

/// Real-space Wannier orbital and overlap tables on a uniform grid.
struct WannierBasis {
    double depth_V0 = 0.0;
    double x0 = 0.0, dx = 0.0;  // grid = x0 + i*dx
    int points_per_period = 0;
    std::vector<double> grid;
    std::vector<double> w;    // Wannier orbital, real and even, \int w^2 = 1
    std::vector<double> W0;   // w(x)^2
    std::vector<double> W1;   // w(x - 1/2) w(x + 1/2)
    double k0 = 0.0, dk = 0.0;
    std::vector<double> kgrid;  // uniform over [-4 pi, 4 pi]
    std::vector<double> ftW0, ftW1;

    double value_w(double x) const { return cubic_interp(x0, dx, w, x); }
};

enum class Overlap { W0, W1 };

namespace detail {

// F[W](k) = \int W(x) cos(kx) dx by trapezoid; the sin part vanishes by parity.
inline double cosine_transform(const std::vector<double>& grid, const std::vector<double>& W,
                               double dx, double k) {
    double s = 0.0;
    const size_t n = grid.size();
    for (size_t i = 0; i < n; ++i) s += W[i] * std::cos(k * grid[i]);
    s -= 0.5 * (W.front() * std::cos(k * grid.front()) + W.back() * std::cos(k * grid.back()));
    return s * dx;
}

}  // namespace detail

inline WannierBasis build_wannier(const BlochTable& bloch, int points_per_period, int periods,
                                  int k_points);

/// Assemble the Wannier orbital from a gauge-fixed Bloch table, then the
/// overlap products and their Fourier-transform tables.
///
/// The real-space grid must contain the orbital tails: construction fails if
/// the boundary amplitude exceeds 1e-6 of the peak. periods = 0 grows the grid
/// (13, 15, ... 31) until the tails fit, which shallow lattices need.
inline WannierBasis build_wannier(const BlochTable& bloch, int points_per_period = 256,
                                  int periods = 0, int k_points = 1025) {
    if (periods == 0) {
        for (int p = 13; p <= 31; p += 2) {
            try {
                return build_wannier(bloch, points_per_period, p, k_points);
            } catch (const numerical_error&) {
                if (p + 2 > 31) throw;
            }
        }
    }
    if (periods < 11) throw config_error("grid must span \xe2\x89\xa5 11 periods");
    if (points_per_period % 2 != 0) throw config_error("points_per_period must be even");

    WannierBasis basis;
    basis.depth_V0 = bloch.depth_V0;
    basis.points_per_period = points_per_period;
    const int n = periods * points_per_period + 1;  // symmetric about x = 0
    basis.dx = 1.0 / points_per_period;
    basis.x0 = -0.5 * periods;
    basis.grid.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) basis.grid[static_cast<size_t>(i)] = basis.x0 + basis.dx * i;

    const int nq = static_cast<int>(bloch.q.size());
    const int L = bloch.cutoff / 2;
    basis.w.assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < nq; ++j) {
        for (int r = 0; r < bloch.cutoff; ++r) {
            const double c = bloch.coeff(r, j);
            if (std::abs(c) < 1e-16) continue;
            const double k = bloch.q[static_cast<size_t>(j)] + 2.0 * pi * (r - L);
            for (int i = 0; i < n; ++i)
                basis.w[static_cast<size_t>(i)] += c * std::cos(k * basis.grid[static_cast<size_t>(i)]);
        }
    }
    // Symmetrize (the analytic orbital is even; this removes roundoff skew).
    for (int i = 0; i < n / 2; ++i) {
        const double v = 0.5 * (basis.w[static_cast<size_t>(i)] + basis.w[static_cast<size_t>(n - 1 - i)]);
        basis.w[static_cast<size_t>(i)] = v;
        basis.w[static_cast<size_t>(n - 1 - i)] = v;
    }

    std::vector<double> w2(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w2[static_cast<size_t>(i)] = basis.w[static_cast<size_t>(i)] * basis.w[static_cast<size_t>(i)];
    const double norm = trapezoid(w2, basis.dx);
    if (!(norm > 0.0)) throw numerical_error("Wannier normalization integral vanished");
    const double scale = 1.0 / std::sqrt(norm);
    for (double& v : basis.w) v *= scale;

    double peak = 0.0;
    for (double v : basis.w) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(basis.w.front()), std::abs(basis.w.back()));
    if (edge > 1e-6 * peak)
        throw numerical_error("Wannier grid too short to contain tails: boundary/peak = " +
                              format_g12(edge / peak) + " at V0 = " + format_g12(basis.depth_V0) +
                              " E_R (increase periods)");

    basis.W0.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) basis.W0[static_cast<size_t>(i)] = basis.w[static_cast<size_t>(i)] * basis.w[static_cast<size_t>(i)];

    // W1(x) = w(x - 1/2) w(x + 1/2); a half period is an exact index shift.
    const int h = points_per_period / 2;
    basis.W1.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const int ip = i + h, im = i - h;
        if (ip < n && im >= 0)
            basis.W1[static_cast<size_t>(i)] =
                basis.w[static_cast<size_t>(im)] * basis.w[static_cast<size_t>(ip)];
    }

    basis.kgrid = linspace(-4.0 * pi, 4.0 * pi, k_points);
    basis.k0 = basis.kgrid.front();
    basis.dk = basis.kgrid[1] - basis.kgrid[0];
    basis.ftW0.resize(basis.kgrid.size());
    basis.ftW1.resize(basis.kgrid.size());
    for (size_t j = 0; j < basis.kgrid.size(); ++j) {
        basis.ftW0[j] = detail::cosine_transform(basis.grid, basis.W0, basis.dx, basis.kgrid[j]);
        basis.ftW1[j] = detail::cosine_transform(basis.grid, basis.W1, basis.dx, basis.kgrid[j]);
    }
    return basis;
}

/// F[W0](k) or F[W1](k), cubic-interpolated from the stored table. Real by
/// parity of the overlaps. |k| must lie inside the tabulated range.
inline double fourier_overlap(const WannierBasis& basis, Overlap which, double k) {
    if (std::abs(k) > 4.0 * pi + 1e-12)
        throw config_error("fourier_overlap: |k| = " + format_g12(std::abs(k)) +
                           " outside tabulated range 4\xcf\x80/d");
    const auto& tab = (which == Overlap::W0) ? basis.ftW0 : basis.ftW1;
    return cubic_interp(basis.k0, basis.dk, tab, k);
}

/// Band structure from full diagonalization at the zone center and edge;
/// used for bandwidth and tight-binding comparisons.
inline double bandwidth(const LatticePotential& pot, int cutoff = 21) {
    return bloch_band_energy(pot.depth_V0, pi, cutoff) - bloch_band_energy(pot.depth_V0, 0.0, cutoff);
}

}  // namespace latscat::wannier
