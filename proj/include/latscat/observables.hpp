#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "latscat/common.hpp"
#include "latscat/ed1d.hpp"
#include "latscat/optics.hpp"

// Scattering observables built on density-density correlation tables: the
// fluctuation signal R ("quantum addition"), its angular scans and dip
// summaries, mean-field 3D angular maps, the small-k Luttinger-parameter
// estimator, and the photon-rate formula.

namespace latscat::observables {

namespace detail {

inline std::vector<double> default_positions(int M) {
    std::vector<double> pos(M);
    for (int i = 0; i < M; ++i) pos[i] = double(i);
    return pos;
}

inline void check_dd(const Eigen::MatrixXd& dd) {
    if (dd.rows() < 1 || dd.rows() != dd.cols())
        throw config_error("correlation table must be square and nonempty");
    if ((dd - dd.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw config_error("density correlation table must be symmetric");
}

}  // namespace detail

/// Fluctuation part of the scattered intensity at momentum transfer delta_k
/// (rad per lattice period): R = sum_ij exp[i delta_k (r_i - r_j)] dd_ij.
inline double quantum_addition(const Eigen::MatrixXd& dd, double delta_k,
                               std::vector<double> positions = {}) {
    detail::check_dd(dd);
    const int M = int(dd.rows());
    if (positions.empty()) positions = detail::default_positions(M);
    if (int(positions.size()) != M) throw config_error("positions must match the table size");
    cd sum = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            sum += std::exp(cd(0.0, delta_k * (positions[i] - positions[j]))) * dd(i, j);
    if (std::abs(sum.imag()) > 1e-10)
        throw numerical_error("fluctuation signal has imaginary residue " +
                              format_g12(sum.imag()));
    if (sum.real() < -1e-10)
        throw numerical_error("fluctuation signal came out negative: " + format_g12(sum.real()));
    return std::max(sum.real(), 0.0);
}

// One angular scan of R. `x` is either a momentum-transfer offset in rad per
// period or a detection angle theta1 in rad; `classical_center` marks where the
// classical diffraction condition is met (the dip location).
struct AngularScan {
    std::vector<double> x;
    std::vector<double> R;
    double classical_center = 0.0;
};

/// R sampled on a uniform delta_k*d grid (default one full dip, shoulders at
/// +-pi, 512 points per pi of scan).
inline AngularScan dk_scan(const Eigen::MatrixXd& dd, double x_min = -pi, double x_max = pi,
                           int n = 1025, std::vector<double> positions = {}) {
    detail::check_dd(dd);
    if (n < 5 || x_max <= x_min) throw config_error("bad scan grid");
    AngularScan s;
    s.x = linspace(x_min, x_max, n);
    s.R.resize(n);
    for (int k = 0; k < n; ++k) s.R[k] = quantum_addition(dd, s.x[k], positions);
    s.classical_center = 0.0;
    if (x_min > 0.0 || x_max < 0.0) throw config_error("scan must bracket the classical angle");
    return s;
}

/// R versus detection angle theta1 at fixed incidence theta0, in-plane
/// wavenumber magnitude kmag (rad per period): delta_k*d = kmag (sin theta1 - sin theta0).
inline AngularScan theta_scan(const Eigen::MatrixXd& dd, double theta0, double kmag,
                              double t_min = -0.5 * pi, double t_max = 0.5 * pi, int n = 1025,
                              std::vector<double> positions = {}) {
    detail::check_dd(dd);
    if (n < 5 || t_max <= t_min) throw config_error("bad scan grid");
    if (theta0 < t_min || theta0 > t_max)
        throw config_error("incidence angle must lie inside the scan so the dip is covered");
    AngularScan s;
    s.x = linspace(t_min, t_max, n);
    s.R.resize(n);
    for (int k = 0; k < n; ++k) {
        const double dk = kmag * (std::sin(s.x[k]) - std::sin(theta0));
        s.R[k] = quantum_addition(dd, dk, positions);
    }
    s.classical_center = theta0;
    return s;
}

struct ScanSummary {
    double R_max = 0.0;
    double R_min = 0.0;
    double W_R = 0.0;        // full width of the dip at (R_max + R_min)/2
    double center = 0.0;     // classical angle the dip sits on
    double center_offset = 0.0;  // scan argmin minus the classical angle
};

/// Dip summary of an angular scan. Points within mask_halfwidth of the
/// classical center can be excluded (hides a narrow classical peak sitting at
/// the dip bottom); the default 0 uses every point.
inline ScanSummary extract_summary(const AngularScan& scan, double mask_halfwidth = 0.0) {
    const int n = int(scan.x.size());
    if (n < 5 || scan.R.size() != scan.x.size()) throw config_error("scan too short");
    const double c = scan.classical_center;
    if (c < scan.x.front() || c > scan.x.back())
        throw config_error("classical angle lies outside the scan");

    auto masked = [&](int i) { return std::abs(scan.x[i] - c) < mask_halfwidth; };

    ScanSummary out;
    out.center = c;
    double rmax = -1e300, rmin = 1e300;
    int argmin = -1, icenter = -1;
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        if (masked(i)) continue;
        if (scan.R[i] > rmax) rmax = scan.R[i];
        if (scan.R[i] < rmin) rmin = scan.R[i], argmin = i;
        const double d = std::abs(scan.x[i] - c);
        if (d < best) best = d, icenter = i;
    }
    if (icenter < 0) throw config_error("mask swallowed the entire scan");
    out.R_max = rmax;
    out.R_min = rmin;
    out.center_offset = scan.x[argmin] - c;

    const double span = std::max(std::abs(rmax), 1.0);
    if (rmax - rmin < 1e-9 * span)
        throw numerical_error("no dip found: scan is flat within tolerance");
    const double h = 0.5 * (rmax + rmin);

    // walk outward from the dip center to the first half-height crossings
    auto crossing = [&](int step) -> double {
        int prev = icenter;
        for (int i = icenter + step; i >= 0 && i < n; i += step) {
            if (masked(i)) continue;
            if (scan.R[i] >= h) {
                const double x0 = scan.x[prev], x1 = scan.x[i];
                const double r0 = scan.R[prev], r1 = scan.R[i];
                return (r1 == r0) ? x1 : x0 + (h - r0) * (x1 - x0) / (r1 - r0);
            }
            prev = i;
        }
        throw numerical_error("no dip found: half-height never reached on one side of the scan");
    };
    if (scan.R[icenter] >= h)
        throw numerical_error("no dip found: scan minimum is not below half height at the center");
    const double left = crossing(-1), right = crossing(+1);
    out.W_R = right - left;
    return out;
}

// ---------------------------------------------------------------------------
// Mean-field 3D angular maps

/// Site-summed fluctuation signal sigma^2 sum_i |u1*(r_i) u0(r_i)|^2 of a
/// site-uncorrelated state with on-site variance sigma^2 on a dims lattice.
inline double mf_site_signal(double sigma2, const optics::LightMode& probe,
                             const optics::LightMode& detected, const Eigen::Vector3i& dims) {
    if (sigma2 < 0) throw config_error("on-site variance must be >= 0");
    if (dims.minCoeff() < 1) throw config_error("lattice dimensions must be positive");
    double sum = 0.0;
    for (int nx = 0; nx < dims(0); ++nx)
        for (int ny = 0; ny < dims(1); ++ny)
            for (int nz = 0; nz < dims(2); ++nz) {
                const Eigen::Vector3d r(nx, ny, nz);
                const cd A = std::conj(optics::mode_value(detected, r)) *
                             optics::mode_value(probe, r);
                sum += std::norm(A);
            }
    return sigma2 * sum;
}

/// Quadrature variant: sigma^2 sum_i Re(A_i e^{-i beta})^2; peaks on 2*dk = G.
inline double mf_site_quadrature(double sigma2, const optics::LightMode& probe,
                                 const optics::LightMode& detected, const Eigen::Vector3i& dims,
                                 double beta) {
    if (sigma2 < 0) throw config_error("on-site variance must be >= 0");
    if (dims.minCoeff() < 1) throw config_error("lattice dimensions must be positive");
    const cd eb = std::exp(cd(0.0, -beta));
    double sum = 0.0;
    for (int nx = 0; nx < dims(0); ++nx)
        for (int ny = 0; ny < dims(1); ++ny)
            for (int nz = 0; nz < dims(2); ++nz) {
                const Eigen::Vector3d r(nx, ny, nz);
                const cd A = std::conj(optics::mode_value(detected, r)) *
                             optics::mode_value(probe, r);
                const double re = (A * eb).real();
                sum += re * re;
            }
    return sigma2 * sum;
}

struct MapSample {
    double theta = 0.0;
    double phi = 0.0;
    double value = 0.0;
};

struct AngularMap {
    int n_theta = 0, n_phi = 0;
    std::vector<MapSample> samples;  // theta-major order
    double background = 0.0;         // K sigma^2 / 2 for standing detection
    int sites_K = 0;
};

/// R over the (theta, phi) detection sphere for a site-uncorrelated state.
/// The detected mode keeps the template's |k|, kind and phase; its direction
/// sweeps the sphere. theta in [0, pi], phi in [0, 2 pi).
inline AngularMap mf_angular_map_3d(double sigma2, const optics::LightMode& probe,
                                    const optics::LightMode& detected_template,
                                    const Eigen::Vector3i& dims, int n_theta = 65,
                                    int n_phi = 128) {
    if (n_theta < 2 || n_phi < 2) throw config_error("angular grid too coarse");
    const double kmag = detected_template.k.norm();
    if (kmag <= 0) throw config_error("detected mode needs a nonzero wavevector");
    AngularMap map;
    map.n_theta = n_theta;
    map.n_phi = n_phi;
    map.sites_K = dims.prod();
    map.background = (detected_template.kind == optics::ModeKind::standing)
                         ? 0.5 * map.sites_K * sigma2
                         : map.sites_K * sigma2;
    map.samples.reserve(size_t(n_theta) * n_phi);
    for (int it = 0; it < n_theta; ++it) {
        const double theta = pi * it / (n_theta - 1);
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * pi * ip / n_phi;
            optics::LightMode det = detected_template;
            det.k = kmag * Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                           std::sin(theta) * std::sin(phi), std::cos(theta));
            map.samples.push_back({theta, phi, mf_site_signal(sigma2, probe, det, dims)});
        }
    }
    return map;
}

// ---------------------------------------------------------------------------

/// Homodyne-detected light quadrature variance: 1/4 + |C|^2 (Delta X^F_beta)^2.
inline double light_quadrature_variance(double absC2, double matter_variance) {
    if (absC2 < 0) throw config_error("|C|^2 must be >= 0");
    if (matter_variance < -1e-12) throw config_error("matter quadrature variance must be >= 0");
    return 0.25 + absC2 * std::max(matter_variance, 0.0);
}

inline double light_quadrature_variance(double absC2, const ed1d::FExpectation& f) {
    return light_quadrature_variance(absC2, f.mean_XX - f.mean_X * f.mean_X);
}

struct LuttingerEstimate {
    double K_b = 0.0;
    double S_kmin = 0.0;   // structure factor at 2 pi / M
    double S_2kmin = 0.0;  // at 4 pi / M, used for the linearity check
    bool unreliable = false;
};

/// Small-k linear-slope estimator K_b = pi S(k_min)/k_min of the
/// Luttinger-liquid parameter, with S(k) = (1/M) sum_ij e^{ik(r_i-r_j)} dd_ij
/// and k_min = 2 pi / M. Flags unreliable when S is negative, non-monotone, or
/// visibly nonlinear between k_min and 2 k_min (estimator outside its regime).
inline LuttingerEstimate luttinger_parameter(const Eigen::MatrixXd& dd,
                                             std::vector<double> positions = {}) {
    detail::check_dd(dd);
    const int M = int(dd.rows());
    if (M < 3) throw config_error("need at least 3 sites for the small-k estimator");
    const double k_min = 2.0 * pi / M;
    LuttingerEstimate est;
    est.S_kmin = quantum_addition(dd, k_min, positions) / M;
    est.S_2kmin = quantum_addition(dd, 2.0 * k_min, positions) / M;
    est.K_b = pi * est.S_kmin / k_min;
    est.unreliable = est.S_kmin <= 0.0 || est.S_2kmin < est.S_kmin ||
                     std::abs(est.S_2kmin - 2.0 * est.S_kmin) > 0.3 * 2.0 * est.S_kmin;
    return est;
}

/// Distance-averaged exponential fit of |sp| giving a phase-correlation length
/// in sites; very weak decay returns +infinity.
inline double correlation_length(const Eigen::MatrixXd& sp, int d_max = 3) {
    if (sp.rows() != sp.cols() || sp.rows() < d_max + 1)
        throw config_error("correlation table too small for the requested fit range");
    const int M = int(sp.rows());
    std::vector<double> logc;
    for (int d = 1; d <= d_max; ++d) {
        double acc = 0.0;
        int cnt = 0;
        for (int i = 0; i + d < M; ++i) acc += std::abs(sp(i, i + d)), ++cnt;
        const double c = acc / cnt;
        if (c <= 0.0) return 0.0;
        logc.push_back(std::log(c));
    }
    // least-squares slope of log c(d) vs d
    const int m = int(logc.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int d = 1; d <= m; ++d) {
        sx += d;
        sy += logc[d - 1];
        sxx += double(d) * d;
        sxy += d * logc[d - 1];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (slope >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / slope;
}

struct PhotonRate {
    double rate = 0.0;  // photons per second
    std::optional<std::string> warning;
};

/// Scattered photon rate n_Phi = (Omega0/Delta_a)^2 Gamma K/8 * sigma^2.
/// Warns when |Delta_a| <= 10 Gamma (off-resonant approximation marginal).
inline PhotonRate photon_rate(double Omega0, double Delta_a, double Gamma, int sites_K,
                              double sigma2) {
    if (Delta_a == 0.0) throw config_error("atomic detuning must be nonzero");
    if (Gamma <= 0.0) throw config_error("linewidth must be positive");
    if (sites_K < 1) throw config_error("need at least one illuminated site");
    if (sigma2 < 0.0) throw config_error("on-site variance must be >= 0");
    PhotonRate out;
    const double ratio = Omega0 / Delta_a;
    out.rate = ratio * ratio * Gamma * sites_K / 8.0 * sigma2;
    if (std::abs(Delta_a) <= 10.0 * Gamma)
        out.warning = "detuning within 10 linewidths: off-resonant scattering formula is marginal";
    return out;
}

}  // namespace latscat::observables
