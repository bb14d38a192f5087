#pragma once

// Run orchestration: maps a validated RunConfig onto the physics modules and
// writes the declared artifacts. Column layouts are documented in '#' header
// lines inside each file; all floats carry 12 significant digits.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "config.hpp"
#include "ed1d.hpp"
#include "gutzwiller.hpp"
#include "io.hpp"
#include "observables.hpp"
#include "optics.hpp"
#include "phasemap.hpp"
#include "wannier.hpp"

namespace latscat::runner {

using config::RunConfig;

namespace detail {

/// CSV row builder with the project-wide float format.
struct Csv {
    std::string text;
    void comment(const std::string& s) { text += "# " + s + "\n"; }
    void header(const std::string& s) { text += s + "\n"; }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i)
            text += (i ? "," : "") + format_g12(vals[i]);
        text += "\n";
    }
};

inline nlohmann::ordered_json json_complex_list(const std::vector<cd>& v) {
    auto arr = nlohmann::ordered_json::array();
    for (const cd& z : v)
        arr.push_back({io::round12(z.real()), io::round12(z.imag())});
    return arr;
}

/// Derives the companion spectral-table name: wannier.csv -> wannier_ft.csv.
inline std::string ft_name(const std::string& name) {
    const size_t dot = name.rfind('.');
    if (dot == std::string::npos) return name + "_ft";
    return name.substr(0, dot) + "_ft" + name.substr(dot);
}

inline wannier::WannierBasis basis_at(double depth) {
    return wannier::build_wannier(wannier::solve_bloch_band(wannier::LatticePotential{depth}));
}

inline gutzwiller::GutzwillerState mf_state(double u_over_zj, double mu_over_zj, int nmax) {
    gutzwiller::BoseHubbardParams p;
    p.hopping_J = 1.0;
    p.z = 2;
    p.interaction_U = u_over_zj * p.z * p.hopping_J;
    p.mu = mu_over_zj * p.z * p.hopping_J;
    p.n_max = nmax;
    return gutzwiller::solve_gutzwiller(p);
}

}  // namespace detail

inline void run_wannier(const RunConfig& c, io::RunWriter& w) {
    const auto basis = detail::basis_at(c.wannier.depth);
    detail::Csv spatial;
    spatial.comment("lowest-band Wannier orbital at lattice depth " +
                    format_g12(c.wannier.depth) + " E_R");
    spatial.comment("x in lattice periods; W0(x) = w(x)^2, W1(x) = w(x-1/2) w(x+1/2)");
    spatial.header("x,w,W0,W1");
    for (size_t i = 0; i < basis.grid.size(); ++i)
        spatial.row({basis.grid[i], basis.w[i], basis.W0[i], basis.W1[i]});
    w.emit(c.wannier.dump, spatial.text);

    detail::Csv spectral;
    spectral.comment("Fourier transforms of the density and bond overlaps");
    spectral.comment("k in rad per lattice period (pi corresponds to the lattice wavevector)");
    spectral.header("k,ftW0,ftW1");
    for (size_t i = 0; i < basis.kgrid.size(); ++i)
        spectral.row({basis.kgrid[i], basis.ftW0[i], basis.ftW1[i]});
    w.emit(detail::ft_name(c.wannier.dump), spectral.text);
}

inline void run_coupling(const RunConfig& c, io::RunWriter& w) {
    const auto basis = detail::basis_at(c.coupling.depth);
    optics::LightMode probe, detected;
    probe.kind = detected.kind = optics::ModeKind::standing;
    probe.label = 0;
    detected.label = 1;
    if (c.coupling.geometry == "custom") {
        probe.k = {pi * c.coupling.k0x, 0.0, 0.0};
        detected.k = {pi * c.coupling.k1x, 0.0, 0.0};
        probe.phase = c.coupling.phi0;
        detected.phase = c.coupling.phi1;
    } else {
        // max/min presets sit in the diffraction maximum k0x = k1x = pi/d;
        // "min" additionally picks the phases that null the density signal.
        probe.k = detected.k = {pi, 0.0, 0.0};
        if (c.coupling.geometry == "min") {
            const double s = optics::density_suppression_phase(basis);
            probe.phase = s;
            detected.phase = -s;
        }
    }
    const int K = c.coupling.sites;
    const auto coeff = optics::coupling_coefficients(basis, probe, detected, K, K);

    nlohmann::ordered_json j;
    j["depth"] = io::round12(c.coupling.depth);
    j["geometry"] = c.coupling.geometry;
    j["k0x_over_pi"] = io::round12(probe.k.x() / pi);
    j["k1x_over_pi"] = io::round12(detected.k.x() / pi);
    j["phi0"] = io::round12(probe.phase);
    j["phi1"] = io::round12(detected.phase);
    auto sites = nlohmann::ordered_json::array();
    for (int i = 0; i < K; ++i) sites.push_back(coeff.window_start + i);
    j["sites"] = sites;
    j["density"] = detail::json_complex_list(coeff.density);
    j["bond"] = detail::json_complex_list(coeff.bond);
    j["dropped_next_nearest"] = io::round12(coeff.dropped_next_nearest);
    w.emit(c.coupling.dump, j.dump(2) + "\n");
}

inline void run_mf(const RunConfig& c, io::RunWriter& w) {
    const std::vector<double> us = c.mf.scan_u.empty()
                                       ? std::vector<double>{c.mf.u}
                                       : config::detail::parse_range(c.mf.scan_u, "scan_u");
    const std::vector<double> mus = c.mf.scan_mu.empty()
                                        ? std::vector<double>{c.mf.mu}
                                        : config::detail::parse_range(c.mf.scan_mu, "scan_mu");
    detail::Csv out;
    out.comment("Gutzwiller mean field; u = U/zJ, mu in units of zJ");
    out.comment("intensity_min_over_Ctilde = (<b^2>-Phi^2)^2 + (n-Phi^2)(1+n-Phi^2)");
    out.header("u,mu,phi,n,b2,var_x0,var_xpi2,intensity_min_over_Ctilde");
    for (double u : us)
        for (double mu : mus) {
            const auto st = detail::mf_state(u, mu, c.mf.nmax);
            const double db = st.b2 - st.phi * st.phi;
            const double dn = st.density - st.phi * st.phi;
            out.row({u, mu, st.phi, st.density, st.b2,
                     gutzwiller::matter_quadrature_variance(st, 0.0),
                     gutzwiller::matter_quadrature_variance(st, 0.5 * pi),
                     db * db + dn * (1.0 + dn)});
        }
    w.emit(c.mf.out, out.text);
}

inline void run_ed(const RunConfig& c, io::RunWriter& w) {
    const auto spec = config::detail::chain_from(c);
    const auto st = ed1d::ground_state(spec);
    const auto corr = ed1d::correlations(st);
    const int M = spec.sites_M;

    nlohmann::ordered_json j;
    j["sites"] = M;
    j["bosons"] = spec.bosons_N;
    j["u_over_2j"] = io::round12(c.ed.u);
    j["v_over_2j"] = io::round12(c.ed.v);
    j["boundary"] = (spec.boundary == ed1d::Boundary::open) ? "open" : "periodic";
    j["cap"] = st.basis.cap;
    j["energy"] = io::round12(st.energy);
    j["gap"] = io::round12(st.gap);
    j["degenerate"] = st.degenerate;
    auto dens = nlohmann::ordered_json::array();
    for (int i = 0; i < M; ++i) dens.push_back(io::round12(corr.density(i)));
    j["density"] = dens;
    auto dd = nlohmann::ordered_json::array();
    auto sp = nlohmann::ordered_json::array();
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k) {
            dd.push_back(io::round12(corr.dd(i, k)));
            sp.push_back(io::round12(corr.sp(i, k)));
        }
    j["dd"] = dd;  // row-major M x M
    j["sp"] = sp;
    w.emit(c.ed.out, j.dump(2) + "\n");
}

namespace detail {

/// Nearest-peak test: true if theta sits within half a grid step of any
/// listed peak angle.
inline int near_peak(double theta, const std::vector<double>& peaks, double half_step) {
    for (double p : peaks)
        if (std::abs(theta - p) <= half_step) return 1;
    return 0;
}

}  // namespace detail

inline void run_scan(const RunConfig& c, io::RunWriter& w) {
    const double kmag = c.scan.kin * pi;
    const double t_lo = -0.5 * pi, t_hi = 0.5 * pi;
    const int n = c.scan.points;
    const double half_step = 0.5 * (t_hi - t_lo) / (n - 1);

    optics::LightMode probe;
    probe.kind = (c.scan.geometry == "density") ? optics::ModeKind::travelling
                                                : optics::ModeKind::standing;
    probe.k = {kmag * std::sin(c.scan.theta0), 0.0, kmag * std::cos(c.scan.theta0)};
    const auto peaks = optics::bragg_peaks(probe);
    const auto& gen_peaks = (c.scan.geometry == "density") ? peaks.travelling_pairs
                                                           : peaks.standing_detection;

    std::vector<double> theta(n), R(n);
    for (int i = 0; i < n; ++i) theta[i] = t_lo + (t_hi - t_lo) * i / (n - 1);

    bool summarized = false;
    observables::ScanSummary summary{};
    if (c.scan.source == "ed") {
        const auto spec = config::detail::chain_from(c);
        const auto st = ed1d::ground_state(spec, false);
        const auto corr = ed1d::correlations(st);
        if (c.scan.geometry == "density") {
            const auto scan =
                observables::theta_scan(corr.dd, c.scan.theta0, kmag, t_lo, t_hi, n);
            theta = scan.x;
            R = scan.R;
            summary = observables::extract_summary(scan, c.scan.mask);
            summarized = true;
        } else {
            // standing-wave geometry: the full window operator (density +
            // bond channels) is evaluated against the exact ground state at
            // every detection angle.
            const auto basis = detail::basis_at(c.scan.depth);
            const int M = spec.sites_M;
            double phi0 = 0.0, phi1 = 0.0;
            if (c.scan.geometry == "min") {
                const double s = optics::density_suppression_phase(basis);
                phi0 = s;
                phi1 = -s;
            }
            const double k0x = kmag * std::sin(c.scan.theta0);
            for (int i = 0; i < n; ++i) {
                const double k1x = kmag * std::sin(theta[i]);
                const auto coeff = optics::closed_form_DB(basis, k0x, k1x, phi0, phi1, M, M);
                std::vector<cd> density(coeff.density.begin(), coeff.density.end());
                std::vector<cd> bond(coeff.bond.begin(), coeff.bond.end());
                const auto f = ed1d::expectation_F(st, coeff.window_start, density, bond);
                R[i] = f.mean_FdagF - std::norm(f.mean_F);
            }
        }
    } else {
        // mean-field source: site-uncorrelated density channel, on-site
        // number variance sigma^2 from the Gutzwiller state.
        const auto st = detail::mf_state(c.mf.u, c.mf.mu, c.mf.nmax);
        const double sigma2 = st.nn - st.density * st.density;
        const auto basis = detail::basis_at(c.scan.depth);
        const int K = c.ed.sites;
        const double k0x = kmag * std::sin(c.scan.theta0);
        double phi0 = 0.0, phi1 = 0.0;
        if (c.scan.geometry == "min") {
            const double s = optics::density_suppression_phase(basis);
            phi0 = s;
            phi1 = -s;
        }
        for (int i = 0; i < n; ++i) {
            const double k1x = kmag * std::sin(theta[i]);
            if (c.scan.geometry == "density") {
                const double f0 = fourier_overlap(basis, wannier::Overlap::W0, k1x - k0x);
                R[i] = sigma2 * K * f0 * f0;
            } else {
                const auto coeff = optics::closed_form_DB(basis, k0x, k1x, phi0, phi1, K, K);
                double acc = 0.0;
                for (double d : coeff.density) acc += d * d;
                R[i] = sigma2 * acc;
            }
        }
    }

    detail::Csv out;
    out.comment("angular scan of the quantum addition R over the detection angle theta1");
    out.comment("source = " + c.scan.source + ", geometry = " + c.scan.geometry +
                ", theta0 = " + format_g12(c.scan.theta0) + ", |k| = " + format_g12(c.scan.kin) +
                " pi/d");
    if (summarized) {
        out.comment("R_max = " + format_g12(summary.R_max));
        out.comment("R_min = " + format_g12(summary.R_min));
        out.comment("W_R = " + format_g12(summary.W_R));
        out.comment("center = " + format_g12(summary.center));
    }
    out.header("theta1,R,is_bragg_generalized,is_bragg_classical");
    for (int i = 0; i < n; ++i) {
        out.text += format_g12(theta[i]) + "," + format_g12(R[i]) + "," +
                    std::to_string(detail::near_peak(theta[i], gen_peaks, half_step)) + "," +
                    std::to_string(detail::near_peak(theta[i], peaks.classical, half_step)) + "\n";
    }
    w.emit(c.scan.out, out.text);
}

inline void run_map3d(const RunConfig& c, io::RunWriter& w) {
    const auto st = detail::mf_state(c.map3d.u, c.map3d.mu, 12);
    const double sigma2 = st.nn - st.density * st.density;
    const auto d = config::detail::parse_dims(c.map3d.dims, "map3d dims", 3);
    const Eigen::Vector3i dims(d[0], d[1], d[2]);
    const double kmag = c.map3d.kin * pi;

    optics::LightMode probe;
    probe.kind = optics::ModeKind::travelling;
    probe.k = {0.0, 0.0, kmag};
    optics::LightMode det;
    det.kind = optics::ModeKind::standing;
    det.k = {kmag, 0.0, 0.0};
    det.phase = c.map3d.phi1;
    det.label = 1;

    const auto map = observables::mf_angular_map_3d(sigma2, probe, det, dims, c.map3d.ntheta,
                                                    c.map3d.nphi);
    const double nk = map.sites_K * st.density;
    detail::Csv out;
    out.comment("scattered signal over the detection sphere, normalized to the");
    out.comment("illuminated atom number N_K = K n = " + format_g12(nk));
    out.comment("probe travelling along z, detected standing wave, |k| = " +
                format_g12(c.map3d.kin) + " pi/d, phi1 = " + format_g12(c.map3d.phi1));
    out.comment("sigma2 = " + format_g12(sigma2) + ", n = " + format_g12(st.density) +
                ", K = " + std::to_string(map.sites_K));
    out.header("theta,phi,R_over_NK");
    for (const auto& s : map.samples) out.row({s.theta, s.phi, s.value / nk});
    w.emit(c.map3d.out, out.text);
}

inline phasemap::PhaseGrid phasediagram_grid(const RunConfig& c) {
    const auto g = config::detail::parse_dims(c.phasediagram.grid, "phasediagram grid", 2);
    ed1d::ChainSpec chain;
    chain.sites_M = c.phasediagram.sites;
    chain.bosons_N =
        (c.phasediagram.bosons == -2) ? c.phasediagram.sites : c.phasediagram.bosons;
    chain.hopping_J = 1.0;
    const bool disorder = c.phasediagram.mode == "disorder";
    chain.boundary = (c.phasediagram.boundary == "open" ||
                      (c.phasediagram.boundary.empty() && disorder))
                         ? ed1d::Boundary::open
                         : ed1d::Boundary::periodic;
    phasemap::SweepOptions opts;
    opts.jobs = c.jobs;
    opts.scan_points = c.phasediagram.points;
    opts.mask_halfwidth = c.phasediagram.mask;
    if (disorder) {
        const phasemap::AxisSpec u{"U/2J", c.phasediagram.u0, c.phasediagram.u1, g[0]};
        const phasemap::AxisSpec v{"V/2J", c.phasediagram.v0, c.phasediagram.v1, g[1]};
        return phasemap::sweep_disorder(chain, u, v, c.phasediagram.ratio, opts);
    }
    const phasemap::AxisSpec u{"U/2J", c.phasediagram.u0, c.phasediagram.u1, g[0]};
    const phasemap::AxisSpec mu{"mu/2J", c.phasediagram.mu0, c.phasediagram.mu1, g[1]};
    return phasemap::sweep_mu_u(chain, u, mu, opts);
}

inline void run_rate(const RunConfig& c, io::RunWriter& w) {
    const auto r = observables::photon_rate(2.0 * pi * c.rate.omega0, 2.0 * pi * c.rate.delta_a,
                                            2.0 * pi * c.rate.gamma, c.rate.sites, c.rate.sigma2);
    detail::Csv out;
    out.comment("scattered photon rate (Omega0/Delta_a)^2 Gamma K/8 sigma^2; inputs in Hz");
    if (r.warning) out.comment("warning: " + *r.warning);
    out.header("omega0_hz,delta_a_hz,gamma_hz,sites,sigma2,rate_per_s");
    out.row({c.rate.omega0, c.rate.delta_a, c.rate.gamma, static_cast<double>(c.rate.sites),
             c.rate.sigma2, r.rate});
    w.emit(c.rate.out, out.text);
}

namespace detail {

/// Reads a phasediagram CSV back and re-emits two per-panel files (value maps
/// over the grid axes). Comment and header lines are checked so stale or
/// foreign files are rejected instead of silently reshaped.
inline void passthrough_grid(const std::string& csv, const std::string& prefix,
                             io::RunWriter& w) {
    std::istringstream in(csv);
    std::string line;
    bool recognized = false;
    std::vector<std::array<double, 4>> rows;  // axis1, axis2, Rmax, W_R
    while (std::getline(in, line)) {
        if (line.rfind("# phase grid", 0) == 0) recognized = true;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("axis1,axis2,", 0) == 0) continue;
        std::array<double, 4> r{};
        size_t pos = 0;
        for (int k = 0; k < 4; ++k) {
            size_t comma = line.find(',', pos);
            const std::string f = line.substr(pos, comma - pos);
            r[static_cast<size_t>(k)] = std::strtod(f.c_str(), nullptr);
            if (comma == std::string::npos && k < 3)
                throw config_error("unrecognized grid row: " + line);
            pos = comma + 1;
        }
        rows.push_back(r);
    }
    if (!recognized || rows.empty())
        throw config_error("missing upstream artifact: not a phase-grid CSV");
    Csv a, b;
    a.comment("scattering-peak height R_max over the sweep grid");
    a.header("axis1,axis2,Rmax");
    b.comment("scattering-dip width W_R over the sweep grid");
    b.header("axis1,axis2,W_R");
    for (const auto& r : rows) {
        a.row({r[0], r[1], r[2]});
        b.row({r[0], r[1], r[3]});
    }
    w.emit(prefix + "a.csv", a.text);
    w.emit(prefix + "b.csv", b.text);
}

}  // namespace detail

inline void run_figure(const RunConfig& c, io::RunWriter& w) {
    const std::string& tag = c.figure.tag;
    if (tag == "fig3") {
        const auto basis = detail::basis_at(c.figure.depth);
        detail::Csv a;
        a.comment("panel a: Wannier orbital and overlaps vs position (lattice periods)");
        a.header("x,w,W0,W1");
        for (size_t i = 0; i < basis.grid.size(); ++i)
            a.row({basis.grid[i], basis.w[i], basis.W0[i], basis.W1[i]});
        w.emit("fig3a.csv", a.text);

        detail::Csv b;
        b.comment("panel b: Fourier transforms vs k (rad per lattice period)");
        b.header("k,ftW0,ftW1");
        for (size_t i = 0; i < basis.kgrid.size(); ++i)
            b.row({basis.kgrid[i], basis.ftW0[i], basis.ftW1[i]});
        w.emit("fig3b.csv", b.text);

        // panel c: detected-wave phase scan at the diffraction maximum
        // (k0x = k1x = pi/d, phi0 = 0); both coefficients are site-uniform.
        const int K = 8;
        detail::Csv pc;
        pc.comment("panel c: site-uniform density (J_D) and bond (J_B) couplings vs the");
        pc.comment("detected standing-wave phase phi1, diffraction maximum, phi0 = 0");
        pc.header("phi1,J_D,J_B");
        for (double phi : linspace(0.0, 2.0 * pi, c.figure.points)) {
            const auto coeff = optics::closed_form_DB(basis, pi, pi, 0.0, phi, K, K);
            pc.row({phi, coeff.density[0], coeff.bond[0]});
        }
        w.emit("fig3c.csv", pc.text);

        // panel d: joint phase scan phi0 = -phi1 = phi; the density coupling
        // crosses zero at the suppression phase while the bond term is flat.
        detail::Csv pd;
        pd.comment("panel d: couplings vs the joint phase phi0 = -phi1 = phi; the density");
        pd.comment("signal vanishes at phi = " +
                   format_g12(optics::density_suppression_phase(basis)));
        pd.header("phi,J_D,J_B");
        for (double phi : linspace(0.0, 0.5 * pi, c.figure.points)) {
            const auto coeff = optics::closed_form_DB(basis, pi, pi, phi, -phi, K, K);
            pd.row({phi, coeff.density[0], coeff.bond[0]});
        }
        w.emit("fig3d.csv", pd.text);
    } else if (tag == "quads") {
        // light observables across the superfluid-insulator transition at
        // unit density: the chemical potential tracks n = 1 at every u.
        detail::Csv out;
        out.comment("mean-field light observables at unit density vs u = U/zJ");
        out.comment("intensity_over_Ctilde = (<b^2>-Phi^2)^2 + (n-Phi^2)(1+n-Phi^2)");
        out.header("u,phi,intensity_over_Ctilde,var_x0,var_xpi2");
        // u starts slightly above zero: the U = 0 mean-field gas has no
        // stable unit-density state to pin the chemical potential against
        for (double u : linspace(0.2, 12.0, c.figure.points)) {
            gutzwiller::BoseHubbardParams p;
            p.hopping_J = 1.0;
            p.z = 2;
            p.interaction_U = 2.0 * u;
            p.mu = gutzwiller::find_mu_for_density(p, 1.0);
            const auto st = gutzwiller::solve_gutzwiller(p);
            const double db = st.b2 - st.phi * st.phi;
            const double dn = st.density - st.phi * st.phi;
            out.row({u, st.phi, db * db + dn * (1.0 + dn),
                     gutzwiller::matter_quadrature_variance(st, 0.0),
                     gutzwiller::matter_quadrature_variance(st, 0.5 * pi)});
        }
        w.emit("quads.csv", out.text);
    } else if (tag == "fig2") {
        // detection-sphere maps for two phases of the detected standing wave
        RunConfig c2 = c;
        c2.map3d.phi1 = 0.0;
        c2.map3d.out = "fig2a.csv";
        run_map3d(c2, w);
        c2.map3d.phi1 = 0.5 * pi;
        c2.map3d.out = "fig2b.csv";
        run_map3d(c2, w);
    } else {  // fig4 / fig5: reshaped views of an existing sweep grid
        if (c.figure.grid.empty())
            throw config_error("missing upstream artifact: " + tag +
                               " needs --grid <phasediagram csv>");
        detail::passthrough_grid(io::read_file(c.figure.grid), tag, w);
    }
}

/// Executes the configured module. All outputs land atomically and are listed
/// in manifest.json; on any failure the partial outputs are removed and the
/// exception propagates to the caller for exit-code mapping.
inline void run(const RunConfig& cfg) {
    config::validate_config(cfg);
    io::RunWriter w(cfg.out_dir);
    std::string caveat;
    try {
        if (cfg.module == "wannier") run_wannier(cfg, w);
        else if (cfg.module == "coupling") run_coupling(cfg, w);
        else if (cfg.module == "mf") run_mf(cfg, w);
        else if (cfg.module == "ed") run_ed(cfg, w);
        else if (cfg.module == "scan") run_scan(cfg, w);
        else if (cfg.module == "map3d") run_map3d(cfg, w);
        else if (cfg.module == "rate") run_rate(cfg, w);
        else if (cfg.module == "phasediagram") {
            const auto grid = phasediagram_grid(cfg);
            caveat = grid.caveat;
            w.emit(cfg.phasediagram.out, phasemap::to_csv(grid));
        } else if (cfg.module == "figure") {
            run_figure(cfg, w);
            if (cfg.figure.tag == "fig4" || cfg.figure.tag == "fig5")
                caveat = phasemap::PhaseGrid{}.caveat;
        }
        w.finalize(cfg.module, config::canonical_dump(cfg), cfg.seed, cfg.jobs, caveat);
    } catch (...) {
        w.discard();
        throw;
    }
}

}  // namespace latscat::runner
