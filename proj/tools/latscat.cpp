// latscat: lattice-gas light-scattering toolkit.
//
// Every subcommand reads its defaults from an optional INI config file
// (--config), then applies command-line flags on top, validates, and writes
// its artifacts plus a manifest.json into --out-dir. Exit codes: 0 success,
// 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "latscat/config.hpp"
#include "latscat/io.hpp"
#include "latscat/runner.hpp"

namespace {

using latscat::config::RunConfig;

// The config file must be loaded before CLI11 writes flag values into the
// same fields, so --config is pulled out of argv by hand first.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

void add_chain_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--sites", cfg.ed.sites, "chain length M");
    cmd->add_option("--bosons", cfg.ed.bosons, "particle number N (default: M)");
    cmd->add_option("--u", cfg.ed.u, "interaction U/2J");
    cmd->add_option("--v", cfg.ed.v, "quasiperiodic field strength V/2J");
    cmd->add_option("--ratio", cfg.ed.ratio, "quasiperiodic wavelength ratio r");
    cmd->add_option("--boundary", cfg.ed.boundary, "open | periodic");
    cmd->add_option("--cap", cfg.ed.cap, "per-site occupation cap (-1: automatic)");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        const std::string cpath = find_config_path(argc, argv);
        if (!cpath.empty())
            cfg = latscat::config::parse_config(latscat::io::read_file(cpath));
    } catch (const latscat::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    CLI::App app{"light scattering from lattice bosons: ground states, coupling "
                 "coefficients and angular scattering maps"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global flags remain valid after the subcommand name
    std::string config_path;
    app.add_option("--config", config_path, "INI config file providing defaults");
    app.add_option("--seed", cfg.seed, "RNG seed recorded in the manifest");
    app.add_option("--jobs", cfg.jobs, "worker threads for sweeps (0: hardware)");
    app.add_option("--out-dir", cfg.out_dir, "output directory");

    auto* wann = app.add_subcommand("wannier", "lowest-band Wannier orbital and overlap tables");
    wann->add_option("--depth", cfg.wannier.depth, "lattice depth V0 in recoil energies");
    wann->add_option("--dump", cfg.wannier.dump, "output CSV name");

    auto* coup = app.add_subcommand("coupling", "light-matter coupling coefficients");
    coup->add_option("--depth", cfg.coupling.depth, "lattice depth V0 in recoil energies");
    coup->add_option("--geometry", cfg.coupling.geometry, "max | min | custom");
    coup->add_option("--k0x", cfg.coupling.k0x, "probe k_x in units of pi/d (custom)");
    coup->add_option("--k1x", cfg.coupling.k1x, "detected k_x in units of pi/d (custom)");
    coup->add_option("--phi0", cfg.coupling.phi0, "probe phase (custom)");
    coup->add_option("--phi1", cfg.coupling.phi1, "detected phase (custom)");
    coup->add_option("--sites", cfg.coupling.sites, "illuminated sites K");
    coup->add_option("--dump", cfg.coupling.dump, "output JSON name");

    auto* mf = app.add_subcommand("mf", "Gutzwiller mean-field state and light observables");
    mf->add_option("--u", cfg.mf.u, "interaction U/zJ");
    mf->add_option("--mu", cfg.mf.mu, "chemical potential mu/zJ");
    mf->add_option("--scan-u", cfg.mf.scan_u, "sweep a:b:n over u");
    mf->add_option("--scan-mu", cfg.mf.scan_mu, "sweep a:b:n over mu");
    mf->add_option("--nmax", cfg.mf.nmax, "Fock cutoff");
    mf->add_option("--out", cfg.mf.out, "output CSV name");

    auto* ed = app.add_subcommand("ed", "exact 1D ground state and correlations");
    add_chain_flags(ed, cfg);
    ed->add_option("--out", cfg.ed.out, "output JSON name");

    auto* scan = app.add_subcommand("scan", "angular scan of the scattered signal");
    scan->add_option("--source", cfg.scan.source, "ed | mf");
    scan->add_option("--geometry", cfg.scan.geometry, "density | min | max");
    scan->add_option("--theta0", cfg.scan.theta0, "incoming angle in radians");
    scan->add_option("--kin", cfg.scan.kin, "|k| in units of pi/d");
    scan->add_option("--depth", cfg.scan.depth, "lattice depth for coupling tables");
    scan->add_option("--points", cfg.scan.points, "scan resolution");
    scan->add_option("--mask", cfg.scan.mask, "halfwidth excluded around the center");
    scan->add_option("--out", cfg.scan.out, "output CSV name");
    add_chain_flags(scan, cfg);
    scan->add_option("--mf-u", cfg.mf.u, "U/zJ for --source mf");
    scan->add_option("--mf-mu", cfg.mf.mu, "mu/zJ for --source mf");

    auto* map = app.add_subcommand("map3d", "scattered signal over the detection sphere");
    map->add_option("--u", cfg.map3d.u, "mean-field interaction U/zJ");
    map->add_option("--mu", cfg.map3d.mu, "chemical potential mu/zJ");
    map->add_option("--dims", cfg.map3d.dims, "lattice size NxNyNz");
    map->add_option("--ntheta", cfg.map3d.ntheta, "polar samples");
    map->add_option("--nphi", cfg.map3d.nphi, "azimuthal samples");
    map->add_option("--kin", cfg.map3d.kin, "|k| in units of pi/d");
    map->add_option("--phi1", cfg.map3d.phi1, "detected standing-wave phase");
    map->add_option("--out", cfg.map3d.out, "output CSV name");

    auto* pd = app.add_subcommand("phasediagram", "R-based phase classification sweep");
    pd->add_option("--mode", cfg.phasediagram.mode, "mu-u | disorder");
    pd->add_option("--grid", cfg.phasediagram.grid, "grid size AxB");
    pd->add_option("--sites", cfg.phasediagram.sites, "chain length M");
    pd->add_option("--bosons", cfg.phasediagram.bosons, "particle number N (default: M)");
    pd->add_option("--boundary", cfg.phasediagram.boundary, "open | periodic");
    pd->add_option("--u0", cfg.phasediagram.u0, "axis1 start (U/2J)");
    pd->add_option("--u1", cfg.phasediagram.u1, "axis1 stop");
    pd->add_option("--mu0", cfg.phasediagram.mu0, "axis2 start for mu-u (mu/2J)");
    pd->add_option("--mu1", cfg.phasediagram.mu1, "axis2 stop for mu-u");
    pd->add_option("--v0", cfg.phasediagram.v0, "axis2 start for disorder (V/2J)");
    pd->add_option("--v1", cfg.phasediagram.v1, "axis2 stop for disorder");
    pd->add_option("--ratio", cfg.phasediagram.ratio, "quasiperiodic wavelength ratio");
    pd->add_option("--points", cfg.phasediagram.points, "angular scan resolution per cell");
    pd->add_option("--mask", cfg.phasediagram.mask, "scan mask halfwidth");
    pd->add_option("--out", cfg.phasediagram.out, "output CSV name");

    auto* rate = app.add_subcommand("rate", "absolute scattered photon rate");
    rate->add_option("--omega0", cfg.rate.omega0, "Rabi frequency in Hz");
    rate->add_option("--delta-a", cfg.rate.delta_a, "atomic detuning in Hz");
    rate->add_option("--gamma", cfg.rate.gamma, "linewidth in Hz");
    rate->add_option("--sites", cfg.rate.sites, "illuminated sites K");
    rate->add_option("--sigma2", cfg.rate.sigma2, "on-site number variance");
    rate->add_option("--out", cfg.rate.out, "output CSV name");

    auto* fig = app.add_subcommand("figure", "plot-ready CSV bundles");
    fig->add_option("--tag", cfg.figure.tag, "fig2 | fig3 | fig4 | fig5 | quads");
    fig->add_option("--depth", cfg.figure.depth, "lattice depth V0 in recoil energies");
    fig->add_option("--grid", cfg.figure.grid, "upstream phasediagram CSV (fig4/fig5)");
    fig->add_option("--points", cfg.figure.points, "sweep resolution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto* sub : {wann, coup, mf, ed, scan, map, pd, rate, fig})
        if (sub->parsed()) cfg.module = sub->get_name();
    if (cfg.module.empty()) {
        std::fprintf(stderr, "config error: no subcommand given and no module in the config "
                             "file\n%s", app.help().c_str());
        return 2;
    }

    try {
        latscat::runner::run(cfg);
        return 0;
    } catch (const latscat::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
