#pragma once

// Declarative run configuration for the command-line tool: an INI-style file
// (key = value under [section] headers) mirrors the subcommand flags, so a run
// is reproducible from a single text file. Parsing reports the first error
// with its line number; validation checks every module precondition before
// any computation starts.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "common.hpp"
#include "ed1d.hpp"

namespace latscat::config {

struct RunConfig {
    std::string module;  // wannier, coupling, mf, ed, scan, map3d, phasediagram, rate, figure
    std::uint64_t seed = 1;
    int jobs = 1;  // 0 picks hardware concurrency
    std::string out_dir = ".";

    struct {
        double depth = 5.0;  // V0 in E_R
        std::string dump = "wannier.csv";
    } wannier;

    struct {
        double depth = 5.0;
        std::string geometry = "min";  // max | min | custom
        double k0x = 1.0, k1x = 1.0;   // pi/d units (custom geometry only)
        double phi0 = 0.0, phi1 = 0.0;
        int sites = 8;
        std::string dump = "coeffs.json";
    } coupling;

    struct {
        double u = 3.0;  // U / zJ
        double mu = 1.0;  // mu / zJ
        std::string scan_u, scan_mu;  // "a:b:n" sweeps; empty = single point
        int nmax = 12;
        std::string out = "mf.csv";
    } mf;

    struct {
        int sites = 8;
        int bosons = -2;  // -2: match sites
        double u = 3.0;   // U / 2J
        double v = 0.0;   // V / 2J (quasiperiodic field strength)
        double ratio = 0.77;
        std::string boundary = "periodic";
        int cap = -1;         // per-site occupation cap; -1 picks the default policy
        std::string out = "state.json";
    } ed;

    struct {
        std::string source = "ed";        // ed | mf
        std::string geometry = "density";  // density | min | max
        double theta0 = 0.0;               // incoming angle, rad
        double kin = 1.0;                  // |k| in pi/d units
        double depth = 5.0;                // lattice depth for the coupling tables
        int points = 1025;
        double mask = 0.0;  // halfwidth around the classical center excluded from the summary
        std::string out = "scan.csv";
    } scan;

    struct {
        double u = 0.25;    // U / zJ of the mean-field state
        double mu = -0.77;  // mu / zJ; together with u this sits near unit density
        std::string dims = "5x5x5";
        int ntheta = 65, nphi = 128;
        double kin = 1.0;
        double phi1 = 0.0;  // detected standing-wave phase
        std::string out = "map.csv";
    } map3d;

    struct {
        std::string mode = "mu-u";  // mu-u | disorder
        std::string grid = "16x16";
        int sites = 8;
        int bosons = -2;
        std::string boundary;  // empty: periodic for mu-u, open for disorder
        // defaults keep the grand-canonical filling within the exact-sector
        // ladder at every grid corner (small u with large mu runs away)
        double u0 = 2.0, u1 = 10.0;
        double mu0 = -0.5, mu1 = 1.5;
        double v0 = 0.0, v1 = 6.0;
        double ratio = 0.77;
        int points = 1025;
        double mask = 0.0;
        std::string out = "grid.csv";
    } phasediagram;

    struct {
        double omega0 = 2.65e6;   // Rabi frequency, Hz
        double delta_a = 50.0e6;  // atomic detuning, Hz
        double gamma = 6.07e6;    // linewidth, Hz
        int sites = 150;
        double sigma2 = 0.5;
        std::string out = "rate.csv";
    } rate;

    struct {
        std::string tag;   // fig2 | fig3 | fig4 | fig5 | quads
        double depth = 5.0;
        std::string grid;  // upstream phasediagram CSV (fig4/fig5)
        int points = 41;   // sweep resolution for quads / phase scans
    } figure;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_double(const std::string& v, const std::string& where, int line) {
    const std::string t = trim(v);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x))
        throw config_error("line " + std::to_string(line) + ": expected a number for " + where +
                           ", got '" + t + "'");
    return x;
}

inline long long parse_int(const std::string& v, const std::string& where, int line) {
    const std::string t = trim(v);
    char* end = nullptr;
    const long long x = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw config_error("line " + std::to_string(line) + ": expected an integer for " + where +
                           ", got '" + t + "'");
    return x;
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& where, int line) {
    const std::string t = trim(v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || end != t.c_str() + t.size())
        throw config_error("line " + std::to_string(line) + ": expected an unsigned integer for " +
                           where + ", got '" + t + "'");
    return x;
}

// Applies one section.key entry; throws on unknown keys so typos never pass
// silently. Returns normally on success.
inline void apply_entry(RunConfig& c, const std::string& sec, const std::string& key,
                        const std::string& val, int line) {
    const std::string where = sec + "." + key;
    auto num = [&] { return parse_double(val, where, line); };
    auto integer = [&] { return static_cast<int>(parse_int(val, where, line)); };
    auto str = [&] { return trim(val); };

    if (sec == "run") {
        if (key == "module") { c.module = str(); return; }
        if (key == "seed") { c.seed = parse_u64(val, where, line); return; }
        if (key == "jobs") { c.jobs = integer(); return; }
        if (key == "out_dir") { c.out_dir = str(); return; }
    } else if (sec == "wannier") {
        if (key == "depth") { c.wannier.depth = num(); return; }
        if (key == "dump") { c.wannier.dump = str(); return; }
    } else if (sec == "coupling") {
        if (key == "depth") { c.coupling.depth = num(); return; }
        if (key == "geometry") { c.coupling.geometry = str(); return; }
        if (key == "k0x") { c.coupling.k0x = num(); return; }
        if (key == "k1x") { c.coupling.k1x = num(); return; }
        if (key == "phi0") { c.coupling.phi0 = num(); return; }
        if (key == "phi1") { c.coupling.phi1 = num(); return; }
        if (key == "sites") { c.coupling.sites = integer(); return; }
        if (key == "dump") { c.coupling.dump = str(); return; }
    } else if (sec == "mf") {
        if (key == "u") { c.mf.u = num(); return; }
        if (key == "mu") { c.mf.mu = num(); return; }
        if (key == "scan_u") { c.mf.scan_u = str(); return; }
        if (key == "scan_mu") { c.mf.scan_mu = str(); return; }
        if (key == "nmax") { c.mf.nmax = integer(); return; }
        if (key == "out") { c.mf.out = str(); return; }
    } else if (sec == "ed") {
        if (key == "sites") { c.ed.sites = integer(); return; }
        if (key == "bosons") { c.ed.bosons = integer(); return; }
        if (key == "u") { c.ed.u = num(); return; }
        if (key == "v") { c.ed.v = num(); return; }
        if (key == "ratio") { c.ed.ratio = num(); return; }
        if (key == "boundary") { c.ed.boundary = str(); return; }
        if (key == "cap") { c.ed.cap = integer(); return; }
        if (key == "out") { c.ed.out = str(); return; }
    } else if (sec == "scan") {
        if (key == "source") { c.scan.source = str(); return; }
        if (key == "geometry") { c.scan.geometry = str(); return; }
        if (key == "theta0") { c.scan.theta0 = num(); return; }
        if (key == "kin") { c.scan.kin = num(); return; }
        if (key == "depth") { c.scan.depth = num(); return; }
        if (key == "points") { c.scan.points = integer(); return; }
        if (key == "mask") { c.scan.mask = num(); return; }
        if (key == "out") { c.scan.out = str(); return; }
    } else if (sec == "map3d") {
        if (key == "u") { c.map3d.u = num(); return; }
        if (key == "mu") { c.map3d.mu = num(); return; }
        if (key == "dims") { c.map3d.dims = str(); return; }
        if (key == "ntheta") { c.map3d.ntheta = integer(); return; }
        if (key == "nphi") { c.map3d.nphi = integer(); return; }
        if (key == "kin") { c.map3d.kin = num(); return; }
        if (key == "phi1") { c.map3d.phi1 = num(); return; }
        if (key == "out") { c.map3d.out = str(); return; }
    } else if (sec == "phasediagram") {
        if (key == "mode") { c.phasediagram.mode = str(); return; }
        if (key == "grid") { c.phasediagram.grid = str(); return; }
        if (key == "sites") { c.phasediagram.sites = integer(); return; }
        if (key == "bosons") { c.phasediagram.bosons = integer(); return; }
        if (key == "boundary") { c.phasediagram.boundary = str(); return; }
        if (key == "u0") { c.phasediagram.u0 = num(); return; }
        if (key == "u1") { c.phasediagram.u1 = num(); return; }
        if (key == "mu0") { c.phasediagram.mu0 = num(); return; }
        if (key == "mu1") { c.phasediagram.mu1 = num(); return; }
        if (key == "v0") { c.phasediagram.v0 = num(); return; }
        if (key == "v1") { c.phasediagram.v1 = num(); return; }
        if (key == "ratio") { c.phasediagram.ratio = num(); return; }
        if (key == "points") { c.phasediagram.points = integer(); return; }
        if (key == "mask") { c.phasediagram.mask = num(); return; }
        if (key == "out") { c.phasediagram.out = str(); return; }
    } else if (sec == "rate") {
        if (key == "omega0") { c.rate.omega0 = num(); return; }
        if (key == "delta_a") { c.rate.delta_a = num(); return; }
        if (key == "gamma") { c.rate.gamma = num(); return; }
        if (key == "sites") { c.rate.sites = integer(); return; }
        if (key == "sigma2") { c.rate.sigma2 = num(); return; }
        if (key == "out") { c.rate.out = str(); return; }
    } else if (sec == "figure") {
        if (key == "tag") { c.figure.tag = str(); return; }
        if (key == "depth") { c.figure.depth = num(); return; }
        if (key == "grid") { c.figure.grid = str(); return; }
        if (key == "points") { c.figure.points = integer(); return; }
    } else {
        throw config_error("line " + std::to_string(line) + ": unknown section [" + sec + "]");
    }
    throw config_error("line " + std::to_string(line) + ": unknown key '" + where + "'");
}

}  // namespace detail

/// Parses INI-style text into a RunConfig. Full-line comments start with '#'
/// or ';'. The first syntax or schema error aborts parsing with its line
/// number; keys seen twice in one section are rejected.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    std::vector<std::string> seen;
    int line = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line;
        const std::string s = detail::trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw config_error("line " + std::to_string(line) + ": malformed section header '" +
                                   s + "'");
            section = detail::trim(s.substr(1, s.size() - 2));
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line) + ": expected 'key = value', got '" +
                               s + "'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = s.substr(eq + 1);
        if (key.empty())
            throw config_error("line " + std::to_string(line) + ": empty key");
        if (section.empty())
            throw config_error("line " + std::to_string(line) + ": key '" + key +
                               "' appears outside any [section]");
        const std::string full = section + "." + key;
        for (const auto& f : seen)
            if (f == full)
                throw config_error("line " + std::to_string(line) + ": duplicate key '" + full +
                                   "'");
        seen.push_back(full);
        detail::apply_entry(cfg, section, key, val, line);
    }
    return cfg;
}

namespace detail {

inline void check(bool ok, const std::string& constraint, double got) {
    if (!ok)
        throw config_error("constraint violated: " + constraint + " (got " + format_g12(got) +
                           ")");
}

inline void check_choice(const std::string& got, std::initializer_list<const char*> allowed,
                         const std::string& name) {
    for (const char* a : allowed)
        if (got == a) return;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw config_error(name + " must be one of {" + list + "}, got '" + got + "'");
}

/// Parses "a:b:n" into n linearly spaced values (n = 1 collapses to {a}).
inline std::vector<double> parse_range(const std::string& s, const std::string& name) {
    const size_t c1 = s.find(':');
    const size_t c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw config_error(name + " must use the form a:b:n, got '" + s + "'");
    const double a = parse_double(s.substr(0, c1), name, 0);
    const double b = parse_double(s.substr(c1 + 1, c2 - c1 - 1), name, 0);
    const long long n = parse_int(s.substr(c2 + 1), name, 0);
    if (n < 1 || n > 100000) throw config_error(name + " count must be between 1 and 100000");
    if (n > 1 && !(b > a)) throw config_error(name + " needs b > a when n > 1");
    return linspace(a, b, static_cast<int>(n));
}

/// Parses "AxB" or "AxBxC" into dimensions, all positive.
inline std::vector<int> parse_dims(const std::string& s, const std::string& name, size_t want) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t x = s.find('x', pos);
        if (x == std::string::npos) x = s.size();
        out.push_back(static_cast<int>(parse_int(s.substr(pos, x - pos), name, 0)));
        pos = x + 1;
        if (x == s.size()) break;
    }
    if (out.size() != want)
        throw config_error(name + " must have " + std::to_string(want) + "'x'-separated parts, got '" +
                           s + "'");
    for (int v : out)
        if (v < 1) throw config_error(name + " parts must be positive, got '" + s + "'");
    return out;
}

/// Chain parameters from the [ed] block, in simulation units (J = 1, so the
/// dimensionless inputs U/2J and V/2J convert with a factor of 2).
inline ed1d::ChainSpec chain_from(const RunConfig& c) {
    ed1d::ChainSpec spec;
    spec.sites_M = c.ed.sites;
    spec.bosons_N = (c.ed.bosons == -2) ? c.ed.sites : c.ed.bosons;
    spec.hopping_J = 1.0;
    spec.interaction_U = 2.0 * c.ed.u;
    spec.boundary = (c.ed.boundary == "open") ? ed1d::Boundary::open : ed1d::Boundary::periodic;
    spec.n_cap = c.ed.cap;
    if (c.ed.v != 0.0)
        spec.disorder = ed1d::QuasiperiodicDisorder{2.0 * c.ed.v, c.ed.ratio, 0.0};
    return spec;
}

}  // namespace detail

/// Full precondition check for the selected module; throws config_error with
/// the violated constraint before any computation runs.
inline void validate_config(const RunConfig& c) {
    using detail::check;
    using detail::check_choice;
    check_choice(c.module,
                 {"wannier", "coupling", "mf", "ed", "scan", "map3d", "phasediagram", "rate",
                  "figure"},
                 "module");
    check(c.jobs >= 0, "jobs ≥ 0", c.jobs);
    if (c.out_dir.empty()) throw config_error("out_dir must not be empty");

    if (c.module == "wannier") {
        check(c.wannier.depth >= 0.0, "depth ≥ 0", c.wannier.depth);
    } else if (c.module == "coupling") {
        check(c.coupling.depth >= 0.0, "depth ≥ 0", c.coupling.depth);
        check_choice(c.coupling.geometry, {"max", "min", "custom"}, "coupling geometry");
        check(c.coupling.sites >= 2, "coupling sites ≥ 2", c.coupling.sites);
        if (c.coupling.geometry == "custom") {
            check(std::abs(c.coupling.k0x) <= 2.0, "|k0x| ≤ 2 (units of π/d)",
                  c.coupling.k0x);
            check(std::abs(c.coupling.k1x) <= 2.0, "|k1x| ≤ 2 (units of π/d)",
                  c.coupling.k1x);
        }
    } else if (c.module == "mf") {
        check(c.mf.u >= 0.0, "mf u ≥ 0", c.mf.u);
        check(c.mf.nmax >= 6, "mf nmax ≥ 6", c.mf.nmax);
        if (!c.mf.scan_u.empty()) detail::parse_range(c.mf.scan_u, "scan_u");
        if (!c.mf.scan_mu.empty()) detail::parse_range(c.mf.scan_mu, "scan_mu");
    } else if (c.module == "ed") {
        detail::chain_from(c).validate();
    } else if (c.module == "scan") {
        check_choice(c.scan.source, {"ed", "mf"}, "scan source");
        check_choice(c.scan.geometry, {"density", "min", "max"}, "scan geometry");
        check(c.scan.points >= 9, "scan points ≥ 9", c.scan.points);
        check(c.scan.mask >= 0.0, "scan mask ≥ 0", c.scan.mask);
        check(c.scan.kin > 0.0 && c.scan.kin <= 2.0, "0 < kin ≤ 2 (units of π/d)",
              c.scan.kin);
        check(std::abs(c.scan.theta0) <= 0.5 * pi, "|theta0| ≤ π/2", c.scan.theta0);
        check(c.scan.depth >= 0.0, "depth ≥ 0", c.scan.depth);
        if (c.scan.source == "ed") detail::chain_from(c).validate();
        else check(c.mf.u >= 0.0, "mf u ≥ 0", c.mf.u);
    } else if (c.module == "map3d") {
        check(c.map3d.u >= 0.0, "map3d u ≥ 0", c.map3d.u);
        check(c.map3d.ntheta >= 2, "ntheta ≥ 2", c.map3d.ntheta);
        check(c.map3d.nphi >= 2, "nphi ≥ 2", c.map3d.nphi);
        check(c.map3d.kin > 0.0 && c.map3d.kin <= 2.0, "0 < kin ≤ 2 (units of π/d)",
              c.map3d.kin);
        detail::parse_dims(c.map3d.dims, "map3d dims", 3);
    } else if (c.module == "phasediagram") {
        check_choice(c.phasediagram.mode, {"mu-u", "disorder"}, "phasediagram mode");
        if (!c.phasediagram.boundary.empty())
            check_choice(c.phasediagram.boundary, {"open", "periodic"}, "boundary");
        const auto g = detail::parse_dims(c.phasediagram.grid, "phasediagram grid", 2);
        check(g[0] >= 2 && g[1] >= 2, "grid counts ≥ 2", std::min(g[0], g[1]));
        check(c.phasediagram.points >= 9, "phasediagram points ≥ 9", c.phasediagram.points);
        check(c.phasediagram.mask >= 0.0, "phasediagram mask ≥ 0", c.phasediagram.mask);
        check(c.phasediagram.u1 > c.phasediagram.u0, "u1 > u0", c.phasediagram.u1);
        ed1d::ChainSpec spec;
        spec.sites_M = c.phasediagram.sites;
        spec.bosons_N =
            (c.phasediagram.bosons == -2) ? c.phasediagram.sites : c.phasediagram.bosons;
        spec.interaction_U = 2.0 * c.phasediagram.u1;
        spec.boundary = (c.phasediagram.boundary == "open" ||
                         (c.phasediagram.boundary.empty() && c.phasediagram.mode == "disorder"))
                            ? ed1d::Boundary::open
                            : ed1d::Boundary::periodic;
        spec.validate();
        if (c.phasediagram.mode == "disorder") {
            check(c.phasediagram.v0 >= 0.0, "v0 ≥ 0", c.phasediagram.v0);
            check(c.phasediagram.v1 > c.phasediagram.v0, "v1 > v0", c.phasediagram.v1);
            if (spec.bosons_N != spec.sites_M)
                throw config_error("disorder sweep runs at fixed density N = M");
        } else {
            check(c.phasediagram.mu1 > c.phasediagram.mu0, "mu1 > mu0", c.phasediagram.mu1);
        }
    } else if (c.module == "rate") {
        check(c.rate.delta_a != 0.0, "delta_a ≠ 0", c.rate.delta_a);
        check(c.rate.gamma > 0.0, "gamma > 0", c.rate.gamma);
        check(c.rate.sites >= 1, "rate sites ≥ 1", c.rate.sites);
        check(c.rate.sigma2 >= 0.0, "sigma2 ≥ 0", c.rate.sigma2);
    } else if (c.module == "figure") {
        check_choice(c.figure.tag, {"fig2", "fig3", "fig4", "fig5", "quads"}, "figure tag");
        check(c.figure.depth >= 0.0, "depth ≥ 0", c.figure.depth);
        check(c.figure.points >= 5, "figure points ≥ 5", c.figure.points);
    }
}

/// Canonical single-string dump of every computation-relevant field, used for
/// the manifest's config hash. Where outputs land (out_dir) and how many
/// workers run (jobs) do not change any result byte, so they stay out.
inline std::string canonical_dump(const RunConfig& c) {
    std::string s;
    auto kv = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    auto kd = [&](const std::string& k, double v) { kv(k, format_g12(v)); };
    auto ki = [&](const std::string& k, long long v) { kv(k, std::to_string(v)); };
    kv("run.module", c.module);
    ki("run.seed", static_cast<long long>(c.seed));
    kd("wannier.depth", c.wannier.depth);
    kv("wannier.dump", c.wannier.dump);
    kd("coupling.depth", c.coupling.depth);
    kv("coupling.geometry", c.coupling.geometry);
    kd("coupling.k0x", c.coupling.k0x);
    kd("coupling.k1x", c.coupling.k1x);
    kd("coupling.phi0", c.coupling.phi0);
    kd("coupling.phi1", c.coupling.phi1);
    ki("coupling.sites", c.coupling.sites);
    kv("coupling.dump", c.coupling.dump);
    kd("mf.u", c.mf.u);
    kd("mf.mu", c.mf.mu);
    kv("mf.scan_u", c.mf.scan_u);
    kv("mf.scan_mu", c.mf.scan_mu);
    ki("mf.nmax", c.mf.nmax);
    kv("mf.out", c.mf.out);
    ki("ed.sites", c.ed.sites);
    ki("ed.bosons", c.ed.bosons);
    kd("ed.u", c.ed.u);
    kd("ed.v", c.ed.v);
    kd("ed.ratio", c.ed.ratio);
    kv("ed.boundary", c.ed.boundary);
    ki("ed.cap", c.ed.cap);
    kv("ed.out", c.ed.out);
    kv("scan.source", c.scan.source);
    kv("scan.geometry", c.scan.geometry);
    kd("scan.theta0", c.scan.theta0);
    kd("scan.kin", c.scan.kin);
    kd("scan.depth", c.scan.depth);
    ki("scan.points", c.scan.points);
    kd("scan.mask", c.scan.mask);
    kv("scan.out", c.scan.out);
    kd("map3d.u", c.map3d.u);
    kd("map3d.mu", c.map3d.mu);
    kv("map3d.dims", c.map3d.dims);
    ki("map3d.ntheta", c.map3d.ntheta);
    ki("map3d.nphi", c.map3d.nphi);
    kd("map3d.kin", c.map3d.kin);
    kd("map3d.phi1", c.map3d.phi1);
    kv("map3d.out", c.map3d.out);
    kv("phasediagram.mode", c.phasediagram.mode);
    kv("phasediagram.grid", c.phasediagram.grid);
    ki("phasediagram.sites", c.phasediagram.sites);
    ki("phasediagram.bosons", c.phasediagram.bosons);
    kv("phasediagram.boundary", c.phasediagram.boundary);
    kd("phasediagram.u0", c.phasediagram.u0);
    kd("phasediagram.u1", c.phasediagram.u1);
    kd("phasediagram.mu0", c.phasediagram.mu0);
    kd("phasediagram.mu1", c.phasediagram.mu1);
    kd("phasediagram.v0", c.phasediagram.v0);
    kd("phasediagram.v1", c.phasediagram.v1);
    kd("phasediagram.ratio", c.phasediagram.ratio);
    ki("phasediagram.points", c.phasediagram.points);
    kd("phasediagram.mask", c.phasediagram.mask);
    kv("phasediagram.out", c.phasediagram.out);
    kd("rate.omega0", c.rate.omega0);
    kd("rate.delta_a", c.rate.delta_a);
    kd("rate.gamma", c.rate.gamma);
    ki("rate.sites", c.rate.sites);
    kd("rate.sigma2", c.rate.sigma2);
    kv("rate.out", c.rate.out);
    kv("figure.tag", c.figure.tag);
    kd("figure.depth", c.figure.depth);
    kv("figure.grid", c.figure.grid);
    ki("figure.points", c.figure.points);
    return s;
}

}  // namespace latscat::config
