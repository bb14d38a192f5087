#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "latscat/common.hpp"
#include "latscat/ed1d.hpp"
#include "latscat/gutzwiller.hpp"
#include "latscat/observables.hpp"

// Parameter sweeps over the chain model producing phase-diagram grids:
// grand-canonical (U, mu) maps with per-column sector caching, fixed-density
// (U, V) disorder maps, and a corner-calibrated 2x2 classifier on
// (R_max, W_R). All sweep inputs are dimensionless ratios against 2J.

namespace latscat::phasemap {

struct AxisSpec {
    std::string name;
    double start = 0.0, stop = 0.0;
    int count = 1;

    std::vector<double> values() const {
        if (count < 1) throw config_error("axis needs at least one point");
        if (count == 1) return {start};
        if (stop <= start) throw config_error("axis stop must exceed start");
        return linspace(start, stop, count);
    }
};

constexpr double cell_nan = std::numeric_limits<double>::quiet_NaN();

struct CellRecord {
    double axis1 = 0.0, axis2 = 0.0;
    double R_max = cell_nan;
    double W_R = cell_nan;
    double sum_dd = cell_nan;  // total on-site fluctuation sum_i dd_ii
    double phi = cell_nan;     // mean-field order parameter (mu-U sweeps)
    double K_b = cell_nan;     // Luttinger estimate (periodic chains)
    int sector_N = -1;         // selected particle sector (mu-U sweeps)
    std::string label = "unclassified";
    std::string error_flag;    // empty when the cell solved cleanly
};

struct PhaseGrid {
    AxisSpec axis1, axis2;                // axis1 varies slowest in `cells`
    std::vector<CellRecord> cells;
    bool corners_ok = true;               // calibration corners got their labels
    std::vector<std::string> metadata;
    std::string caveat = "Transition lines are shifted due to finite size effects";

    const CellRecord& at(int i1, int i2) const { return cells[size_t(i1) * axis2.count + i2]; }
    CellRecord& at(int i1, int i2) { return cells[size_t(i1) * axis2.count + i2]; }
};

struct Thresholds {
    double r_split = 0.0;
    double w_split = 0.0;
};

/// 2x2 decision on (R_max, W_R): high R with small width is the ordered phase,
/// low R with large width the incompressible one, both large the glassy one.
inline std::string classify(double R_max, double W_R, const Thresholds& th) {
    if (std::isnan(R_max) || std::isnan(W_R)) return "unclassified";
    const bool r_hi = R_max > th.r_split;
    const bool w_hi = W_R > th.w_split;
    if (r_hi && !w_hi) return "SF";
    if (!r_hi && w_hi) return "MI";
    if (r_hi && w_hi) return "BG";
    return "unclassified";
}

/// Log-midpoint thresholds between a high-R/low-W reference cell and a
/// low-R/high-W reference cell.
inline Thresholds calibrate(const CellRecord& sf_ref, const CellRecord& mi_ref) {
    if (std::isnan(sf_ref.R_max) || std::isnan(mi_ref.R_max) || std::isnan(sf_ref.W_R) ||
        std::isnan(mi_ref.W_R))
        throw numerical_error("calibration cells failed to produce dip summaries");
    if (sf_ref.R_max <= 0 || mi_ref.R_max <= 0 || sf_ref.W_R <= 0 || mi_ref.W_R <= 0)
        throw numerical_error("calibration cells have non-positive summaries");
    Thresholds th;
    th.r_split = std::sqrt(sf_ref.R_max * mi_ref.R_max);
    th.w_split = std::sqrt(sf_ref.W_R * mi_ref.W_R);
    return th;
}

struct SweepOptions {
    int jobs = 1;               // 0 picks hardware concurrency
    int scan_points = 1025;
    double mask_halfwidth = 0.0;
    int sector_headroom = 4;    // mu-U sweeps consider N in [0, M + headroom]
    bool want_phi = true;
    bool want_kb = true;
    int mf_n_max = 12;
};

namespace detail {

inline int worker_count(int jobs) {
    if (jobs < 0) throw config_error("job count must be >= 0");
    if (jobs == 0) jobs = int(std::thread::hardware_concurrency());
    return std::max(jobs, 1);
}

// Solve one chain and fill the scattering summary fields of a cell.
inline void fill_from_chain(CellRecord& cell, const ed1d::ChainSpec& spec,
                            const SweepOptions& opts) {
    auto st = ed1d::ground_state(spec, false);
    auto tables = ed1d::correlations(st);
    cell.sum_dd = tables.dd.trace();
    if (opts.want_kb && spec.boundary == ed1d::Boundary::periodic && spec.sites_M >= 3)
        cell.K_b = observables::luttinger_parameter(tables.dd).K_b;
    auto scan = observables::dk_scan(tables.dd, -pi, pi, opts.scan_points);
    try {
        auto sum = observables::extract_summary(scan, opts.mask_halfwidth);
        cell.R_max = sum.R_max;
        cell.W_R = sum.W_R;
    } catch (const numerical_error&) {
        cell.R_max = *std::max_element(scan.R.begin(), scan.R.end());
        cell.error_flag = "no_dip";
    }
}

template <class Fn>
void run_indexed(int n, int jobs, const Fn& fn) {
    const int workers = std::min(worker_count(jobs), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Grand-canonical (U, mu) sweep: per U column every particle sector
/// N in [0, M + headroom] is solved once, then each mu picks the sector
/// minimizing E(N) - mu N. Axis values are U/2J and mu/2J.
inline PhaseGrid sweep_mu_u(const ed1d::ChainSpec& chain, const AxisSpec& u_axis,
                            const AxisSpec& mu_axis, const SweepOptions& opts = {}) {
    chain.validate();
    const auto u_vals = u_axis.values();
    const auto mu_vals = mu_axis.values();
    const double twoJ = 2.0 * chain.hopping_J;
    if (twoJ <= 0) throw config_error("mu-U sweep needs positive hopping");

    PhaseGrid grid;
    grid.axis1 = u_axis;
    grid.axis2 = mu_axis;
    grid.cells.resize(u_vals.size() * mu_vals.size());
    grid.metadata.push_back("axes: U/2J, mu/2J");
    grid.metadata.push_back(std::string("boundary: ") +
                            (chain.boundary == ed1d::Boundary::periodic ? "periodic" : "open"));
    grid.metadata.push_back("sites: " + std::to_string(chain.sites_M));

    const int n_max = chain.sites_M + opts.sector_headroom;

    struct Sector {
        double energy = 0.0;
        CellRecord summary;  // scattering fields only
    };

    detail::run_indexed(int(u_vals.size()), opts.jobs, [&](int iu) {
        const double U = u_vals[iu] * twoJ;
        std::vector<Sector> sectors(n_max + 1);
        std::vector<bool> summarized(n_max + 1, false);
        for (int N = 0; N <= n_max; ++N) {
            ed1d::ChainSpec s = chain;
            s.interaction_U = U;
            s.bosons_N = N;
            sectors[N].energy = ed1d::ground_state(s, false).energy;
        }
        for (size_t im = 0; im < mu_vals.size(); ++im) {
            CellRecord& cell = grid.at(iu, int(im));
            cell.axis1 = u_vals[iu];
            cell.axis2 = mu_vals[im];
            const double mu = mu_vals[im] * twoJ;
            int best = 0;
            for (int N = 1; N <= n_max; ++N)
                if (sectors[N].energy - mu * N < sectors[best].energy - mu * best) best = N;
            cell.sector_N = best;
            try {
                if (best == n_max) {
                    cell.error_flag = "sector_ceiling";
                } else if (best == 0) {
                    cell.R_max = 0.0;
                    cell.sum_dd = 0.0;
                    cell.error_flag = "no_dip";  // vacuum: R = 0 everywhere
                } else {
                    if (!summarized[best]) {
                        ed1d::ChainSpec s = chain;
                        s.interaction_U = U;
                        s.bosons_N = best;
                        s.mu = mu;
                        detail::fill_from_chain(sectors[best].summary, s, opts);
                        summarized[best] = true;
                    }
                    const CellRecord& src = sectors[best].summary;
                    cell.R_max = src.R_max;
                    cell.W_R = src.W_R;
                    cell.sum_dd = src.sum_dd;
                    cell.K_b = src.K_b;
                    if (!src.error_flag.empty()) cell.error_flag = src.error_flag;
                }
                if (opts.want_phi) {
                    gutzwiller::BoseHubbardParams p;
                    p.hopping_J = chain.hopping_J;
                    p.interaction_U = U;
                    p.mu = mu;
                    p.z = 2;
                    p.n_max = opts.mf_n_max;
                    cell.phi = gutzwiller::solve_gutzwiller(p).phi;
                }
            } catch (const latscat_error& e) {
                cell.error_flag = std::string("solver_error: ") + e.what();
            }
        }
    });

    // label against grid-wide references: strongest signal vs weakest occupied
    const CellRecord* sf_ref = nullptr;
    const CellRecord* mi_ref = nullptr;
    for (const auto& c : grid.cells) {
        if (c.sector_N <= 0 || std::isnan(c.R_max) || std::isnan(c.W_R)) continue;
        if (!sf_ref || c.R_max > sf_ref->R_max) sf_ref = &c;
        if (!mi_ref || c.R_max < mi_ref->R_max) mi_ref = &c;
    }
    if (sf_ref && mi_ref && sf_ref != mi_ref) {
        try {
            const Thresholds th = calibrate(*sf_ref, *mi_ref);
            for (auto& c : grid.cells)
                if (c.error_flag.empty()) c.label = classify(c.R_max, c.W_R, th);
        } catch (const numerical_error&) {
            grid.corners_ok = false;
        }
    }
    return grid;
}

/// Fixed-density (U, V) sweep at N = M with the quasiperiodic field
/// eps_i = V cos(2 pi r i). Axis values are U/2J and V/2J; labels are
/// calibrated from the grid corners (U_min,V_min) -> SF, (U_max,V_min) -> MI,
/// (U_min,V_max) -> BG and checked for corner consistency.
inline PhaseGrid sweep_disorder(const ed1d::ChainSpec& chain, const AxisSpec& u_axis,
                                const AxisSpec& v_axis, double ratio_r = 0.77,
                                const SweepOptions& opts = {}) {
    chain.validate();
    if (chain.bosons_N != chain.sites_M)
        throw config_error("disorder sweep runs at fixed density N = M");
    const auto u_vals = u_axis.values();
    const auto v_vals = v_axis.values();
    const double twoJ = 2.0 * chain.hopping_J;
    if (twoJ <= 0) throw config_error("disorder sweep needs positive hopping");

    PhaseGrid grid;
    grid.axis1 = u_axis;
    grid.axis2 = v_axis;
    grid.cells.resize(u_vals.size() * v_vals.size());
    grid.metadata.push_back("axes: U/2J, V/2J (disorder strength normalized by 2J)");
    grid.metadata.push_back("disorder: quasiperiodic, ratio r = " + format_g12(ratio_r));
    grid.metadata.push_back(std::string("boundary: ") +
                            (chain.boundary == ed1d::Boundary::periodic ? "periodic" : "open"));
    grid.metadata.push_back("sites: " + std::to_string(chain.sites_M) + ", fixed N = M");

    const int n1 = int(u_vals.size()), n2 = int(v_vals.size());
    detail::run_indexed(n1 * n2, opts.jobs, [&](int idx) {
        const int iu = idx / n2, iv = idx % n2;
        CellRecord& cell = grid.cells[idx];
        cell.axis1 = u_vals[iu];
        cell.axis2 = v_vals[iv];
        ed1d::ChainSpec s = chain;
        s.interaction_U = u_vals[iu] * twoJ;
        if (v_vals[iv] != 0.0)
            s.disorder = ed1d::QuasiperiodicDisorder{v_vals[iv] * twoJ, ratio_r, 0.0};
        else
            s.disorder.reset();
        try {
            detail::fill_from_chain(cell, s, opts);
        } catch (const latscat_error& e) {
            cell.error_flag = std::string("solver_error: ") + e.what();
        }
    });

    const CellRecord& sf_corner = grid.at(0, 0);
    const CellRecord& mi_corner = grid.at(n1 - 1, 0);
    const CellRecord& bg_corner = grid.at(0, n2 - 1);
    try {
        const Thresholds th = calibrate(sf_corner, mi_corner);
        for (auto& c : grid.cells)
            if (c.error_flag.empty()) c.label = classify(c.R_max, c.W_R, th);
        grid.corners_ok = sf_corner.label == "SF" && mi_corner.label == "MI" &&
                          bg_corner.label == "BG";
    } catch (const numerical_error&) {
        grid.corners_ok = false;
    }
    return grid;
}

/// CSV rendering: commented header with axes, metadata and the finite-size
/// caveat, then one row per cell in axis1-major order.
inline std::string to_csv(const PhaseGrid& grid) {
    std::ostringstream out;
    out << "# phase grid " << grid.axis1.name << " x " << grid.axis2.name << "\n";
    out << "# axis1: " << grid.axis1.name << " in [" << format_g12(grid.axis1.start) << ", "
        << format_g12(grid.axis1.stop) << "] x " << grid.axis1.count << "\n";
    out << "# axis2: " << grid.axis2.name << " in [" << format_g12(grid.axis2.start) << ", "
        << format_g12(grid.axis2.stop) << "] x " << grid.axis2.count << "\n";
    for (const auto& m : grid.metadata) out << "# " << m << "\n";
    out << "# corners_ok: " << (grid.corners_ok ? "true" : "false") << "\n";
    out << "# caveat: " << grid.caveat << "\n";
    out << "axis1,axis2,Rmax,W_R,sum_dd,phi,Kb,label,error_flag\n";
    for (const auto& c : grid.cells) {
        out << format_g12(c.axis1) << ',' << format_g12(c.axis2) << ',' << format_g12(c.R_max)
            << ',' << format_g12(c.W_R) << ',' << format_g12(c.sum_dd) << ','
            << format_g12(c.phi) << ',' << format_g12(c.K_b) << ',' << c.label << ','
            << c.error_flag << "\n";
    }
    return out.str();
}

/// True when each phase label (SF, MI, BG) forms one connected region.
/// Diagonal neighbours count as adjacent: region boundaries cut across a
/// coarse grid at an angle, so a one-cell-wide stripe stays connected.
/// Unclassified cells are crossover territory, not a phase, and are skipped.
inline bool labels_connected(const PhaseGrid& grid) {
    const int n1 = grid.axis1.count, n2 = grid.axis2.count;
    for (const char* lab : {"SF", "MI", "BG"}) {
        std::vector<char> seen(grid.cells.size(), 0);
        int components = 0;
        for (int i = 0; i < n1 * n2; ++i) {
            if (seen[i] || grid.cells[i].label != lab) continue;
            ++components;
            std::vector<int> stack{i};
            seen[i] = 1;
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int r = cur / n2, cc = cur % n2;
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = r + dr, c2 = cc + dc;
                        if ((!dr && !dc) || rr < 0 || rr >= n1 || c2 < 0 || c2 >= n2)
                            continue;
                        const int j = rr * n2 + c2;
                        if (!seen[j] && grid.cells[j].label == lab) {
                            seen[j] = 1;
                            stack.push_back(j);
                        }
                    }
            }
        }
        if (components > 1) return false;
    }
    return true;
}

}  // namespace latscat::phasemap
