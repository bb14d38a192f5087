#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "latscat/common.hpp"
#include "latscat/lanczos.hpp"
#include "latscat/optics.hpp"

// Exact ground states of the 1D Bose-Hubbard chain at desk scale: occupation
// basis with per-site cap, sparse Hamiltonian, Lanczos ground state, density
// and single-particle correlation tables, and expectation values of windowed
// light-coupling operators.

namespace latscat::ed1d {

enum class Boundary { open, periodic };

// Quasiperiodic on-site potential eps_i = V * cos(2 pi r i + offset), V >= 0.
struct QuasiperiodicDisorder {
    double strength_V = 0.0;
    double ratio_r = 0.77;
    double offset = 0.0;
};

struct ChainSpec {
    int sites_M = 8;
    int bosons_N = 8;            // -1 selects the unrestricted (all fillings) basis
    double hopping_J = 1.0;
    double interaction_U = 0.0;
    double mu = 0.0;             // bookkeeping only; the sector Hamiltonian excludes -mu*N
    Boundary boundary = Boundary::open;
    std::optional<QuasiperiodicDisorder> disorder;
    int n_cap = -1;              // -1: min(N,6) when U/2J >= 1, else N

    int effective_cap() const {
        if (n_cap > 0) return n_cap;
        if (bosons_N < 0)
            throw config_error("unrestricted basis requires an explicit occupation cap");
        if (bosons_N == 0) return 1;
        const bool strong = (hopping_J == 0.0) ? (interaction_U > 0.0)
                                               : (interaction_U / (2.0 * hopping_J) >= 1.0);
        return strong ? std::min(bosons_N, 6) : bosons_N;
    }

    void validate() const {
        if (sites_M < 1 || sites_M > 12)
            throw config_error("chain length must satisfy 1 <= M <= 12, got M = " +
                               std::to_string(sites_M));
        if (hopping_J < 0) throw config_error("hopping amplitude J must be >= 0");
        if (interaction_U < 0) throw config_error("on-site interaction U must be >= 0");
        if (boundary == Boundary::periodic && sites_M < 3)
            throw config_error("periodic chains need at least 3 sites");
        if (disorder && disorder->strength_V < 0)
            throw config_error("disorder strength V must be >= 0");
        if (bosons_N >= 0) {
            if (n_cap > 0 && n_cap > bosons_N)
                throw config_error("occupation cap exceeds the particle number");
            // dimension guard on the uncapped sector size
            double dim = 1.0;
            for (int k = 1; k <= std::min(bosons_N, sites_M - 1); ++k)
                dim *= double(bosons_N + sites_M - 1 - k + 1) / double(k);
            if (dim > 5e6)
                throw config_error("Hilbert space too large: sector dimension ~" +
                                   format_g12(dim) + " exceeds 5e6");
        } else {
            if (n_cap <= 0)
                throw config_error("unrestricted basis requires an explicit occupation cap");
            if (std::pow(double(n_cap + 1), sites_M) > 5e6)
                throw config_error("unrestricted Hilbert space exceeds 5e6 states");
        }
    }
};

// Occupation-number basis in descending lexicographic order, packed into 64-bit
// keys with site 0 in the most significant bits (so key order == list order).
struct BosonBasis {
    int sites_M = 0;
    int bosons_N = 0;   // -1 for unrestricted
    int cap = 0;
    int bits_per_site = 0;
    std::vector<uint64_t> keys;  // strictly decreasing

    Eigen::Index dim() const { return Eigen::Index(keys.size()); }

    int occupation(uint64_t key, int site) const {
        const int shift = (sites_M - 1 - site) * bits_per_site;
        return int((key >> shift) & ((uint64_t(1) << bits_per_site) - 1));
    }

    std::vector<int> occupations(Eigen::Index idx) const {
        std::vector<int> occ(sites_M);
        for (int i = 0; i < sites_M; ++i) occ[i] = occupation(keys[idx], i);
        return occ;
    }

    uint64_t shift_key(uint64_t key, int site, int delta) const {
        const int shift = (sites_M - 1 - site) * bits_per_site;
        return key + (delta > 0 ? (uint64_t(delta) << shift) : -(uint64_t(-delta) << shift));
    }

    Eigen::Index index_of(uint64_t key) const {
        auto it = std::lower_bound(keys.begin(), keys.end(), key, std::greater<uint64_t>());
        if (it == keys.end() || *it != key) return -1;
        return Eigen::Index(it - keys.begin());
    }
};

inline BosonBasis build_basis(int sites_M, int bosons_N, int n_cap) {
    if (sites_M < 1) throw config_error("need at least one site");
    if (n_cap < 1) throw config_error("occupation cap must be >= 1");
    if (bosons_N >= 0 && n_cap * sites_M < bosons_N)
        throw config_error("occupation cap too small to hold all bosons");

    BosonBasis b;
    b.sites_M = sites_M;
    b.bosons_N = bosons_N;
    b.cap = n_cap;
    b.bits_per_site = 1;
    while ((1 << b.bits_per_site) <= n_cap) ++b.bits_per_site;
    if (b.bits_per_site * sites_M > 64)
        throw config_error("occupation encoding exceeds 64 bits");

    std::vector<int> occ(sites_M, 0);
    // descending lexicographic enumeration: site 0 varies slowest, high first
    auto recurse = [&](auto&& self, int site, int remaining, uint64_t key) -> void {
        const int shift_base = (sites_M - 1 - site) * b.bits_per_site;
        if (site == sites_M - 1) {
            if (bosons_N >= 0) {
                if (remaining <= n_cap) b.keys.push_back(key | (uint64_t(remaining) << shift_base));
            } else {
                for (int n = n_cap; n >= 0; --n)
                    b.keys.push_back(key | (uint64_t(n) << shift_base));
            }
            return;
        }
        const int hi = (bosons_N >= 0) ? std::min(remaining, n_cap) : n_cap;
        for (int n = hi; n >= 0; --n) {
            if (bosons_N >= 0 && remaining - n > n_cap * (sites_M - site - 1)) break;
            self(self, site + 1, remaining - n, key | (uint64_t(n) << shift_base));
        }
    };
    recurse(recurse, 0, bosons_N >= 0 ? bosons_N : 0, 0);
    if (b.keys.empty()) throw config_error("empty occupation basis");
    return b;
}

namespace detail {

inline std::vector<std::pair<int, int>> chain_bonds(const ChainSpec& spec) {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < spec.sites_M; ++i) bonds.push_back({i, i + 1});
    if (spec.boundary == Boundary::periodic) bonds.push_back({spec.sites_M - 1, 0});
    return bonds;
}

inline std::vector<double> onsite_energies(const ChainSpec& spec) {
    std::vector<double> eps(spec.sites_M, 0.0);
    if (spec.disorder) {
        const auto& d = *spec.disorder;
        for (int i = 0; i < spec.sites_M; ++i)
            eps[i] = d.strength_V * std::cos(2.0 * pi * d.ratio_r * i + d.offset);
    }
    return eps;
}

}  // namespace detail

/// Sector Hamiltonian H = -J sum_<ij> (b_i^+ b_j + h.c.) + U/2 sum n(n-1) + sum eps_i n_i.
/// The chemical potential only enters grand-canonical sweeps, never H itself.
inline Eigen::SparseMatrix<double> hamiltonian(const ChainSpec& spec, const BosonBasis& basis) {
    const auto bonds = detail::chain_bonds(spec);
    const auto eps = detail::onsite_energies(spec);
    const Eigen::Index dim = basis.dim();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(dim) * (1 + 2 * bonds.size()));
    std::vector<int> occ(spec.sites_M);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const uint64_t key = basis.keys[s];
        double diag = 0.0;
        for (int i = 0; i < spec.sites_M; ++i) {
            occ[i] = basis.occupation(key, i);
            diag += 0.5 * spec.interaction_U * occ[i] * (occ[i] - 1) + eps[i] * occ[i];
        }
        if (diag != 0.0) trip.emplace_back(s, s, diag);
        if (spec.hopping_J == 0.0) continue;
        for (const auto& [i, j] : bonds) {
            // b_i^+ b_j and b_j^+ b_i
            if (occ[j] > 0 && occ[i] < basis.cap) {
                const uint64_t tkey = basis.shift_key(basis.shift_key(key, j, -1), i, +1);
                const Eigen::Index t = basis.index_of(tkey);
                trip.emplace_back(t, s, -spec.hopping_J * std::sqrt(double(occ[j]) * (occ[i] + 1)));
            }
            if (occ[i] > 0 && occ[j] < basis.cap) {
                const uint64_t tkey = basis.shift_key(basis.shift_key(key, i, -1), j, +1);
                const Eigen::Index t = basis.index_of(tkey);
                trip.emplace_back(t, s, -spec.hopping_J * std::sqrt(double(occ[i]) * (occ[j] + 1)));
            }
        }
    }
    Eigen::SparseMatrix<double> H(dim, dim);
    H.setFromTriplets(trip.begin(), trip.end());
    H.makeCompressed();
    return H;
}

struct EDState {
    ChainSpec spec;
    BosonBasis basis;
    Eigen::VectorXd psi;
    double energy = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    bool degenerate = false;
    double residual = 0.0;
};

/// Lanczos ground state of the chain. The global phase is fixed by making the
/// largest-magnitude amplitude real positive. With want_gap the first excited
/// energy is found by a deflated second run; gap < 1e-12 sets the degeneracy flag.
inline EDState ground_state(const ChainSpec& spec, bool want_gap = true) {
    spec.validate();
    EDState st;
    st.spec = spec;
    st.basis = build_basis(spec.sites_M, spec.bosons_N, spec.effective_cap());
    const Eigen::SparseMatrix<double> H = hamiltonian(spec, st.basis);
    const Eigen::Index dim = st.basis.dim();

    if (dim == 1) {
        st.psi = Eigen::VectorXd::Ones(1);
        st.energy = H.coeff(0, 0);
        return st;
    }

    auto apply = [&H](const auto& in, Eigen::VectorXd& out) { out.noalias() = H * in; };
    lanczos::Options opt;
    auto res = lanczos::lowest_eigenpair(apply, dim, opt);
    st.psi = std::move(res.vector);
    st.energy = res.value;
    st.residual = res.residual;

    Eigen::Index imax = 0;
    st.psi.cwiseAbs().maxCoeff(&imax);
    if (st.psi(imax) < 0) st.psi = -st.psi;

    if (want_gap && dim > 1) {
        auto excited = lanczos::lowest_eigenpair(apply, dim, opt, {st.psi});
        st.gap = excited.value - st.energy;
        st.degenerate = st.gap < 1e-12;
    }
    return st;
}

struct CorrelationTables {
    Eigen::VectorXd density;  // <n_i>
    Eigen::MatrixXd dd;       // <n_i n_j> - <n_i><n_j>
    Eigen::MatrixXd sp;       // <b_i^+ b_j>
};

inline CorrelationTables correlations(const EDState& st) {
    const int M = st.basis.sites_M;
    const Eigen::Index dim = st.basis.dim();
    CorrelationTables t;
    t.density = Eigen::VectorXd::Zero(M);
    Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(M, M);
    t.sp = Eigen::MatrixXd::Zero(M, M);

    std::vector<int> occ(M);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const uint64_t key = st.basis.keys[s];
        const double w = st.psi(s) * st.psi(s);
        for (int i = 0; i < M; ++i) occ[i] = st.basis.occupation(key, i);
        for (int i = 0; i < M; ++i) {
            t.density(i) += w * occ[i];
            nn(i, i) += w * occ[i] * occ[i];
            for (int j = i + 1; j < M; ++j) nn(i, j) += w * occ[i] * occ[j];
        }
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                if (i == j || occ[j] == 0 || occ[i] >= st.basis.cap) continue;
                const uint64_t tkey = st.basis.shift_key(st.basis.shift_key(key, j, -1), i, +1);
                const Eigen::Index tt = st.basis.index_of(tkey);
                t.sp(i, j) += std::sqrt(double(occ[j]) * (occ[i] + 1)) * st.psi(s) * st.psi(tt);
            }
    }
    for (int i = 0; i < M; ++i) {
        t.sp(i, i) = t.density(i);
        for (int j = i + 1; j < M; ++j) nn(j, i) = nn(i, j);
    }
    t.dd = nn - t.density * t.density.transpose();
    return t;
}

struct FExpectation {
    cd mean_F{0.0, 0.0};   // <F>
    double mean_FdagF = 0.0;  // <F^+ F>
    double mean_X = 0.0;      // <X_beta> with X = (F e^{-i beta} + F^+ e^{i beta})/2
    double mean_XX = 0.0;     // <X_beta^2>
};

/// Expectation values of F = sum_a D_a n_{w+a} + sum_b B_b (b^+_i b_{i+1} + h.c.)
/// acting on an illuminated window starting at chain site `first_site`.
inline FExpectation expectation_F(const EDState& st, int first_site,
                                  const std::vector<cd>& density, const std::vector<cd>& bond,
                                  double beta = 0.0) {
    const int M = st.basis.sites_M;
    const int K = int(density.size());
    if (K < 1) throw config_error("empty coupling window");
    if (bond.size() + 1 != density.size())
        throw config_error("bond coefficient list must have K-1 entries");
    if (first_site < 0 || first_site + K > M)
        throw config_error("coupling window does not fit inside the chain");

    const Eigen::Index dim = st.basis.dim();
    auto apply_op = [&](bool conjugate) {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
        std::vector<int> occ(M);
        for (Eigen::Index s = 0; s < dim; ++s) {
            const uint64_t key = st.basis.keys[s];
            for (int i = 0; i < M; ++i) occ[i] = st.basis.occupation(key, i);
            cd diag = 0.0;
            for (int a = 0; a < K; ++a) {
                const cd c = conjugate ? std::conj(density[a]) : density[a];
                diag += c * double(occ[first_site + a]);
            }
            out(s) += diag * st.psi(s);
            for (int b = 0; b + 1 < K; ++b) {
                const int i = first_site + b, j = i + 1;
                const cd c = conjugate ? std::conj(bond[b]) : bond[b];
                if (occ[j] > 0 && occ[i] < st.basis.cap) {
                    const uint64_t tkey = st.basis.shift_key(st.basis.shift_key(key, j, -1), i, 1);
                    out(st.basis.index_of(tkey)) +=
                        c * std::sqrt(double(occ[j]) * (occ[i] + 1)) * st.psi(s);
                }
                if (occ[i] > 0 && occ[j] < st.basis.cap) {
                    const uint64_t tkey = st.basis.shift_key(st.basis.shift_key(key, i, -1), j, 1);
                    out(st.basis.index_of(tkey)) +=
                        c * std::sqrt(double(occ[i]) * (occ[j] + 1)) * st.psi(s);
                }
            }
        }
        return out;
    };

    const Eigen::VectorXcd u = apply_op(false);  // F psi
    const Eigen::VectorXcd w = apply_op(true);   // F^+ psi
    const Eigen::VectorXcd psic = st.psi.cast<cd>();

    FExpectation r;
    r.mean_F = psic.dot(u);
    r.mean_FdagF = u.squaredNorm();
    const cd eb = std::exp(cd(0.0, -beta));
    const Eigen::VectorXcd x = 0.5 * (eb * u + std::conj(eb) * w);
    r.mean_X = psic.dot(x).real();
    r.mean_XX = x.squaredNorm();
    return r;
}

inline FExpectation expectation_F(const EDState& st, const optics::CouplingCoefficients& c,
                                  double beta = 0.0) {
    if (c.lattice_M != st.basis.sites_M)
        throw config_error("coupling window was computed for a different lattice size");
    return expectation_F(st, c.window_start, c.density, c.bond, beta);
}

inline FExpectation expectation_F(const EDState& st, const optics::StandingCoefficients& c,
                                  double beta = 0.0) {
    if (c.lattice_M != st.basis.sites_M)
        throw config_error("coupling window was computed for a different lattice size");
    std::vector<cd> d(c.density.begin(), c.density.end());
    std::vector<cd> b(c.bond.begin(), c.bond.end());
    return expectation_F(st, c.window_start, d, b, beta);
}

}  // namespace latscat::ed1d
