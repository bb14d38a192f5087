#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "latscat/gutzwiller.hpp"

using namespace latscat;
using namespace latscat::gutzwiller;

namespace {

constexpr double kFt1Pi = 0.0457562533872;   // F[W1](pi/d) at V0 = 5, from the basis tables
constexpr double kFt1_2Pi = 0.0343316291289;  // F[W1](2 pi/d)

BoseHubbardParams params_1d(double u_over_zj, double mu_over_zj) {
    BoseHubbardParams p;
    p.hopping_J = 0.5;  // z = 2, so zJ = 1 and u_over_zj is U directly
    p.z = 2;
    p.interaction_U = u_over_zj;
    p.mu = mu_over_zj;
    return p;
}

GutzwillerState unit_density_state(double u_over_zj) {
    BoseHubbardParams p = params_1d(u_over_zj, 0.0);
    p.mu = find_mu_for_density(p, 1.0);
    return solve_gutzwiller(p);
}

// Exact <B> and Var(B) for L identical single-site states with bond operator
// B = sum_b J_b (b_i^dag b_j + b_j^dag b_i), by dense tensor contraction.
struct BondMoments {
    double mean, var;
};

BondMoments bond_moments(const Eigen::VectorXd& site_f, const std::vector<double>& bondJ, int L,
                         bool ring) {
    const int nf = static_cast<int>(site_f.size());
    const int nd = nf + 1;  // room for one raising per site
    size_t dim = 1;
    for (int s = 0; s < L; ++s) dim *= static_cast<size_t>(nd);
    std::vector<size_t> stride(static_cast<size_t>(L), 1);
    for (int s = 1; s < L; ++s) stride[static_cast<size_t>(s)] = stride[static_cast<size_t>(s - 1)] * nd;

    std::vector<double> psi(dim, 0.0), v(dim, 0.0);
    for (size_t idx = 0; idx < dim; ++idx) {
        double amp = 1.0;
        size_t t = idx;
        for (int s = 0; s < L && amp != 0.0; ++s) {
            const int n = static_cast<int>(t % nd);
            t /= nd;
            amp *= (n < nf) ? site_f(n) : 0.0;
        }
        psi[idx] = amp;
    }

    const int nbonds = ring ? L : L - 1;
    REQUIRE(static_cast<int>(bondJ.size()) == nbonds);
    for (size_t idx = 0; idx < dim; ++idx) {
        if (psi[idx] == 0.0) continue;
        for (int b = 0; b < nbonds; ++b) {
            const int i = b, j = (b + 1) % L;
            for (int dir = 0; dir < 2; ++dir) {
                const int up = dir ? j : i, dn = dir ? i : j;  // b_up^dag b_dn
                const int n_up = static_cast<int>((idx / stride[static_cast<size_t>(up)]) % nd);
                const int n_dn = static_cast<int>((idx / stride[static_cast<size_t>(dn)]) % nd);
                if (n_dn == 0 || n_up + 1 >= nd) continue;
                const size_t tgt = idx + stride[static_cast<size_t>(up)] - stride[static_cast<size_t>(dn)];
                v[tgt] += bondJ[static_cast<size_t>(b)] * std::sqrt(n_dn * (n_up + 1.0)) * psi[idx];
            }
        }
    }
    double mean = 0.0, sq = 0.0;
    for (size_t idx = 0; idx < dim; ++idx) {
        mean += psi[idx] * v[idx];
        sq += v[idx] * v[idx];
    }
    return {mean, sq - mean * mean};
}

GutzwillerState truncated(const GutzwillerState& s, int n_keep) {
    const int n = std::min(n_keep, s.n_cutoff);
    return make_state(s.f.head(n + 1));
}

}  // namespace

TEST_CASE("near-coherent ground state at vanishing interaction", "[gutzwiller][solver]") {
    BoseHubbardParams p = params_1d(1e-7, 0.0);
    p.mu = find_mu_for_density(p, 1.0);
    auto s = solve_gutzwiller(p);
    REQUIRE(s.converged);
    REQUIRE(s.density == Catch::Approx(1.0).margin(1e-4));
    REQUIRE(std::abs(s.b2 - s.phi * s.phi) < 1e-6);
    REQUIRE(std::abs(s.density - s.phi * s.phi) < 1e-6);
    REQUIRE(matter_quadrature_variance(s, 0.0) == Catch::Approx(0.25).margin(1e-6));
    REQUIRE(matter_quadrature_variance(s, pi / 2) == Catch::Approx(0.25).margin(1e-6));
}

TEST_CASE("zero hopping gives the Fock ground state", "[gutzwiller][solver]") {
    BoseHubbardParams p;
    p.hopping_J = 0.0;
    p.interaction_U = 1.0;
    p.mu = 0.5;
    auto s = solve_gutzwiller(p);
    REQUIRE(s.phi == 0.0);
    REQUIRE(s.density == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(s.b2 == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(s.nn == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(matter_quadrature_variance(s, 0.0) == Catch::Approx(0.75).margin(1e-12));
    REQUIRE(matter_quadrature_variance(s, pi / 2) == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("unit lobe tip sits at U/zJ = 3 + 2 sqrt(2)", "[gutzwiller][solver]") {
    const double tip = 3.0 + 2.0 * std::sqrt(2.0);
    auto phi_at = [](double u_over_zj) {
        BoseHubbardParams p = params_1d(u_over_zj, (std::sqrt(2.0) - 1.0) * u_over_zj);
        return solve_gutzwiller(p).phi;
    };
    double lo = 4.5, hi = 7.0;
    REQUIRE(phi_at(lo) > 1e-6);
    REQUIRE(phi_at(hi) < 1e-6);
    for (int k = 0; k < 40; ++k) {
        const double mid = 0.5 * (lo + hi);
        (phi_at(mid) > 1e-6 ? lo : hi) = mid;
    }
    REQUIRE(0.5 * (lo + hi) == Catch::Approx(tip).epsilon(0.01));
}

TEST_CASE("order parameter decreases toward the transition", "[gutzwiller][solver]") {
    double prev = 2.0;
    for (double u : {0.5, 2.0, 4.0, 5.5}) {
        auto s = unit_density_state(u);
        REQUIRE(s.phi >= 0.0);
        REQUIRE(s.phi < prev);
        prev = s.phi;
    }
}

TEST_CASE("state invariants hold across the sweep", "[gutzwiller][solver]") {
    for (double u : {0.3, 1.64, 3.0, 5.0, 8.0}) {
        auto s = unit_density_state(u);
        REQUIRE(s.f.squaredNorm() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(s.f(s.n_cutoff) * s.f(s.n_cutoff) < 1e-8);
        REQUIRE(s.phi >= 0.0);
        REQUIRE(s.converged);
    }
}

TEST_CASE("quadrature variance matches the closed form at 0 and pi/2", "[gutzwiller][quadrature]") {
    for (double u : {0.5, 3.0, 8.0}) {
        auto s = unit_density_state(u);
        const double dn = s.density - s.phi * s.phi;
        const double db = s.b2 - s.phi * s.phi;
        REQUIRE(matter_quadrature_variance(s, 0.0) ==
                Catch::Approx(0.25 + (dn + db) / 2.0).margin(1e-12));
        REQUIRE(matter_quadrature_variance(s, pi / 2) ==
                Catch::Approx(0.25 + (dn - db) / 2.0).margin(1e-12));
    }
}

TEST_CASE("amplitude squeezing appears between the coherent and Fock limits",
          "[gutzwiller][quadrature]") {
    bool squeezed = false;
    for (double u = 0.5; u <= 5.5; u += 0.25) {
        auto s = unit_density_state(u);
        const double v0 = matter_quadrature_variance(s, 0.0);
        const double v1 = matter_quadrature_variance(s, pi / 2);
        REQUIRE(std::sqrt(v0 * v1) >= 0.25 - 1e-9);  // Heisenberg floor
        if (v0 < 0.25 - 1e-4 && v1 > 0.25 + 1e-4) squeezed = true;
    }
    REQUIRE(squeezed);
}

TEST_CASE("diffraction-minimum intensity formula limits", "[gutzwiller][intensity]") {
    // Fock state: bracket = 0 + 1*(1+1) = 2
    BoseHubbardParams p;
    p.hopping_J = 0.0;
    p.interaction_U = 1.0;
    p.mu = 0.5;
    auto mi = solve_gutzwiller(p);
    const double ctilde = 2.0 * 1.0 * (25 - 1) * kFt1Pi * kFt1Pi;
    REQUIRE(min_intensity(mi, 25, 1.0, kFt1Pi) == Catch::Approx(2.0 * ctilde).margin(1e-12));

    auto sf = unit_density_state(1e-7);
    REQUIRE(min_intensity(sf, 25, 1.0, kFt1Pi) < 1e-6 * ctilde);

    // more light from the insulator than from the superfluid at equal density
    REQUIRE(min_intensity(mi, 25, 1.0, kFt1Pi) > min_intensity(unit_density_state(0.01), 25, 1.0, kFt1Pi));
}

TEST_CASE("intensity equals the bond-operator variance per illuminated bond",
          "[gutzwiller][intensity][oracle]") {
    // The formula is the bulk variance of the alternating-sign bond operator,
    // normalized to K-1 bonds: an L-site ring (uniform bulk, <B> = 0) scaled
    // by (K-1)/L reproduces it exactly. The state and the formula use the
    // same truncated amplitudes, so the identity holds to machine precision.
    std::mt19937 rng(20260823u);
    std::uniform_real_distribution<double> u_dist(0.2, 8.0), mu_dist(-0.5, 3.0);
    const int L = 6, K = 6;
    std::vector<double> bonds(L);
    for (int b = 0; b < L; ++b) bonds[static_cast<size_t>(b)] = (b % 2 ? -kFt1Pi : kFt1Pi);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = solve_gutzwiller(params_1d(u_dist(rng), mu_dist(rng)));
        auto t = truncated(s, 8);
        auto bm = bond_moments(t.f, bonds, L, true);
        REQUIRE(std::abs(bm.mean) < 1e-10);  // alternating ring: means cancel
        const double formula = min_intensity(t, K, 1.0, kFt1Pi);
        const double oracle = bm.var * (K - 1) / static_cast<double>(L);
        REQUIRE(std::abs(formula - oracle) <= 1e-10 * std::max(1e-4, std::abs(oracle)));
    }
}

TEST_CASE("quadrature mean equals the uniform-bond operator mean", "[gutzwiller][quadrature][oracle]") {
    std::mt19937 rng(77001u);
    std::uniform_real_distribution<double> u_dist(0.2, 5.5), mu_dist(0.0, 2.0);
    const int L = 6;
    std::vector<double> bonds(static_cast<size_t>(L - 1), 0.5 * kFt1_2Pi);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = solve_gutzwiller(params_1d(u_dist(rng), mu_dist(rng)));
        auto t = truncated(s, 8);
        auto bm = bond_moments(t.f, bonds, L, false);
        const double formula = max_quadrature_mean(t, L, kFt1_2Pi);
        REQUIRE(std::abs(formula - bm.mean) <= 1e-10 * std::max(1e-4, std::abs(bm.mean)));
    }
}

TEST_CASE("quadrature mean limits", "[gutzwiller][quadrature]") {
    BoseHubbardParams p;
    p.hopping_J = 0.0;
    p.interaction_U = 1.0;
    p.mu = 0.5;
    REQUIRE(max_quadrature_mean(solve_gutzwiller(p), 25, kFt1_2Pi) == 0.0);

    auto sf = unit_density_state(1e-6);
    REQUIRE(max_quadrature_mean(sf, 25, kFt1_2Pi) == Catch::Approx(24.0 * kFt1_2Pi).epsilon(1e-4));
}

TEST_CASE("fixed point is independent of the initialization", "[gutzwiller][solver]") {
    BoseHubbardParams p = params_1d(3.0, 0.0);
    p.mu = find_mu_for_density(p, 1.0);
    auto ref = solve_gutzwiller(p);
    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> init(0.01, 2.0);
    for (int k = 0; k < 10; ++k) {
        auto s = solve_gutzwiller(p, 1e-12, 500, init(rng));
        REQUIRE(s.phi == Catch::Approx(ref.phi).margin(1e-8));
        REQUIRE(s.energy == Catch::Approx(ref.energy).margin(1e-8));
    }
}

TEST_CASE("insulating side collapses to the zero branch", "[gutzwiller][solver]") {
    auto s = solve_gutzwiller(params_1d(10.0, 4.0));  // mu/U = 0.4, deep in the n = 1 lobe
    REQUIRE(s.phi == 0.0);
    REQUIRE(s.residual == 0.0);
    REQUIRE(s.density == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("solver preconditions and failure modes", "[gutzwiller][errors]") {
    BoseHubbardParams bad = params_1d(-1.0, 0.0);
    REQUIRE_THROWS_AS(solve_gutzwiller(bad), config_error);
    bad = params_1d(1.0, 0.0);
    bad.z = 3;
    REQUIRE_THROWS_AS(solve_gutzwiller(bad), config_error);
    bad.z = 2;
    bad.n_max = 5;
    REQUIRE_THROWS_AS(solve_gutzwiller(bad), config_error);

    BoseHubbardParams p = params_1d(3.0, 1.0);
    REQUIRE_THROWS_AS(solve_gutzwiller(p, 1e-9), config_error);  // tolerance too loose

    try {
        solve_gutzwiller(p, 1e-12, 2, 0.5, false);  // no fallback, far too few iterations
        FAIL("expected non-convergence");
    } catch (const numerical_error& e) {
        REQUIRE(std::string(e.what()).find("residual") != std::string::npos);
    }

    BoseHubbardParams huge = params_1d(1.0, 400.0);  // density ~ 400: beyond any cutoff
    REQUIRE_THROWS_AS(solve_gutzwiller(huge, 1e-12, 30), numerical_error);

    REQUIRE_THROWS_AS(find_mu_for_density(p, -1.0), config_error);
    REQUIRE_THROWS_AS(min_intensity(solve_gutzwiller(p), 1, 1.0, kFt1Pi), config_error);
}
