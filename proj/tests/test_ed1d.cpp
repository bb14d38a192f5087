#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "latscat/ed1d.hpp"

using namespace latscat;
using namespace latscat::ed1d;
using latscat::cd;

namespace {

Eigen::MatrixXd dense_of(const Eigen::SparseMatrix<double>& H) { return Eigen::MatrixXd(H); }

// Independent dense operator builder: walks the basis with explicit ladder
// algebra, no shared code with the library assembly.
Eigen::MatrixXcd dense_window_op(const BosonBasis& basis, int first, const std::vector<cd>& D,
                                 const std::vector<cd>& B) {
    const Eigen::Index dim = basis.dim();
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        auto occ = basis.occupations(s);
        cd diag = 0.0;
        for (size_t a = 0; a < D.size(); ++a) diag += D[a] * double(occ[first + a]);
        F(s, s) += diag;
        for (size_t b = 0; b < B.size(); ++b) {
            const int i = first + int(b), j = i + 1;
            for (auto [from, to] : {std::pair{j, i}, std::pair{i, j}}) {
                if (occ[from] == 0 || occ[to] >= basis.cap) continue;
                auto occ2 = occ;
                --occ2[from];
                ++occ2[to];
                uint64_t key = 0;
                for (int m = 0; m < basis.sites_M; ++m)
                    key |= uint64_t(occ2[m]) << ((basis.sites_M - 1 - m) * basis.bits_per_site);
                F(basis.index_of(key), s) +=
                    B[b] * std::sqrt(double(occ[from]) * (occ[to] + 1));
            }
        }
    }
    return F;
}

Eigen::MatrixXd number_op(const BosonBasis& basis) {
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (Eigen::Index s = 0; s < basis.dim(); ++s) {
        auto occ = basis.occupations(s);
        double tot = 0;
        for (int v : occ) tot += v;
        N(s, s) = tot;
    }
    return N;
}

}  // namespace

TEST_CASE("occupation basis enumeration matches hand counting") {
    auto b = build_basis(2, 2, 2);
    REQUIRE(b.dim() == 3);
    REQUIRE(b.occupations(0) == std::vector<int>{2, 0});
    REQUIRE(b.occupations(1) == std::vector<int>{1, 1});
    REQUIRE(b.occupations(2) == std::vector<int>{0, 2});

    REQUIRE(build_basis(3, 3, 3).dim() == 10);
    REQUIRE(build_basis(8, 8, 8).dim() == 6435);
    REQUIRE(build_basis(3, 3, 1).dim() == 1);

    // every key maps back to its own index
    auto big = build_basis(6, 4, 4);
    for (Eigen::Index i = 0; i < big.dim(); ++i) REQUIRE(big.index_of(big.keys[i]) == i);
}

TEST_CASE("unrestricted basis enumerates every filling") {
    auto b = build_basis(2, -1, 1);
    REQUIRE(b.dim() == 4);
    REQUIRE(b.occupations(0) == std::vector<int>{1, 1});
    REQUIRE(b.occupations(1) == std::vector<int>{1, 0});
    REQUIRE(b.occupations(2) == std::vector<int>{0, 1});
    REQUIRE(b.occupations(3) == std::vector<int>{0, 0});
    REQUIRE(build_basis(4, -1, 3).dim() == 256);
}

TEST_CASE("chain validation rejects out-of-range requests") {
    ChainSpec s;
    s.sites_M = 14;
    REQUIRE_THROWS_AS(s.validate(), config_error);
    s.sites_M = 12;
    s.bosons_N = 16;
    REQUIRE_THROWS_AS(s.validate(), config_error);  // sector dimension above 5e6
    s.bosons_N = 8;
    s.n_cap = 9;
    REQUIRE_THROWS_AS(s.validate(), config_error);  // cap above particle number
    s.n_cap = -1;
    s.interaction_U = -1.0;
    REQUIRE_THROWS_AS(s.validate(), config_error);
    s.interaction_U = 1.0;
    s.sites_M = 2;
    s.boundary = Boundary::periodic;
    REQUIRE_THROWS_AS(s.validate(), config_error);
    REQUIRE_THROWS_AS(build_basis(3, 7, 2), config_error);  // cap*M < N
}

TEST_CASE("two-site free chain reproduces the dense spectrum") {
    ChainSpec s;
    s.sites_M = 2;
    s.bosons_N = 2;
    s.hopping_J = 1.0;
    s.interaction_U = 0.0;
    auto st = ground_state(s);

    // hand-built matrix in the (2,0),(1,1),(0,2) basis
    Eigen::MatrixXd Href(3, 3);
    const double r2 = std::sqrt(2.0);
    Href << 0, -r2, 0, -r2, 0, -r2, 0, -r2, 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Href);
    REQUIRE(es.eigenvalues()(0) == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(es.eigenvalues()(1) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(es.eigenvalues()(2) == Catch::Approx(2.0).margin(1e-12));

    REQUIRE(dense_of(hamiltonian(s, st.basis)).isApprox(Href, 1e-14));
    REQUIRE(st.energy == Catch::Approx(-2.0).margin(1e-10));
    REQUIRE(st.gap == Catch::Approx(2.0).margin(1e-8));
    Eigen::VectorXd ref = es.eigenvectors().col(0);
    if (ref(1) < 0) ref = -ref;  // library fixes the dominant amplitude positive
    REQUIRE((st.psi - ref).norm() < 1e-10);
}

TEST_CASE("Hamiltonian is symmetric with disorder and periodic wrap") {
    ChainSpec s;
    s.sites_M = 5;
    s.bosons_N = 4;
    s.hopping_J = 0.9;
    s.interaction_U = 1.7;
    s.boundary = Boundary::periodic;
    s.disorder = QuasiperiodicDisorder{0.8, 0.77, 0.15};
    s.n_cap = 4;
    auto basis = build_basis(s.sites_M, s.bosons_N, s.n_cap);
    Eigen::MatrixXd H = dense_of(hamiltonian(s, basis));
    REQUIRE((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hamiltonian commutes with the total number operator") {
    ChainSpec s;
    s.sites_M = 4;
    s.bosons_N = -1;  // unrestricted space makes the commutator test meaningful
    s.n_cap = 3;
    s.hopping_J = 1.1;
    s.interaction_U = 2.3;
    s.disorder = QuasiperiodicDisorder{0.5, 0.77, 0.4};
    auto basis = build_basis(s.sites_M, s.bosons_N, s.n_cap);
    auto H = hamiltonian(s, basis);
    Eigen::MatrixXd N = number_op(basis);

    std::mt19937_64 rng(20260823u);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd v(basis.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
        v.normalize();
        Eigen::VectorXd comm = H * (N * v) - N * (H * v);
        REQUIRE(comm.norm() < 1e-10);
    }
}

TEST_CASE("hard-core limit kills density fluctuations") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 1.0;
    s.interaction_U = 1e6;
    auto st = ground_state(s, false);
    auto t = correlations(st);
    REQUIRE(t.dd.cwiseAbs().maxCoeff() < 1e-6);
    for (int i = 0; i < 8; ++i) REQUIRE(t.density(i) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("free periodic chain matches the condensate binomial statistics") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 1.0;
    s.interaction_U = 0.0;
    s.boundary = Boundary::periodic;
    auto st = ground_state(s);
    REQUIRE(st.energy == Catch::Approx(-2.0 * 8).margin(1e-8));  // N eps(0) = -2JN
    REQUIRE_FALSE(st.degenerate);
    auto t = correlations(st);
    // all bosons occupy the uniform orbital: site counts are binomial(N, 1/M)
    const double n = 1.0, M = 8.0;
    for (int i = 0; i < 8; ++i) {
        REQUIRE(t.density(i) == Catch::Approx(1.0).margin(1e-8));
        REQUIRE(t.dd(i, i) == Catch::Approx(n * (1.0 - 1.0 / M)).margin(1e-8));
        for (int j = 0; j < 8; ++j)
            if (j != i) REQUIRE(t.dd(i, j) == Catch::Approx(-n / M).margin(1e-8));
    }
}

TEST_CASE("deep insulator has sub-site phase correlation length") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 0.5;
    s.interaction_U = 10.0;  // U/2J = 10
    auto st = ground_state(s, false);
    auto t = correlations(st);
    // successive distance ratios from a bulk site decay faster than exp(-1)
    for (int d = 1; d <= 2; ++d) {
        const double near = std::abs(t.sp(2, 2 + d));
        const double far = std::abs(t.sp(2, 2 + d + 1));
        REQUIRE(far / near < std::exp(-1.0));
    }
}

TEST_CASE("correlation tables satisfy exact sector identities") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 1.0;
    s.interaction_U = 6.0;
    s.disorder = QuasiperiodicDisorder{0.5, 0.77, 0.0};
    auto st = ground_state(s);
    REQUIRE(std::abs(st.psi.norm() - 1.0) < 1e-12);
    REQUIRE(st.residual <= 1e-10);
    REQUIRE(st.gap >= 0.0);
    auto t = correlations(st);
    REQUIRE(std::abs(t.density.sum() - 8.0) < 1e-10);
    REQUIRE((t.dd - t.dd.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((t.sp - t.sp.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < 8; ++i) {
        REQUIRE(t.dd(i, i) >= 0.0);
        REQUIRE(std::abs(t.dd.row(i).sum()) < 1e-10);  // fixed N forces zero row sums
        REQUIRE(t.sp(i, i) == Catch::Approx(t.density(i)).margin(1e-12));
    }
}

TEST_CASE("quasiperiodic field pins a single immobile particle") {
    ChainSpec s;
    s.sites_M = 4;
    s.bosons_N = 1;
    s.hopping_J = 0.0;
    s.interaction_U = 1.0;
    s.n_cap = 1;
    s.disorder = QuasiperiodicDisorder{2.0, 0.77, 0.3};
    auto st = ground_state(s, false);
    double emin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        emin = std::min(emin, 2.0 * std::cos(2.0 * pi * 0.77 * i + 0.3));
    REQUIRE(st.energy == Catch::Approx(emin).margin(1e-12));
}

TEST_CASE("ground state is deterministic across repeated runs") {
    ChainSpec s;
    s.sites_M = 6;
    s.bosons_N = 6;
    s.hopping_J = 1.0;
    s.interaction_U = 4.0;
    auto a = ground_state(s, false);
    auto b = ground_state(s, false);
    REQUIRE(a.energy == b.energy);
    REQUIRE((a.psi - b.psi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("uniform window operator reduces to the particle number") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 1.0;
    s.interaction_U = 6.0;
    auto st = ground_state(s, false);
    std::vector<cd> D(8, cd(1.0, 0.0)), B(7, cd(0.0, 0.0));
    auto r = expectation_F(st, 0, D, B);
    REQUIRE(r.mean_F.real() == Catch::Approx(8.0).margin(1e-10));
    REQUIRE(std::abs(r.mean_F.imag()) < 1e-12);
    REQUIRE(r.mean_FdagF == Catch::Approx(64.0).margin(1e-10));
}

TEST_CASE("alternating bond operator on the insulator is purely quantum") {
    ChainSpec s;
    s.sites_M = 8;
    s.bosons_N = 8;
    s.hopping_J = 1.0;
    s.interaction_U = 1e6;
    auto st = ground_state(s, false);
    std::vector<cd> D(8, cd(0.0, 0.0)), B(7);
    for (int b = 0; b < 7; ++b) B[b] = cd(b % 2 == 0 ? 1.0 : -1.0, 0.0);
    auto r = expectation_F(st, 0, D, B);
    REQUIRE(std::abs(r.mean_F) < 1e-4);
    // each bond contributes 2 n (n+1) = 4 on the unit-filling insulator
    REQUIRE(r.mean_FdagF == Catch::Approx(28.0).epsilon(1e-3));
    REQUIRE(r.mean_FdagF > 1.0);
}

TEST_CASE("window expectations match a dense operator oracle") {
    ChainSpec s;
    s.sites_M = 4;
    s.bosons_N = 2;
    s.hopping_J = 0.8;
    s.interaction_U = 1.9;
    s.n_cap = 2;
    auto st = ground_state(s, false);

    std::mt19937_64 rng(77002u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const int first = trial % 2, K = 3;
        std::vector<cd> D(K), B(K - 1);
        for (auto& c : D) c = cd(uni(rng), uni(rng));
        for (auto& c : B) c = cd(uni(rng), uni(rng));
        const double beta = uni(rng) * pi;

        auto r = expectation_F(st, first, D, B, beta);

        Eigen::MatrixXcd F = dense_window_op(st.basis, first, D, B);
        Eigen::VectorXcd psi = st.psi.cast<cd>();
        const cd mF = psi.dot(F * psi);
        const double FdF = (F * psi).squaredNorm();
        const cd eb = std::exp(cd(0, -beta));
        Eigen::MatrixXcd X = 0.5 * (eb * F + std::conj(eb) * F.adjoint());
        const double mX = psi.dot(X * psi).real();
        const double mXX = (X * psi).squaredNorm();

        REQUIRE(std::abs(r.mean_F - mF) < 1e-10);
        REQUIRE(r.mean_FdagF == Catch::Approx(FdF).margin(1e-10));
        REQUIRE(r.mean_X == Catch::Approx(mX).margin(1e-10));
        REQUIRE(r.mean_XX == Catch::Approx(mXX).margin(1e-10));
        REQUIRE(r.mean_FdagF >= std::norm(r.mean_F) - 1e-12);
        REQUIRE(r.mean_XX >= r.mean_X * r.mean_X - 1e-12);
    }
}

TEST_CASE("window bounds and size mismatches are rejected") {
    ChainSpec s;
    s.sites_M = 4;
    s.bosons_N = 2;
    s.n_cap = 2;
    auto st = ground_state(s, false);
    std::vector<cd> D(3, cd(1, 0)), B(2, cd(0, 0));
    REQUIRE_THROWS_AS(expectation_F(st, 2, D, B), config_error);   // spills past the edge
    REQUIRE_THROWS_AS(expectation_F(st, 0, D, D), config_error);   // wrong bond count
    REQUIRE_THROWS_AS(expectation_F(st, 0, {}, {}), config_error);
}
