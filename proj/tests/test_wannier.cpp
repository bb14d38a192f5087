#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "latscat/wannier.hpp"

using namespace latscat;
using namespace latscat::wannier;

namespace {

// Simpson integration, independent of the trapezoid rule used by the library.
double simpson(const std::vector<double>& f, double dx) {
    REQUIRE(f.size() % 2 == 1);
    double s = f.front() + f.back();
    for (size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * dx / 3.0;
}

// Real-space hopping integral -\int w(x) [-(1/pi^2) d^2/dx^2 + V] w(x-d) dx
// with a 4th-order finite-difference Laplacian. Oracle for the band width.
double hopping_integral(const WannierBasis& b, double V0) {
    const int n = static_cast<int>(b.w.size());
    const int shift = b.points_per_period;  // one period
    const double dx2 = b.dx * b.dx;
    std::vector<double> integrand(static_cast<size_t>(n), 0.0);
    for (int i = 2; i < n - 2; ++i) {
        const double lap = (-b.w[static_cast<size_t>(i - 2)] + 16.0 * b.w[static_cast<size_t>(i - 1)] -
                            30.0 * b.w[static_cast<size_t>(i)] + 16.0 * b.w[static_cast<size_t>(i + 1)] -
                            b.w[static_cast<size_t>(i + 2)]) /
                           (12.0 * dx2);
        const double s = std::sin(pi * b.grid[static_cast<size_t>(i)]);
        const double hw = -lap / (pi * pi) + V0 * s * s * b.w[static_cast<size_t>(i)];
        const int j = i - shift;
        if (j >= 0) integrand[static_cast<size_t>(i)] = hw * b.w[static_cast<size_t>(j)];
    }
    return -trapezoid(integrand, b.dx);
}

}  // namespace

TEST_CASE("free particle band is quadratic", "[wannier][bloch]") {
    auto bloch = solve_bloch_band(LatticePotential{0.0, 1.0});
    for (size_t j = 0; j < bloch.q.size(); ++j) {
        const double qk = bloch.q[j] / pi;  // quasimomentum in units of the lattice wavevector
        REQUIRE(bloch.band[j] == Catch::Approx(qk * qk).margin(1e-12));
    }
}

TEST_CASE("quasimomentum grid spans the Brillouin zone symmetrically", "[wannier][bloch]") {
    auto bloch = solve_bloch_band(LatticePotential{5.0, 1.0});
    const size_t nq = bloch.q.size();
    REQUIRE(nq >= 32);
    for (size_t j = 0; j < nq; ++j) {
        REQUIRE(std::abs(bloch.q[j]) < pi);
        REQUIRE(bloch.q[j] == Catch::Approx(-bloch.q[nq - 1 - j]).margin(1e-14));
        REQUIRE(bloch.band[j] == Catch::Approx(bloch.band[nq - 1 - j]).margin(1e-12));
    }
}

TEST_CASE("band width matches the real-space hopping integral", "[wannier][bloch]") {
    LatticePotential pot{5.0, 1.0};
    auto basis = build_wannier(solve_bloch_band(pot));
    const double J = hopping_integral(basis, pot.depth_V0);
    const double W = bandwidth(pot);
    REQUIRE(J > 0.0);
    REQUIRE(W == Catch::Approx(4.0 * J).epsilon(0.02));
}

TEST_CASE("band width decreases monotonically with depth", "[wannier][bloch]") {
    double prev = bandwidth(LatticePotential{3.0, 1.0});
    for (double V0 : {5.0, 10.0, 20.0, 40.0}) {
        const double W = bandwidth(LatticePotential{V0, 1.0});
        REQUIRE(W < prev);
        REQUIRE(W > 0.0);
        prev = W;
    }
}

TEST_CASE("cutoff adequacy warning", "[wannier][bloch]") {
    REQUIRE(solve_bloch_band(LatticePotential{25.0, 1.0}, 21).warnings.empty());
    REQUIRE_FALSE(solve_bloch_band(LatticePotential{25.0, 1.0}, 11).warnings.empty());
}

TEST_CASE("bloch preconditions rejected", "[wannier][errors]") {
    REQUIRE_THROWS_AS(solve_bloch_band(LatticePotential{-1.0, 1.0}), config_error);
    REQUIRE_THROWS_AS(solve_bloch_band(LatticePotential{5.0, 0.0}), config_error);
    REQUIRE_THROWS_AS(solve_bloch_band(LatticePotential{5.0, 1.0}, 12), config_error);
    REQUIRE_THROWS_AS(solve_bloch_band(LatticePotential{5.0, 1.0}, 9), config_error);
    REQUIRE_THROWS_AS(solve_bloch_band(LatticePotential{5.0, 1.0}, 21, 16), config_error);
}

TEST_CASE("wannier orbital is normalized, even, orthogonal to its neighbour", "[wannier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    const int n = static_cast<int>(basis.w.size());

    std::vector<double> w2(basis.w.size());
    for (size_t i = 0; i < basis.w.size(); ++i) w2[i] = basis.w[i] * basis.w[i];
    REQUIRE(trapezoid(w2, basis.dx) == Catch::Approx(1.0).margin(1e-8));

    for (int i = 0; i < n; ++i)
        REQUIRE(basis.w[static_cast<size_t>(i)] ==
                Catch::Approx(basis.w[static_cast<size_t>(n - 1 - i)]).margin(1e-13));

    // \int w(x) w(x-d) dx = 0: exact index shift by one period.
    std::vector<double> prod(basis.w.size(), 0.0);
    for (int i = basis.points_per_period; i < n; ++i)
        prod[static_cast<size_t>(i)] =
            basis.w[static_cast<size_t>(i)] * basis.w[static_cast<size_t>(i - basis.points_per_period)];
    REQUIRE(trapezoid(prod, basis.dx) == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("wannier tails decay exponentially", "[wannier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    double peak = 0.0;
    for (double v : basis.w) peak = std::max(peak, std::abs(v));
    const double at3 = std::abs(basis.value_w(3.0));
    REQUIRE(at3 < 1e-3 * peak);
    REQUIRE(std::abs(basis.value_w(5.0)) < at3);
}

TEST_CASE("grid too short to contain tails is an error", "[wannier][errors]") {
    auto bloch = solve_bloch_band(LatticePotential{3.0, 1.0});
    REQUIRE_THROWS_AS(build_wannier(bloch, 256, 11), numerical_error);
    REQUIRE_NOTHROW(build_wannier(bloch));  // auto-sized grid absorbs the slow decay
    REQUIRE_THROWS_AS(build_wannier(bloch, 256, 9), config_error);
    REQUIRE_THROWS_AS(build_wannier(bloch, 255, 13), config_error);
}

TEST_CASE("fourier transform endpoints", "[wannier][fourier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    REQUIRE(fourier_overlap(basis, Overlap::W0, 0.0) == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(fourier_overlap(basis, Overlap::W1, 0.0) == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("fourier transform against an independent quadrature", "[wannier][fourier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    for (double k : {2.0 * pi, pi, 0.37 * pi, 1.618 * pi}) {
        std::vector<double> f0(basis.W0.size()), f1(basis.W1.size());
        for (size_t i = 0; i < f0.size(); ++i) {
            const double c = std::cos(k * basis.grid[i]);
            f0[i] = basis.W0[i] * c;
            f1[i] = basis.W1[i] * c;
        }
        REQUIRE(fourier_overlap(basis, Overlap::W0, k) ==
                Catch::Approx(simpson(f0, basis.dx)).margin(1e-6));
        REQUIRE(fourier_overlap(basis, Overlap::W1, k) ==
                Catch::Approx(simpson(f1, basis.dx)).margin(1e-6));
    }
}

TEST_CASE("fourier transforms are even and real", "[wannier][fourier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    for (double k : {0.3, 1.1, pi, 2.7, 2.0 * pi}) {
        REQUIRE(fourier_overlap(basis, Overlap::W0, k) ==
                Catch::Approx(fourier_overlap(basis, Overlap::W0, -k)).margin(1e-12));
        REQUIRE(fourier_overlap(basis, Overlap::W1, k) ==
                Catch::Approx(fourier_overlap(basis, Overlap::W1, -k)).margin(1e-12));
        // imaginary part of \int W e^{-ikx} dx vanishes by parity
        double im0 = 0.0, im1 = 0.0;
        for (size_t i = 0; i < basis.grid.size(); ++i) {
            im0 += basis.W0[i] * std::sin(-k * basis.grid[i]);
            im1 += basis.W1[i] * std::sin(-k * basis.grid[i]);
        }
        REQUIRE(std::abs(im0 * basis.dx) < 1e-10);
        REQUIRE(std::abs(im1 * basis.dx) < 1e-10);
    }
}

TEST_CASE("interference overlap is positive and below the density overlap", "[wannier][fourier]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    const double f1 = fourier_overlap(basis, Overlap::W1, pi);
    const double f0 = fourier_overlap(basis, Overlap::W0, pi);
    REQUIRE(f1 > 0.0);
    REQUIRE(f1 < f0);
    const double ratio = fourier_overlap(basis, Overlap::W0, 2.0 * pi) / fourier_overlap(basis, Overlap::W0, 0.0);
    REQUIRE(ratio > 0.0);
    REQUIRE(ratio < 1.0);
}

TEST_CASE("interference overlap shrinks with depth", "[wannier][fourier]") {
    double prev = 1.0;
    for (double V0 : {5.0, 10.0, 20.0, 40.0}) {
        auto basis = build_wannier(solve_bloch_band(LatticePotential{V0, 1.0}));
        const double f1 = fourier_overlap(basis, Overlap::W1, pi);
        REQUIRE(f1 > 0.0);
        REQUIRE(f1 < prev);
        prev = f1;
    }
}

TEST_CASE("deep lattice density overlap approaches the gaussian form", "[wannier][fourier]") {
    for (double V0 : {20.0, 30.0, 40.0}) {
        auto basis = build_wannier(solve_bloch_band(LatticePotential{V0, 1.0}));
        const double sigma = 1.0 / (pi * std::pow(V0, 0.25));
        for (double k : {0.5 * pi, pi, 1.5 * pi, 2.0 * pi}) {
            const double gauss = std::exp(-k * k * sigma * sigma / 4.0);
            REQUIRE(fourier_overlap(basis, Overlap::W0, k) == Catch::Approx(gauss).epsilon(0.05));
        }
    }
}

TEST_CASE("fourier lookup outside the table is an error", "[wannier][errors]") {
    auto basis = build_wannier(solve_bloch_band(LatticePotential{5.0, 1.0}));
    REQUIRE_THROWS_AS(fourier_overlap(basis, Overlap::W0, 5.0 * pi), config_error);
    REQUIRE_THROWS_AS(fourier_overlap(basis, Overlap::W1, -4.5 * pi), config_error);
    REQUIRE_NOTHROW(fourier_overlap(basis, Overlap::W0, 4.0 * pi));
}
