// Mean-field sweep across the superfluid-insulator transition at unit density:
// photon number in the density-suppressed geometry and the two matter
// quadrature variances versus interaction strength. The insulator scatters
// more light than the superfluid, and the approach to it shows amplitude
// squeezing. CSV on stdout.
#include <cmath>
#include <cstdio>

#include "latscat/gutzwiller.hpp"
#include "latscat/wannier.hpp"

using namespace latscat;

int main() {
    const auto basis =
        wannier::build_wannier(wannier::solve_bloch_band(wannier::LatticePotential{5.0}));
    const double f1_pi = wannier::fourier_overlap(basis, wannier::Overlap::W1, pi);
    const int K = 25;
    const double ctilde = 2.0 * (K - 1) * f1_pi * f1_pi;  // |C| = 1

    std::printf("# unit density, z = 2, %d illuminated sites\n", K);
    std::printf("u_over_zj,order_parameter,intensity_over_Ctilde,var_amplitude,var_phase\n");
    for (int i = 0; i <= 59; ++i) {
        const double u = 0.2 + (12.0 - 0.2) * i / 59.0;
        gutzwiller::BoseHubbardParams p;
        p.hopping_J = 0.5;  // z J = 1
        p.z = 2;
        p.interaction_U = u;
        p.mu = gutzwiller::find_mu_for_density(p, 1.0);
        const auto st = gutzwiller::solve_gutzwiller(p);
        std::printf("%.4f,%.6f,%.6f,%.6f,%.6f\n", u, st.phi,
                    gutzwiller::min_intensity(st, K, 1.0, f1_pi) / ctilde,
                    gutzwiller::matter_quadrature_variance(st, 0.0),
                    gutzwiller::matter_quadrature_variance(st, pi / 2));
    }
    return 0;
}
