// Smallest end-to-end use of the library: band edges, launch angle and recoil force for a
// vertical dipole above biased InSb, in normalized and SI units.

#include <cstdio>

#include "recoil/recoil.hpp"

int main() {
    using namespace recoil;

    const PlasmaParams insb{0.4, 0.015, InSb::omega_p_rad_s()};
    const auto edges = characteristic_frequencies(insb);
    std::printf("omega_- = %.5f  omega_spp = %.5f  omega_+ = %.5f\n", edges.omega_minus, edges.omega_spp,
                edges.omega_plus);

    Emitter e;
    e.gamma_debye = 7900.0;
    e.d = 100e-9 / *insb.length_unit_m();  // 100 nm
    for (double w0 : {0.55, 0.7, 0.9}) {
        e.omega0 = w0;
        const ForceResult f = resonant_force(e, insb);
        const auto theta = emission_angle(w0, PlasmaParams{insb.omega_c, 0.0});
        std::printf("omega0 = %.2f  theta0 = %7.2f deg  F_x/F0 = %+.5f  F_x = %+.4g pN\n", w0,
                    theta ? *theta * 180.0 / pi : 0.0, f.F_tilde_x, f.F_tilde_x * *f.F0_SI * 1e12);
    }
}
