#pragma once

// Experimental-geometry layer: double-ring optical potential, ring spacing,
// inter-ring tunneling, and the reduction from microscopic ladder parameters
// to the dynamical set (lambda*rho, Delta, omega0).  Internal units: hbar = 1
// unless an explicit hbar is passed.

#include <optional>

namespace ring_ladder {

struct OpticalSetup {
    double E0_sq;             // intensity scale; well depth V0 = 4*E0_sq
    int l;                    // azimuthal index = sites per ring
    double k_LG;              // Laguerre-Gauss wave number
    double wavelength_lambda; // Gaussian beam wavelength
    double focal_f;           // lens focal length
    double beam_sep_D;        // distance between the Gaussian beams
    double mass_m;
    double r0;                // beam waist
};

struct MicroParams {
    double t;      // intra-ring tunneling
    double g;      // inter-ring tunneling
    double U;      // on-site interaction
    double mu_a, mu_b;
    double Phi_a, Phi_b;
    int N;         // sites per ring
    double N_T;    // total particle number
};

struct SystemParams {
    double lambda_rho;  // (U/2g)(N_T/N)
    double delta;       // drive
    double omega0;      // 2g
    std::optional<MicroParams> provenance;
};

double k_gauss(const OpticalSetup& s);            // 2 pi D / (lambda f)
double lg_profile(double r, int l, double r0);    // p = 0 radial profile f_l
double peak_radius(int l, double r0);             // argmax of f_l
double well_depth_scale(int l);                   // ~ sqrt(1/l!) scaling helper
double lattice_potential(double r, double phi, double z, const OpticalSetup& s);
double ring_spacing(const OpticalSetup& s);       // d = lambda f / D

struct TunnelingResult {
    double g;
    bool shallow_warning;  // V0 < 5 E_r with E_r = (pi/d)^2 hbar^2 / 2m
};
TunnelingResult inter_ring_tunneling(double V0, double d, double m,
                                     double hbar = 1.0);

SystemParams reduce_params(const MicroParams& micro);

}  // namespace ring_ladder
