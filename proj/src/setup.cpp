#include "ring_ladder/setup.hpp"

#include <cmath>
#include <stdexcept>

namespace ring_ladder {

double k_gauss(const OpticalSetup& s) {
    if (s.wavelength_lambda <= 0 || s.focal_f <= 0)
        throw std::domain_error("k_gauss: nonpositive optics parameters");
    return 2.0 * M_PI * s.beam_sep_D / (s.wavelength_lambda * s.focal_f);
}

double lg_profile(double r, int l, double r0) {
    if (r0 <= 0 || l < 1) throw std::domain_error("lg_profile: bad l or r0");
    const double eps = std::sqrt(2.0) * r / r0;
    // f_l = sqrt(2/(pi l!)) eps^l exp(-eps^2); evaluate the log to dodge
    // overflow of l! and eps^l separately
    const double lg =
        0.5 * (std::log(2.0 / M_PI) - std::lgamma(l + 1.0)) +
        l * std::log(eps > 0 ? eps : 1e-300) - eps * eps;
    return eps > 0 ? std::exp(lg) : 0.0;
}

double peak_radius(int l, double r0) {
    // d/d eps [eps^l e^{-eps^2}] = 0  ->  eps = sqrt(l/2)
    return r0 * std::sqrt(l / 2.0) / std::sqrt(2.0);
}

double well_depth_scale(int l) {
    return std::exp(-0.5 * std::lgamma(l + 1.0));
}

double lattice_potential(double r, double phi, double z, const OpticalSetup& s) {
    const double fl = lg_profile(r, s.l, s.r0);
    const double kg = k_gauss(s);
    const double cl = std::cos(s.k_LG * z), cg = std::cos(kg * z);
    return 4.0 * s.E0_sq *
           (fl * fl * cl * cl + cg * cg + 2.0 * fl * cl * cg * std::cos(s.l * phi));
}

double ring_spacing(const OpticalSetup& s) {
    if (s.beam_sep_D == 0) throw std::domain_error("ring_spacing: D = 0");
    return s.wavelength_lambda * s.focal_f / s.beam_sep_D;
}

TunnelingResult inter_ring_tunneling(double V0, double d, double m, double hbar) {
    if (V0 <= 0 || d <= 0 || m <= 0 || hbar <= 0)
        throw std::domain_error("inter_ring_tunneling: nonpositive input");
    const double k = M_PI / d;  // z-lattice wave vector for the validity check
    const double Er = hbar * hbar * k * k / (2.0 * m);
    TunnelingResult out;
    out.shallow_warning = V0 < 5.0 * Er;
    out.g = 4.0 * std::sqrt(hbar / std::sqrt(2.0 * m)) *
            std::pow(V0, 0.75) / std::sqrt(d) *
            std::exp(-std::sqrt(2.0 * m * V0) * d / (M_PI * hbar));
    return out;
}

SystemParams reduce_params(const MicroParams& micro) {
    if (micro.g == 0) throw std::domain_error("reduce_params: g = 0");
    SystemParams p;
    const double lambda = micro.U / (2.0 * micro.g);
    const double rho = micro.N_T / micro.N;
    p.lambda_rho = lambda * rho;
    p.delta = (2.0 * micro.t * (std::cos(micro.Phi_a / micro.N) -
                                std::cos(micro.Phi_b / micro.N)) +
               micro.mu_b - micro.mu_a) /
              (2.0 * micro.g);
    p.omega0 = 2.0 * micro.g;
    p.provenance = micro;
    return p;
}

}  // namespace ring_ladder
