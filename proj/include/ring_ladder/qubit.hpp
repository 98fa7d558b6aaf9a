#pragma once

// Effective two-angle potential of the coupled rings and the phonon bath it
// leaves behind: U(theta_a, theta_b), its minima/saddles (the qubit
// landscape), bath modes (omega_k, zeta_k), the admittance-like sum
// Y(omega_l), and the truncated imaginary-time kernel G(tau).

#include <complex>
#include <vector>

namespace ring_ladder {

struct QubitParams {
    double E_J;    // intra-ring Josephson scale (energy)
    double E_Jp;   // inter-ring scale (energy)
    double Phi_a = 0.0, Phi_b = 0.0;  // phase twists (radians)
    int N = 20;    // sites per ring, even, >= 4
    double U_int = 1.0;  // on-site interaction (energy)
    double beta = 1.0;   // inverse temperature (1/energy)
    int l_max = 1000;    // Matsubara truncation
};

void validate(const QubitParams& q);  // throws std::invalid_argument

// U = sum_{alpha=a,b} [E_J (theta_alpha - Phi_alpha)^2 / (2(N-1))
//     - E_J cos theta_alpha]
//     - E_Jp cos[theta_a - theta_b - ((N-2)/N)(Phi_a - Phi_b)]
// The quadratic confinement acts on the unwrapped angle (it is not periodic).
double effective_potential(double theta_a, double theta_b,
                           const QubitParams& q);
void potential_gradient(double theta_a, double theta_b, const QubitParams& q,
                        double grad[2]);
void potential_hessian(double theta_a, double theta_b, const QubitParams& q,
                       double hess[3]);  // {aa, bb, ab}

struct Minimum {
    double theta_a, theta_b, U;
};

struct Landscape {
    int grid_resolution;
    std::vector<double> axis;     // shared theta axis, [-pi, pi]
    std::vector<double> grid_U;   // row-major, U(axis[i], axis[j])
    std::vector<Minimum> minima;  // sorted by energy
    std::vector<double> barriers;  // saddle height above the lower minimum,
                                   // for consecutive minima pairs
    double intra_cell_barrier;  // between the two in-cell wells
    double inter_cell_barrier;  // joint 2pi winding of both phases
    double barrier_ratio;       // intra / inter
};

// Grid seeding + Newton polish + string-method saddles.  Throws
// std::runtime_error when no minimum survives the Hessian check.
Landscape find_minima(const QubitParams& q, int grid_resolution = 128);

// Minimum-energy-path barrier between two landscape points (string method,
// n_images images, converged when the max perpendicular force drops below
// 1e-8 E_J); returns max U along the path minus U at the first endpoint.
double string_barrier(const QubitParams& q, const Minimum& from,
                      const Minimum& to, int n_images = 32);

struct BathMode {
    double omega, zeta;
};

// k = 1 .. (N-2)/2:  omega_k = sqrt(2 E_J U_int (1 - cos(2 pi k/(N-1)))),
// zeta_k = (4/sqrt(N-1)) sin(2 pi k/(N-1)).
std::vector<BathMode> bath_spectrum(const QubitParams& q);

// Y(omega_l) = sum_k zeta_k^2 / (omega_k^2 + omega_l^2)
double admittance(const QubitParams& q, double omega_l);

struct KernelResult {
    std::complex<double> G;
    double convergence;  // |G(2 l_max) - G(l_max)| / (|G(2 l_max)| + eps)
    bool warning;        // convergence > 0.01
};

// Truncated double sum over bosonic Matsubara frequencies omega_l = 2 pi l /
// beta (l = 0 .. l_max; the l = 0 term vanishes):
//   G(tau) = sum_l sum_k omega_l^2 (1 + c_k) /
//            (2 E_J U_int (1 - c_k) + omega_l^2) * exp(i omega_l tau),
//   c_k = cos(2 pi k/(N-1)).
KernelResult kernel_G(const QubitParams& q, double tau);

}  // namespace ring_ladder
