#pragma once

// Two-mode Gross-Pitaevskii dynamics in the reduced variables
//   Z = (N_b - N_a)/N_T,  Theta = theta_a - theta_b,  s_tilde = 2 g s / hbar:
//   dZ/ds = -sqrt(1-Z^2) sin Theta
//   dTheta/ds = Delta + lambda*rho*Z + Z cos Theta / sqrt(1-Z^2)
// conserving H = lambda*rho*Z^2/2 + Delta*Z - sqrt(1-Z^2) cos Theta.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ring_ladder/ode.hpp"
#include "ring_ladder/setup.hpp"
#include "ring_ladder/xmath.hpp"

namespace ring_ladder {

struct State {
    double Z;
    double Theta;
};

struct TrajectorySample {
    double s_tilde, Z, Theta, H;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    SystemParams params;
    double z0 = 0, theta0 = 0;
    double rel_tol = 1e-10, abs_tol = 1e-10, sample_ds = 0.01;
    std::size_t n_accept = 0, n_reject = 0;
    bool singular_stop = false;  // halted at |Z| -> 1
};

struct Derivatives {
    double dZ, dTheta;
    bool singular;
};

double hamiltonian(const State& st, const SystemParams& p);
Derivatives rhs(const State& st, const SystemParams& p);

Trajectory integrate(const SystemParams& p, double z0, double theta0,
                     double s_max, double rel_tol = 1e-10,
                     double abs_tol = 1e-10, double sample_ds = 0.01);

// I = I0 sqrt(1-Z^2) sin Theta, I0 = g N_T / hbar
double josephson_current(const State& st, double N_T, double g,
                         double hbar = 1.0);
double josephson_current_reduced(const State& st);  // I / I0

// CSV columns: s_tilde,Z,Theta,H,H_drift
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

// High-accuracy fixed-step reference path (Gauss-Legendre order 10); the
// callback receives (s, Z, Theta) at multiples of sample_ds.  Intended for
// cross-checks of near-separatrix orbits where condition growth swamps
// double precision; instantiate with __float128 in that case.
template <class Real, class Cb>
void reference_trajectory(Real lambda_rho, Real delta, Real z0, Real theta0,
                          Real s_max, Real h, Real sample_ds, Cb&& cb) {
    auto f = [lambda_rho, delta](Real, const ode::Vec<Real, 2>& y) {
        ode::Vec<Real, 2> d;
        const Real Z = y[0], Th = y[1];
        const Real w = Real(1) - Z * Z;
        const Real sq = xm::sqrt(w > Real(0) ? w : Real(0));
        d[0] = -sq * xm::sin(Th);
        d[1] = delta + lambda_rho * Z + Z * xm::cos(Th) / sq;
        return d;
    };
    ode::Vec<Real, 2> y0{z0, theta0};
    ode::gauss10<Real, 2>(f, y0, Real(0), s_max, h, sample_ds,
                          [&cb](Real s, const ode::Vec<Real, 2>& y) {
                              cb(s, y[0], y[1]);
                          });
}

}  // namespace ring_ladder
