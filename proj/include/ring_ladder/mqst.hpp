#pragma once

// Macroscopic quantum self-trapping diagnostics: the critical imbalance
// separating zero-mean oscillations from trapped orbits, the classical
// potential U(Z) with E - U = (lr/2)^2 f(Z), allowed Z-regions, phase-plane
// curves, and a trajectory-based trapping detector.

#include <string>
#include <vector>

#include "ring_ladder/analytic.hpp"
#include "ring_ladder/meanfield.hpp"
#include "ring_ladder/setup.hpp"

namespace ring_ladder {

struct CriticalImbalance {
    bool has_threshold;
    double Zc;  // NaN when has_threshold is false
};

// Critical imbalance for a start at phase theta0 (Delta = 0 family).  For
// sin(theta0) = 0 this reduces to Zc = 2 sqrt(lr - 1) / lr, defined only for
// lr > 1.
CriticalImbalance critical_imbalance(double lambda_rho, double theta0 = 0.0);

// U(Z) = Z^2 (lr^2 Z^2/4 + 1 + Delta^2 - H0 lr) + Z (lr Delta Z^2 - 2 H0 Delta)
// and E = 1 - H0^2, so that E - U(Z) = (lr/2)^2 f(Z).
struct PotentialSlice {
    double U;
    double E;
};
PotentialSlice classical_potential(const SystemParams& p, double H0, double Z);

// Closed intervals of [-1, 1] where f(Z) >= 0 (classically allowed).
struct Interval {
    double lo, hi;
};
std::vector<Interval> allowed_regions(const SystemParams& p, double H0);

// Theta(Z) on the orbit with energy H0: Theta = sign * arccos(arg),
// arg = (lr Z^2/2 + Delta Z - H0)/sqrt(1 - Z^2).  Throws std::domain_error
// outside the allowed region.
double phase_of_Z(const SystemParams& p, double H0, double Z, int sign);

enum class CurveTopology { closed, running };

struct PortraitCurve {
    int id;
    CurveTopology topology;
    std::vector<double> Theta;  // radians
    std::vector<double> Z;
};

// Trace the (Theta, Z) orbit through (z0, theta0).  Closed orbits come back
// around; running-phase orbits are replicated over |Theta| <= 3 pi.
PortraitCurve portrait_curve(const SystemParams& p, double z0, double theta0,
                             int id, int n_points = 512);

struct MqstDetection {
    bool ok;          // enough structure in the signal to average cleanly
    bool mqst;        // |mean_Z| > 1e-3
    double mean_Z;
    int n_periods;    // full oscillation periods covered by the average
    std::string note;
};

// Time-average Z over an integer number of detected oscillation periods
// (same-direction crossings of the running mean); falls back to the whole
// record when no period can be isolated.
MqstDetection detect_mqst(const Trajectory& traj);

}  // namespace ring_ladder
