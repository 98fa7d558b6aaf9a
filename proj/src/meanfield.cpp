#include "ring_ladder/meanfield.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ring_ladder/format.hpp"

namespace ring_ladder {

double hamiltonian(const State& st, const SystemParams& p) {
    if (std::fabs(st.Z) > 1.0)
        throw std::domain_error("hamiltonian: |Z| > 1");
    return p.lambda_rho * st.Z * st.Z / 2.0 + p.delta * st.Z -
           std::sqrt(1.0 - st.Z * st.Z) * std::cos(st.Theta);
}

Derivatives rhs(const State& st, const SystemParams& p) {
    const double w = 1.0 - st.Z * st.Z;
    if (w <= 0.0) {
        return {0.0, 0.0, true};
    }
    const double sq = std::sqrt(w);
    return {-sq * std::sin(st.Theta),
            p.delta + p.lambda_rho * st.Z + st.Z * std::cos(st.Theta) / sq,
            false};
}

Trajectory integrate(const SystemParams& p, double z0, double theta0,
                     double s_max, double rel_tol, double abs_tol,
                     double sample_ds) {
    if (std::fabs(z0) > 1.0)
        throw std::invalid_argument("integrate: |z0| > 1");
    if (!(s_max > 0.0)) throw std::invalid_argument("integrate: s_max <= 0");
    if (!(rel_tol > 0.0) || rel_tol > 1e-3 || !(abs_tol > 0.0) ||
        abs_tol > 1e-3)
        throw std::invalid_argument("integrate: tolerances outside (0, 1e-3]");
    if (!(sample_ds > 0.0))
        throw std::invalid_argument("integrate: sample_ds <= 0");

    Trajectory traj;
    traj.params = p;
    traj.z0 = z0;
    traj.theta0 = theta0;
    traj.rel_tol = rel_tol;
    traj.abs_tol = abs_tol;
    traj.sample_ds = sample_ds;

    auto f = [&p](double, const ode::Vec<double, 2>& y) {
        ode::Vec<double, 2> d;
        const double w = 1.0 - y[0] * y[0];
        const double sq = std::sqrt(w > 0.0 ? w : 0.0);
        d[0] = -sq * std::sin(y[1]);
        d[1] = p.delta + p.lambda_rho * y[0] +
               (sq > 0.0 ? y[0] * std::cos(y[1]) / sq : 0.0);
        return d;
    };
    auto sample = [&traj, &p](double s, const ode::Vec<double, 2>& y) {
        if (!traj.samples.empty() &&
            s <= traj.samples.back().s_tilde + 1e-13)
            return;
        const double Zc = y[0] > 1.0 ? 1.0 : (y[0] < -1.0 ? -1.0 : y[0]);
        traj.samples.push_back(
            {s, y[0], y[1], hamiltonian({Zc, y[1]}, p)});
    };
    auto stop = [](double, const ode::Vec<double, 2>& y) {
        return std::fabs(y[0]) >= 1.0 - 1e-12;
    };
    ode::Vec<double, 2> y0{z0, theta0};
    const auto status =
        ode::dp45<double, 2>(f, y0, 0.0, s_max, rel_tol, abs_tol, sample_ds,
                             sample, stop, &traj.n_accept, &traj.n_reject);
    if (status == ode::Status::step_underflow)
        throw std::runtime_error("integrate: step size underflow");
    traj.singular_stop = (status == ode::Status::stopped);
    return traj;
}

double josephson_current(const State& st, double N_T, double g, double hbar) {
    return g * N_T / hbar * josephson_current_reduced(st);
}

double josephson_current_reduced(const State& st) {
    const double w = 1.0 - st.Z * st.Z;
    return std::sqrt(w > 0.0 ? w : 0.0) * std::sin(st.Theta);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "s_tilde,Z,Theta,H,H_drift\n";
    const double H0 = traj.samples.empty() ? 0.0 : traj.samples.front().H;
    for (const auto& s : traj.samples) {
        os << fmt_g(s.s_tilde) << ',' << fmt_g(s.Z) << ',' << fmt_g(s.Theta)
           << ',' << fmt_g(s.H) << ',' << fmt_g(s.H - H0) << '\n';
    }
}

}  // namespace ring_ladder
