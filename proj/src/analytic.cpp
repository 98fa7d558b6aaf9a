#include "ring_ladder/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ring_ladder {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::LINEAR_D0: return "LINEAR_D0";
        case Branch::LINEAR_Dpos: return "LINEAR_Dpos";
        case Branch::SMALL_LR: return "SMALL_LR";
        case Branch::DELTA0_K_LT1: return "DELTA0_K_LT1";
        case Branch::DELTA0_K_EQ1: return "DELTA0_K_EQ1";
        case Branch::DELTA0_K_GT1: return "DELTA0_K_GT1";
        case Branch::GEN_DELTA_NEG: return "GEN_DELTA_NEG";
        case Branch::GEN_DELTA_ZERO_OSC: return "GEN_DELTA_ZERO_OSC";
        case Branch::GEN_DELTA_ZERO_DECAY: return "GEN_DELTA_ZERO_DECAY";
        case Branch::GEN_DELTA_POS: return "GEN_DELTA_POS";
        case Branch::FROZEN_INF: return "FROZEN_INF";
    }
    return "?";
}

static double period_from_solution(const Solution<double>& sol) {
    switch (sol.branch) {
        case Branch::LINEAR_Dpos:
            return 2.0 * M_PI / sol.lin_A;
        case Branch::SMALL_LR:
        case Branch::DELTA0_K_LT1:
            return 4.0 * ellint_K(sol.k) / std::sqrt(sol.S);
        case Branch::DELTA0_K_GT1:
            return 2.0 * ellint_K(1.0 / sol.k) / std::sqrt(sol.k * sol.S);
        case Branch::GEN_DELTA_POS:
            return 2.0 * ellint_K(sol.m) / sol.ws;
        case Branch::GEN_DELTA_NEG:
            return 4.0 * ellint_K(sol.m) / sol.ws;
        case Branch::GEN_DELTA_ZERO_OSC:
            return M_PI / sol.ws;
        default:
            return kInf;
    }
}

static double mean_from_solution(const Solution<double>& sol, double period) {
    switch (sol.branch) {
        case Branch::LINEAR_D0:
        case Branch::FROZEN_INF:
            return sol.z0;
        case Branch::LINEAR_Dpos:
            return sol.lin_B;
        case Branch::SMALL_LR:
        case Branch::DELTA0_K_LT1:
            return 0.0;
        case Branch::DELTA0_K_EQ1:
            return 0.0;  // asymptotic value
        case Branch::DELTA0_K_GT1:
            return sol.sigma * sol.C * M_PI /
                   (2.0 * ellint_K(1.0 / sol.k));
        case Branch::GEN_DELTA_ZERO_DECAY:
            return sol.Z1 + sol.fp1 / 4.0 / sol.P1;  // X -> infinity limit
        default: {
            // time average over one period (trapezoid on a periodic function)
            const int n = 4096;
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += sol(period * (i + 0.5) / n);
            return acc / n;
        }
    }
}

RegimeReport classify(const SystemParams& p, double z0, double theta0) {
    if (std::fabs(z0) > 1.0) throw std::domain_error("classify: |z0| > 1");
    const auto sol = make_solution<double>(p.lambda_rho, p.delta, z0, theta0);
    RegimeReport r;
    r.branch = sol.branch;
    r.lambda_rho = p.lambda_rho;
    r.delta = p.delta;
    r.z0 = z0;
    r.theta0 = theta0;
    r.H0 = sol.H0;
    r.D = kNaN;
    r.k = kNaN;
    r.C = kNaN;
    r.alpha = kNaN;
    r.zeta_sq = kNaN;
    r.g2 = r.g3 = r.disc = kNaN;
    r.roots[0] = r.roots[1] = r.roots[2] = kNaN;
    r.n_real = 0;
    r.amplitude = sol.amplitude;
    if (p.lambda_rho == 0.0) {
        const double A2 = 1.0 + p.delta * p.delta;
        r.D = 1.0 - sol.H0 * sol.H0 / A2;
    } else if (p.delta == 0.0) {
        const double H0 = sol.H0, lr = p.lambda_rho;
        const double S =
            std::sqrt(lr * lr + 1.0 - 2.0 * H0 * lr);
        r.k = 0.5 * (1.0 + (H0 * lr - 1.0) / S);
        r.zeta_sq = 2.0 * S;
        const double C2 = 2.0 / (lr * lr) * (H0 * lr - 1.0 + S);
        r.C = std::sqrt(C2 > 0 ? C2 : 0.0);
        const double a2 = 2.0 / (lr * lr) * (S - (H0 * lr - 1.0));
        r.alpha = std::sqrt(a2 > 0 ? a2 : 0.0);
    } else {
        const auto q = make_quartic(p.lambda_rho, p.delta, sol.H0);
        r.g2 = q.g2;
        r.g3 = q.g3;
        r.disc = q.disc;
        const auto cr = depressed_cubic_roots(q.g2, q.g3);
        r.n_real = cr.n_real;
        for (int i = 0; i < 3; ++i) r.roots[i] = cr.e[i];
    }
    r.period = period_from_solution(sol);
    r.periodic = std::isfinite(r.period);
    r.mean_Z = mean_from_solution(sol, r.period);
    r.mqst = std::fabs(r.mean_Z) > 1e-3;
    return r;
}

double analytic_Z(const SystemParams& p, double z0, double theta0, double s) {
    return make_solution<double>(p.lambda_rho, p.delta, z0, theta0)(s);
}

double solve_linear(const SystemParams& p, double z0, double theta0, double s) {
    if (p.lambda_rho != 0.0)
        throw std::domain_error("solve_linear: lambda_rho must be 0");
    return analytic_Z(p, z0, theta0, s);
}

double solve_delta0(const SystemParams& p, double z0, double theta0, double s) {
    if (!(p.lambda_rho > 0.0) || p.delta != 0.0)
        throw std::domain_error("solve_delta0: needs lambda_rho > 0, Delta = 0");
    return analytic_Z(p, z0, theta0, s);
}

double solve_general(const SystemParams& p, double z0, double theta0, double s) {
    if (!(p.lambda_rho > 0.0) || p.delta == 0.0)
        throw std::domain_error(
            "solve_general: needs lambda_rho > 0, Delta != 0");
    return analytic_Z(p, z0, theta0, s);
}

double period_of(const RegimeReport& rep) { return rep.period; }

SmallLrResult small_lr_solution(const SystemParams& p, double z0, double s) {
    if (!(p.lambda_rho >= 0.0) || p.delta != 0.0)
        throw std::domain_error("small_lr_solution: needs Delta = 0");
    SmallLrResult out;
    out.out_of_range = p.lambda_rho > 0.2;
    const double lr = p.lambda_rho;
    if (lr == 0.0) {
        out.Z = z0 * std::cos(s);
        return out;
    }
    const double H0 = hamiltonian0(lr, 0.0, z0, 0.0);
    const double S = std::sqrt(lr * lr + 1.0 - 2.0 * H0 * lr);
    const double k = 0.5 * (1.0 + (H0 * lr - 1.0) / S);
    const double u = std::sqrt(S) * s;
    out.Z = z0 * (std::cos(u) +
                  k / 4.0 * (u - std::sin(2.0 * u) / 2.0) * std::sin(u));
    return out;
}

double small_lr_frequency(const SystemParams& p, double z0) {
    return 1.0 + p.lambda_rho / 2.0 * std::sqrt(1.0 - z0 * z0);
}

double solve_delta0_nosqrt_k(const SystemParams& p, double z0, double theta0,
                             double s, double* k_out) {
    const double lr = p.lambda_rho;
    const double H0 = hamiltonian0(lr, 0.0, z0, theta0);
    const double S2 = lr * lr + 1.0 - 2.0 * H0 * lr;
    const double S = std::sqrt(S2);
    const double kbad = 0.5 * (1.0 + (H0 * lr - 1.0) / S2);  // missing sqrt
    if (k_out) *k_out = kbad;
    const double C2 = 2.0 / (lr * lr) * (H0 * lr - 1.0 + S);
    const double C = std::sqrt(C2 > 0 ? C2 : 0.0);
    const double sgn = z0 < 0 ? -1.0 : 1.0;
    // same evaluation pipeline as the corrected path, driven by the bad k
    if (std::fabs(kbad - 1.0) <= 1e-12) {
        return sgn * C / std::cosh(C * lr / 2.0 * s);
    }
    if (kbad < 1.0) {
        const double scale = C * lr / (2.0 * std::sqrt(kbad));
        double rrr = z0 / C;
        if (rrr > 1) rrr = 1;
        if (rrr < -1) rrr = -1;
        const double u0 = ellint_F(std::acos(rrr), kbad);
        const auto j = jacobi_sn_cn_dn(scale * s + u0, kbad);
        return C * j.cn;
    }
    const double mm = 1.0 / kbad;
    const double scale = C * lr / 2.0;
    double s2 = (1.0 - (z0 / C) * (z0 / C)) / mm;
    if (s2 < 0) s2 = 0;
    if (s2 > 1) s2 = 1;
    const double u0 = ellint_F(std::asin(std::sqrt(s2)), mm);
    const auto j = jacobi_sn_cn_dn(scale * s + u0, mm);
    return sgn * C * j.dn;
}

}  // namespace ring_ladder
