#pragma once

// Closed-form catalog for the reduced two-mode dynamics.  The quartic
//   f(Z) = (2/lr)^2 (1 - Z^2) - [Z^2 + 2 Z Delta/lr - 2 H0/lr]^2,  lr = lambda*rho
// satisfies (dZ/ds)^2 = (lr/2)^2 f(Z); its normalized coefficients feed the
// Weierstrass invariants g2, g3 whose discriminant picks the solution branch
// for Delta != 0, while Delta = 0 runs on the Jacobi cn/dn ladder with
//   S = sqrt(lr^2 + 1 - 2 H0 lr),  k = [1 + (H0 lr - 1)/S]/2,
//   C^2 = (2/lr^2)(H0 lr - 1 + S).
// Everything is templated on the scalar so the near-separatrix paths can be
// evaluated in __float128.

#include <stdexcept>

#include "ring_ladder/elliptic.hpp"
#include "ring_ladder/setup.hpp"
#include "ring_ladder/xmath.hpp"

namespace ring_ladder {

enum class Branch {
    LINEAR_D0,
    LINEAR_Dpos,
    SMALL_LR,
    DELTA0_K_LT1,
    DELTA0_K_EQ1,
    DELTA0_K_GT1,
    GEN_DELTA_NEG,
    GEN_DELTA_ZERO_OSC,
    GEN_DELTA_ZERO_DECAY,
    GEN_DELTA_POS,
    FROZEN_INF,
};

const char* branch_name(Branch b);

template <class Real>
struct Quartic {
    Real lr, delta, H0;
    Real A, B, Cc;  // f(Z) = A^2(1-Z^2) - (Z^2 + B Z - Cc)^2
    Real a1, a2, a3, a4;
    Real g2, g3, disc;
    Real f(Real Z) const {
        const Real q = Z * Z + B * Z - Cc;
        return A * A * (Real(1) - Z * Z) - q * q;
    }
    Real fp(Real Z) const {
        const Real q = Z * Z + B * Z - Cc;
        return Real(-2) * A * A * Z - Real(2) * q * (Real(2) * Z + B);
    }
    Real fpp(Real Z) const {
        const Real q = Z * Z + B * Z - Cc;
        const Real l = Real(2) * Z + B;
        return Real(-2) * A * A - Real(2) * l * l - Real(4) * q;
    }
};

template <class Real>
Quartic<Real> make_quartic(Real lr, Real delta, Real H0) {
    if (!(lr > Real(0)))
        throw std::domain_error("make_quartic: lambda_rho must be > 0");
    Quartic<Real> q;
    q.lr = lr;
    q.delta = delta;
    q.H0 = H0;
    q.A = Real(2) / lr;
    q.B = Real(2) * delta / lr;
    q.Cc = Real(2) * H0 / lr;
    q.a1 = -delta / lr;
    q.a2 = Real(2) / Real(3) * (lr * H0 - (delta * delta + Real(1))) / (lr * lr);
    q.a3 = Real(2) * H0 * delta / (lr * lr);
    q.a4 = Real(4) * (Real(1) - H0 * H0) / (lr * lr);
    q.g2 = -q.a4 - Real(4) * q.a1 * q.a3 + Real(3) * q.a2 * q.a2;
    q.g3 = -q.a2 * q.a4 + Real(2) * q.a1 * q.a2 * q.a3 - q.a2 * q.a2 * q.a2 +
           q.a3 * q.a3 - q.a1 * q.a1 * q.a4;
    q.disc = q.g2 * q.g2 * q.g2 - Real(27) * q.g3 * q.g3;
    return q;
}

template <class Real>
Real hamiltonian0(Real lr, Real delta, Real z0, Real theta0) {
    return lr * z0 * z0 / Real(2) + delta * z0 -
           xm::sqrt(Real(1) - z0 * z0) * xm::cos(theta0);
}

// Closed-form trajectory evaluator.  Built once, then called per sample.
template <class Real>
struct Solution {
    Branch branch;
    Real lr, delta, z0, theta0, H0;
    // linear branch
    Real lin_A{}, lin_B{}, lin_C{}, lin_phi0{};
    // Delta = 0 branch
    Real S{}, k{}, C{}, u0{}, sigma{1};
    // Delta != 0 branch: Z = Z1 + (fp1/4) X / (P1 X + P2)
    Real Z1{}, fp1{}, fpp1{};
    Real P1{}, P2{}, ws{}, m{}, s0{};
    Real amplitude{};  // predicted peak-to-trough excursion of Z

    Real operator()(Real s) const {
        switch (branch) {
            case Branch::LINEAR_D0:
            case Branch::FROZEN_INF:
                return z0;
            case Branch::LINEAR_Dpos:
                return lin_B - lin_C / lin_A * xm::sin(lin_A * s + lin_phi0);
            case Branch::SMALL_LR:
            case Branch::DELTA0_K_LT1: {
                const auto j = jacobi_sn_cn_dn(xm::sqrt(S) * s + u0, k);
                return C * j.cn;
            }
            case Branch::DELTA0_K_EQ1: {
                const Real x = C * lr / Real(2) * s + u0;
                return sigma * C / xm::cosh(x);
            }
            case Branch::DELTA0_K_GT1: {
                const auto j =
                    jacobi_sn_cn_dn(xm::sqrt(k * S) * s + u0, Real(1) / k);
                return sigma * C * j.dn;
            }
            default: {
                const Real u = ws * (s - s0);
                Real X;
                if (branch == Branch::GEN_DELTA_POS) {
                    const auto j = jacobi_sn_cn_dn(u, m);
                    X = j.sn * j.sn;
                } else if (branch == Branch::GEN_DELTA_NEG) {
                    const auto j = jacobi_sn_cn_dn(u, m);
                    X = Real(1) - j.cn;
                } else if (branch == Branch::GEN_DELTA_ZERO_DECAY) {
                    const Real sh = xm::sinh(u);
                    X = sh * sh;
                } else {  // GEN_DELTA_ZERO_OSC
                    const Real sn = xm::sin(u);
                    X = sn * sn;
                }
                return Z1 + fp1 / Real(4) * X / (P1 * X + P2);
            }
        }
    }
};

namespace detail {

// adaptive Simpson on [a,b]
template <class Real, class F>
Real adapt_simpson(F&& f, Real a, Real b, Real fa, Real fm, Real fb, Real tol,
                   int depth) {
    const Real m = (a + b) / Real(2);
    const Real lm = (a + m) / Real(2), rm = (m + b) / Real(2);
    const Real flm = f(lm), frm = f(rm);
    const Real whole = (b - a) / Real(6) * (fa + Real(4) * fm + fb);
    const Real left = (m - a) / Real(6) * (fa + Real(4) * flm + fm);
    const Real right = (b - m) / Real(6) * (fm + Real(4) * frm + fb);
    if (depth <= 0 || xm::fabs(left + right - whole) < Real(15) * tol)
        return left + right + (left + right - whole) / Real(15);
    return adapt_simpson(f, a, m, fa, flm, fm, tol / Real(2), depth - 1) +
           adapt_simpson(f, m, b, fm, frm, fb, tol / Real(2), depth - 1);
}

template <class Real, class F>
Real quadrature(F&& f, Real a, Real b, Real tol) {
    const Real m = (a + b) / Real(2);
    return adapt_simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

// root of f nearest z0 (for sin(theta0) != 0 starts); scan + bisection
template <class Real>
Real nearest_quartic_root(const Quartic<Real>& q, Real z0) {
    auto scan = [&](Real dir) -> Real {
        const Real step = Real(1) / Real(4096);
        Real a = z0;
        for (int i = 1; i <= 2 * 4096; ++i) {
            Real b = z0 + dir * Real(i) * step;
            if (b > Real(1)) b = Real(1);
            if (b < Real(-1)) b = Real(-1);
            if (q.f(b) <= Real(0)) {
                // bisect on [a,b]
                Real lo = a, hi = b;
                for (int it = 0; it < 200; ++it) {
                    const Real mid = (lo + hi) / Real(2);
                    if (q.f(mid) > Real(0))
                        lo = mid;
                    else
                        hi = mid;
                    if (xm::fabs(hi - lo) <
                        Real(4) * xm::eps<Real>() * (Real(1) + xm::fabs(lo)))
                        break;
                }
                return (lo + hi) / Real(2);
            }
            a = b;
            if (b == Real(1) || b == Real(-1)) break;
        }
        return Real(2);  // no root in this direction
    };
    const Real rplus = scan(Real(1)), rminus = scan(Real(-1));
    if (rplus == Real(2) && rminus == Real(2))
        throw std::runtime_error("nearest_quartic_root: no real root found");
    if (rplus == Real(2)) return rminus;
    if (rminus == Real(2)) return rplus;
    return xm::fabs(rplus - z0) < xm::fabs(z0 - rminus) ? rplus : rminus;
}

}  // namespace detail

template <class Real>
Solution<Real> make_solution(Real lr, Real delta, Real z0, Real theta0) {
    if (xm::fabs(z0) > Real(1))
        throw std::domain_error("make_solution: |z0| > 1");
    Solution<Real> sol;
    sol.lr = lr;
    sol.delta = delta;
    sol.z0 = z0;
    sol.theta0 = theta0;
    const Real H0 = hamiltonian0(lr, delta, z0, theta0);
    sol.H0 = H0;
    const Real sth = xm::sin(theta0);
    const Real zdot0 = -xm::sqrt(Real(1) - z0 * z0) * sth;

    if (lr == Real(0)) {
        const Real A = xm::sqrt(Real(1) + delta * delta);
        const Real D = Real(1) - H0 * H0 / (A * A);
        sol.lin_A = A;
        if (D < Real(1e-12)) {
            sol.branch = Branch::LINEAR_D0;
            sol.amplitude = Real(0);
            return sol;
        }
        const Real B = delta * H0 / (A * A);
        const Real C = xm::sqrt(D);
        sol.lin_B = B;
        sol.lin_C = C;
        sol.lin_phi0 = xm::atan2(A / C * (B - z0), -zdot0 / C);
        sol.branch = Branch::LINEAR_Dpos;
        sol.amplitude = Real(2) * C / A;
        return sol;
    }

    // stationary start: both reduced equations vanish => frozen imbalance
    {
        const Real w = xm::sqrt(Real(1) - z0 * z0);
        const Real dth =
            delta + lr * z0 + (w > Real(0) ? z0 * xm::cos(theta0) / w : Real(0));
        if (xm::fabs(zdot0) < Real(1e-13) &&
            xm::fabs(dth) < Real(1e-12) * (Real(1) + xm::fabs(lr))) {
            sol.branch = Branch::FROZEN_INF;
            sol.amplitude = Real(0);
            return sol;
        }
    }

    if (delta == Real(0)) {
        const Real S = xm::sqrt(lr * lr + Real(1) - Real(2) * H0 * lr);
        const Real k = (Real(1) + (H0 * lr - Real(1)) / S) / Real(2);
        const Real C2 = Real(2) / (lr * lr) * (H0 * lr - Real(1) + S);
        const Real C = xm::sqrt(C2 > Real(0) ? C2 : Real(0));
        sol.S = S;
        sol.k = k;
        sol.C = C;
        const Real sgn = z0 < Real(0) ? Real(-1) : Real(1);
        if (xm::fabs(k - Real(1)) <= Real(1e-12)) {
            sol.branch = Branch::DELTA0_K_EQ1;
            sol.sigma = sgn;
            Real r = xm::fabs(z0) / C;
            if (r > Real(1)) r = Real(1);
            const Real x0 = xm::log((Real(1) + xm::sqrt(Real(1) - r * r)) / r);
            sol.u0 = (sgn * sth >= Real(0)) ? x0 : -x0;
            sol.amplitude = C;
        } else if (k < Real(1)) {
            sol.branch = lr <= Real(0.2) ? Branch::SMALL_LR
                                         : Branch::DELTA0_K_LT1;
            Real r = z0 / C;
            if (r > Real(1)) r = Real(1);
            if (r < Real(-1)) r = Real(-1);
            const Real phi = xm::acos(r);
            const Real F0 = ellint_F(phi, k);
            sol.u0 = sth >= Real(0) ? F0 : -F0;
            sol.amplitude = Real(2) * C;
        } else {
            sol.branch = Branch::DELTA0_K_GT1;
            sol.sigma = sgn;
            const Real mm = Real(1) / k;
            Real s2 = (Real(1) - (z0 / C) * (z0 / C)) / mm;
            if (s2 < Real(0)) s2 = Real(0);
            if (s2 > Real(1)) s2 = Real(1);
            const Real phi = xm::asin(xm::sqrt(s2));
            const Real F0 = ellint_F(phi, mm);
            sol.u0 = (sgn * sth >= Real(0)) ? F0 : -F0;
            sol.amplitude = C * (Real(1) - xm::sqrt(Real(1) - mm));
        }
        if (sol.amplitude < Real(1e-12)) {
            sol.branch = Branch::FROZEN_INF;
            sol.amplitude = Real(0);
        }
        return sol;
    }

    // Delta != 0: Weierstrass path
    const auto q = make_quartic(lr, delta, H0);
    Real Z1 = z0;
    if (xm::fabs(sth) > Real(0)) Z1 = detail::nearest_quartic_root(q, z0);
    sol.Z1 = Z1;
    sol.fp1 = q.fp(Z1);
    sol.fpp1 = q.fpp(Z1);
    const auto cr = depressed_cubic_roots(q.g2, q.g3);
    const Real c3 = xm::fabs(q.g2 * q.g2 * q.g2);
    const Real c27 = Real(27) * q.g3 * q.g3;
    const Real ztol = Real(1e-10) * (c3 > c27 ? c3 : c27);

    Real e_top;  // upper end of the real p-function branch
    if (xm::fabs(q.disc) <= ztol) {
        const Real c = xm::sqrt(xm::fabs(q.g2) / Real(12));
        sol.ws = xm::sqrt(Real(3) * c) * lr / Real(2);
        if (q.g3 < Real(0)) {
            sol.branch = Branch::GEN_DELTA_ZERO_DECAY;
            sol.P1 = c - sol.fpp1 / Real(24);
            sol.P2 = Real(3) * c;
            e_top = c;
        } else {
            sol.branch = Branch::GEN_DELTA_ZERO_OSC;
            sol.P1 = -c - sol.fpp1 / Real(24);
            sol.P2 = Real(3) * c;
            e_top = Real(2) * c;
        }
    } else if (q.disc > Real(0)) {
        sol.branch = Branch::GEN_DELTA_POS;
        const Real e1 = cr.e[0], e2 = cr.e[1], e3 = cr.e[2];
        sol.m = (e2 - e3) / (e1 - e3);
        sol.ws = lr / Real(2) * xm::sqrt(e1 - e3);
        sol.P1 = e3 - sol.fpp1 / Real(24);
        sol.P2 = e1 - e3;
        e_top = e1;
    } else {
        sol.branch = Branch::GEN_DELTA_NEG;
        const Real e2 = cr.e[0];
        const Real H2 = xm::sqrt(Real(3) * e2 * e2 - q.g2 / Real(4));
        Real m2 = Real(0.5) - Real(3) * e2 / (Real(4) * H2);
        if (m2 < Real(0)) m2 = Real(0);
        if (m2 > Real(1)) m2 = Real(1);
        sol.m = m2;
        sol.ws = lr * xm::sqrt(H2);
        sol.P1 = (e2 - sol.fpp1 / Real(24)) - H2;
        sol.P2 = Real(2) * H2;
        e_top = e2;
    }

    const Real dtop = e_top - sol.fpp1 / Real(24);
    if (xm::fabs(dtop) > Real(1e-9) * (Real(1) + xm::fabs(e_top))) {
        sol.amplitude = xm::fabs(sol.fp1 / Real(4) / dtop);
        if (sol.amplitude < Real(1e-12)) {
            sol.branch = Branch::FROZEN_INF;
            sol.amplitude = Real(0);
            return sol;
        }
    } else {
        sol.amplitude = xm::fabs(sol.fp1);  // degenerate denominator; keep scale
    }

    // time offset: s0 = (2/lr) * int_{Z1}^{z0} dZ/sqrt(f); regular after
    // Z = Z1 + (z0 - Z1) tau^2
    sol.s0 = Real(0);
    if (xm::fabs(sth) > Real(0)) {
        const Real dz = z0 - Z1;
        // with Z = Z1 + dz tau^2 the sqrt singularity cancels analytically:
        // (f(Z) - f(Z1))/(Z - Z1) expands as an exact cubic in eps = dz tau^2
        // (f is a quartic), so the integrand 2|dz|/sqrt(dz psi) is smooth and
        // free of the round-off that plagues sqrt(f) near the root.
        const Real fppp1 = Real(-12) * (Real(2) * Z1 + q.B);
        auto g = [&](Real tau) -> Real {
            const Real eps = dz * tau * tau;
            const Real psi =
                sol.fp1 +
                eps * (sol.fpp1 / Real(2) +
                       eps * (fppp1 / Real(6) - eps));
            const Real arg = dz * psi;
            return arg > Real(0) ? Real(2) * xm::fabs(dz) / xm::sqrt(arg)
                                 : Real(0);
        };
        const Real integral =
            detail::quadrature(g, Real(0), Real(1), Real(1e-13));
        const Real s0 = Real(2) / lr * integral;
        // pick the sign that reproduces dZ/ds(0)
        sol.s0 = s0;
        const Real h = Real(1) / Real(1048576);
        const Real d_num = (sol(h) - sol(-h)) / (Real(2) * h);
        if (d_num * zdot0 < Real(0)) sol.s0 = -s0;
    }
    return sol;
}

// Degenerate branches (separatrix, vanishing discriminant) occupy measure-zero
// manifolds; a double-rounded z0 promoted to a wider type lands slightly off
// the manifold and an extended-precision oracle then follows a neighbouring
// orbit that departs exponentially near the hyperbolic point.  This nudges z0
// (by less than one double ulp) back onto the exact manifold so oracle and
// closed form describe the same mathematical orbit.  Non-degenerate branches
// are returned unchanged.
template <class Real>
Real refine_degenerate_z0(Branch b, Real lr, Real delta, Real z0,
                          Real theta0) {
    if (b != Branch::DELTA0_K_EQ1 && b != Branch::GEN_DELTA_ZERO_DECAY &&
        b != Branch::GEN_DELTA_ZERO_OSC)
        return z0;
    auto target = [&](Real z) -> Real {
        const Real H0 = hamiltonian0(lr, delta, z, theta0);
        if (b == Branch::DELTA0_K_EQ1) return H0 - Real(1);
        return make_quartic(lr, delta, H0).disc;
    };
    Real z = z0;
    const Real h = Real(1e-9);
    for (int it = 0; it < 60; ++it) {
        const Real f0 = target(z);
        const Real dfdz = (target(z + h) - f0) / h;
        if (dfdz == Real(0)) break;
        const Real step = f0 / dfdz;
        z -= step;
        if (z > Real(1)) z = Real(1);
        if (z < Real(-1)) z = Real(-1);
        if (xm::fabs(step) < Real(4) * xm::eps<Real>() * (Real(1) + xm::fabs(z)))
            break;
    }
    return z;
}

// Same idea for frozen starts: a double-rounded (z0, theta0) sits within one
// ulp of a stationary point, and when the point is hyperbolic that residual
// grows exponentially in an oracle integration.  Snap theta0 to the nearest
// multiple of pi and Newton z0 onto the exact phase-velocity zero.
template <class Real>
void refine_frozen(Real lr, Real delta, Real& z0, Real& theta0) {
    const Real p = xm::pi<Real>();
    theta0 = xm::floor(theta0 / p + Real(0.5)) * p;
    const Real ct = xm::cos(theta0) >= Real(0) ? Real(1) : Real(-1);
    Real z = z0;
    for (int it = 0; it < 60; ++it) {
        const Real w = Real(1) - z * z;
        if (!(w > Real(0))) break;
        const Real sq = xm::sqrt(w);
        const Real g = delta + lr * z + z * ct / sq;
        const Real dg = lr + ct / (sq * w);
        if (dg == Real(0)) break;
        const Real step = g / dg;
        z -= step;
        if (xm::fabs(step) < Real(4) * xm::eps<Real>() * (Real(1) + xm::fabs(z)))
            break;
    }
    z0 = z;
}

struct RegimeReport {
    Branch branch;
    double lambda_rho, delta, z0, theta0, H0;
    double D;             // linear-path determinant (NaN elsewhere)
    double k;             // Delta = 0 path modulus (NaN elsewhere)
    double C, alpha, zeta_sq;
    double g2, g3, disc;  // Delta != 0 path (NaN elsewhere)
    double roots[3];
    int n_real;
    double period;        // s-tilde units; infinity when non-oscillatory
    bool periodic;
    double mean_Z;
    double amplitude;
    bool mqst;
};

RegimeReport classify(const SystemParams& p, double z0, double theta0);
double analytic_Z(const SystemParams& p, double z0, double theta0, double s);
double solve_linear(const SystemParams& p, double z0, double theta0, double s);
double solve_delta0(const SystemParams& p, double z0, double theta0, double s);
double solve_general(const SystemParams& p, double z0, double theta0, double s);
double period_of(const RegimeReport& rep);

struct SmallLrResult {
    double Z;
    bool out_of_range;  // lambda_rho beyond the perturbative window
};
SmallLrResult small_lr_solution(const SystemParams& p, double z0, double s);
double small_lr_frequency(const SystemParams& p, double z0);

// Debug hook for the corrupted-modulus negative control: evaluates the
// Delta = 0 solution with k missing the square root in its denominator.
double solve_delta0_nosqrt_k(const SystemParams& p, double z0, double theta0,
                             double s, double* k_out = nullptr);

}  // namespace ring_ladder
