#pragma once

// Elliptic special-function kernel: complete/incomplete integrals of the first
// kind (parameter convention: integrand (1 - m sin^2 t)^(-1/2)), Jacobi sn/cn/dn,
// the depressed cubic 4y^3 - g2 y - g3, and the Weierstrass p-function reduced
// to Jacobi functions through the cubic roots.

#include <cstddef>
#include <stdexcept>

#include "ring_ladder/xmath.hpp"

namespace ring_ladder {

template <class Real>
struct JacobiTriple {
    Real sn, cn, dn;
};

template <class Real>
struct CubicRoots {
    Real e[3];    // descending when all real; e[0] is the real root otherwise
    int n_real;   // 3 or 1
    Real g2, g3;
    Real delta;   // g2^3 - 27 g3^2
};

namespace detail {

// Carlson symmetric integral R_F; handles the quadratic-precision types too.
template <class Real>
Real carlson_rf(Real x, Real y, Real z) {
    const Real tol = xm::pow(Real(4) * xm::eps<Real>(), Real(1) / Real(6));
    Real A = (x + y + z) / Real(3);
    const Real A0 = A, x0 = x, y0 = y;
    Real Q = xm::fabs(A - x);
    if (xm::fabs(A - y) > Q) Q = xm::fabs(A - y);
    if (xm::fabs(A - z) > Q) Q = xm::fabs(A - z);
    Q /= tol;
    Real pow4 = Real(1);
    while (Q * pow4 > xm::fabs(A)) {
        const Real sx = xm::sqrt(x), sy = xm::sqrt(y), sz = xm::sqrt(z);
        const Real lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / Real(4);
        y = (y + lam) / Real(4);
        z = (z + lam) / Real(4);
        A = (A + lam) / Real(4);
        pow4 /= Real(4);
    }
    // duplication-theorem arguments use the ORIGINAL x, y scaled down
    const Real X = pow4 * (A0 - x0) / A;
    const Real Y = pow4 * (A0 - y0) / A;
    const Real Z = -X - Y;
    const Real E2 = X * Y - Z * Z;
    const Real E3 = X * Y * Z;
    return (Real(1) - E2 / Real(10) + E3 / Real(14) + E2 * E2 / Real(24) -
            Real(3) / Real(44) * E2 * E3) /
           xm::sqrt(A);
}

}  // namespace detail

template <class Real>
Real ellint_K(Real m) {
    if (!(m >= Real(0))) throw std::domain_error("ellint_K: m < 0");
    if (m >= Real(1)) throw std::domain_error("ellint_K: m >= 1 (K diverges)");
    Real a = Real(1), b = xm::sqrt(Real(1) - m);
    for (int i = 0; i < 64; ++i) {
        const Real an = (a + b) / Real(2);
        const Real bn = xm::sqrt(a * b);
        if (xm::fabs(a - b) < Real(2) * xm::eps<Real>() * a) break;
        a = an;
        b = bn;
    }
    return xm::pi<Real>() / (Real(2) * a);
}

template <class Real>
Real ellint_F(Real phi, Real m) {
    if (!(m >= Real(0)) || m > Real(1))
        throw std::domain_error("ellint_F: m outside [0,1]");
    if (!xm::isfinite(phi)) throw std::domain_error("ellint_F: phi not finite");
    // reduce by F(phi + n*pi) = 2nK + F(phi)
    const Real n = xm::floor(phi / xm::pi<Real>() + Real(0.5));
    const Real phir = phi - n * xm::pi<Real>();
    Real head = Real(0);
    if (n != Real(0)) head = Real(2) * n * ellint_K(m);  // throws for m = 1
    if (m == Real(1)) {
        const Real s = xm::sin(phir);
        return head + xm::log((Real(1) + s) / (Real(1) - s)) / Real(2);
    }
    const Real s = xm::sin(phir), c = xm::cos(phir);
    if (s == Real(0)) return head;
    const Real val =
        s * detail::carlson_rf(c * c, Real(1) - m * s * s, Real(1));
    return head + val;
}

template <class Real>
JacobiTriple<Real> jacobi_sn_cn_dn(Real u, Real m) {
    if (!(m >= Real(0)) || m > Real(1))
        throw std::domain_error("jacobi: m outside [0,1]");
    if (m < Real(4) * xm::eps<Real>()) {
        return {xm::sin(u), xm::cos(u), Real(1) - m * xm::sin(u) * xm::sin(u) / Real(2)};
    }
    if (Real(1) - m < Real(1e-12)) {
        // hyperbolic limit; first-order correction in (1-m) keeps the
        // handover from the AGM branch smooth
        const Real t = xm::tanh(u), sch = Real(1) / xm::cosh(u);
        const Real dm = Real(1) - m;
        const Real cm = dm / Real(4) * (xm::sinh(u) * xm::cosh(u) - u);
        const Real cd = dm / Real(4) * (xm::sinh(u) * xm::cosh(u) + u);
        return {t + cm * sch * sch, sch - cm * sch * t, sch + cd * sch * t};
    }
    // descending AGM ladder
    Real a[64], c[64];
    a[0] = Real(1);
    Real b = xm::sqrt(Real(1) - m);
    c[0] = xm::sqrt(m);
    std::size_t n = 0;
    while (n < 63 && xm::fabs(c[n]) > xm::eps<Real>() * a[n]) {
        const Real an = (a[n] + b) / Real(2);
        const Real cn1 = (a[n] - b) / Real(2);
        b = xm::sqrt(a[n] * b);
        ++n;
        a[n] = an;
        c[n] = cn1;
    }
    Real p2 = Real(1);
    for (std::size_t i = 0; i < n; ++i) p2 *= Real(2);
    Real phi = p2 * a[n] * u;
    for (std::size_t i = n; i > 0; --i) {
        const Real s = c[i] / a[i] * xm::sin(phi);
        phi = (phi + xm::asin(s)) / Real(2);
    }
    const Real sn = xm::sin(phi), cn = xm::cos(phi);
    Real dn2 = Real(1) - m * sn * sn;
    if (dn2 < Real(0)) dn2 = Real(0);
    return {sn, cn, xm::sqrt(dn2)};
}

template <class Real>
CubicRoots<Real> depressed_cubic_roots(Real g2, Real g3) {
    CubicRoots<Real> r;
    r.g2 = g2;
    r.g3 = g3;
    r.delta = g2 * g2 * g2 - Real(27) * g3 * g3;
    // 4y^3 - g2 y - g3 = 0  ->  y^3 + p y + q = 0
    const Real p = -g2 / Real(4), q = -g3 / Real(4);
    if (g2 == Real(0) && g3 == Real(0)) {
        r.e[0] = r.e[1] = r.e[2] = Real(0);
        r.n_real = 3;
        return r;
    }
    if (r.delta >= Real(0) && g2 > Real(0)) {
        // three real roots (trigonometric form)
        const Real rad = xm::sqrt(-p / Real(3));
        Real arg = Real(3) * q / (Real(2) * p * rad);  // = cos(3 phi)
        if (arg > Real(1)) arg = Real(1);
        if (arg < Real(-1)) arg = Real(-1);
        const Real phi = xm::acos(arg) / Real(3);
        Real y0 = Real(2) * rad * xm::cos(phi);
        Real y1 = Real(2) * rad * xm::cos(phi - Real(2) * xm::pi<Real>() / Real(3));
        Real y2 = Real(2) * rad * xm::cos(phi - Real(4) * xm::pi<Real>() / Real(3));
        // sort descending
        if (y0 < y1) { const Real t = y0; y0 = y1; y1 = t; }
        if (y1 < y2) { const Real t = y1; y1 = y2; y2 = t; }
        if (y0 < y1) { const Real t = y0; y0 = y1; y1 = t; }
        r.e[0] = y0; r.e[1] = y1; r.e[2] = y2;
        r.n_real = 3;
    } else {
        // one real root (Cardano)
        const Real d = q * q / Real(4) + p * p * p / Real(27);
        const Real sd = xm::sqrt(d > Real(0) ? d : Real(0));
        const Real u3 = -q / Real(2) + sd, v3 = -q / Real(2) - sd;
        const Real u = xm::cbrt(u3), v = xm::cbrt(v3);
        r.e[0] = u + v;
        r.e[1] = r.e[2] = Real(0);
        r.n_real = 1;
    }
    // one Newton polish per real root
    for (int i = 0; i < r.n_real; ++i) {
        const Real y = r.e[i];
        const Real h = Real(4) * y * y * y - g2 * y - g3;
        const Real hp = Real(12) * y * y - g2;
        if (hp != Real(0)) r.e[i] = y - h / hp;
    }
    return r;
}

template <class Real>
Real weierstrass_p(Real u, const CubicRoots<Real>& cr) {
    if (u == Real(0)) throw std::domain_error("weierstrass_p: pole at u = 0");
    const Real g2 = cr.g2, g3 = cr.g3;
    const Real c3 = xm::fabs(g2 * g2 * g2), c27 = Real(27) * g3 * g3;
    const Real ztol = Real(1e-10) * (c3 > c27 ? c3 : c27);
    if (g2 == Real(0) && g3 == Real(0)) return Real(1) / (u * u);
    if (xm::fabs(cr.delta) <= ztol) {
        // degenerate lattice
        const Real c = xm::sqrt(xm::fabs(g2) / Real(12));
        const Real w = xm::sqrt(Real(3) * c) * u;
        if (g3 < Real(0)) {
            const Real sh = xm::sinh(w);
            if (sh == Real(0)) throw std::domain_error("weierstrass_p: pole");
            return c + Real(3) * c / (sh * sh);
        }
        const Real sn = xm::sin(w);
        if (sn == Real(0)) throw std::domain_error("weierstrass_p: pole");
        return -c + Real(3) * c / (sn * sn);
    }
    if (cr.delta > Real(0)) {
        const Real e1 = cr.e[0], e2 = cr.e[1], e3 = cr.e[2];
        const Real s = xm::sqrt(e1 - e3);
        const Real m1 = (e2 - e3) / (e1 - e3);
        const auto j = jacobi_sn_cn_dn(u * s, m1);
        if (j.sn == Real(0)) throw std::domain_error("weierstrass_p: pole");
        return e3 + (e1 - e3) / (j.sn * j.sn);
    }
    const Real e2 = cr.e[0];  // the single real root
    const Real H2 = xm::sqrt(Real(3) * e2 * e2 - g2 / Real(4));
    const Real m2 = Real(0.5) - Real(3) * e2 / (Real(4) * H2);
    const auto j = jacobi_sn_cn_dn(Real(2) * xm::sqrt(H2) * u, m2);
    if (j.cn == Real(1)) throw std::domain_error("weierstrass_p: pole");
    return e2 + H2 * (Real(1) + j.cn) / (Real(1) - j.cn);
}

}  // namespace ring_ladder
