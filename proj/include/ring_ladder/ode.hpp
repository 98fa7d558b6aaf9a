#pragma once

// Generic fixed-dimension ODE steppers.
//  - dp45: adaptive Dormand-Prince 5(4), error controlled per unit step so the
//    accumulated drift over an interval scales like tol * length.
//  - gauss10: 5-stage Gauss-Legendre collocation (order 10, symplectic),
//    fixed step.  Its tableau is built at runtime in the working precision,
//    so it stays accurate when instantiated with __float128; used as the
//    high-accuracy reference for near-separatrix comparisons.

#include <array>
#include <cstddef>
#include <functional>

#include "ring_ladder/xmath.hpp"

namespace ring_ladder {
namespace ode {

enum class Status { ok, stopped, step_underflow };

template <class Real, std::size_t N>
using Vec = std::array<Real, N>;

// f: (s, y) -> dy/ds
// sample: called at s = s0, s0+ds, s0+2ds, ..., and at the final point
// stop: if returns true for the new state, integration halts with Status::stopped
template <class Real, std::size_t N, class F, class SampleCb, class StopPred>
Status dp45(F&& f, Vec<Real, N> y, Real s0, Real s1, Real rtol, Real atol,
            Real sample_ds, SampleCb&& sample, StopPred&& stop,
            std::size_t* n_accept = nullptr, std::size_t* n_reject = nullptr) {
    using V = Vec<Real, N>;
    static const Real c2 = Real(1) / 5, c3 = Real(3) / 10, c4 = Real(4) / 5,
                      c5 = Real(8) / 9;
    auto axpy = [](V& r, const V& y0, Real h, std::initializer_list<std::pair<Real, const V*>> terms) {
        for (std::size_t i = 0; i < N; ++i) {
            Real acc = y0[i];
            for (auto& t : terms) acc += h * t.first * (*t.second)[i];
            r[i] = acc;
        }
    };

    Real s = s0;
    Real next_sample = s0;
    Real h = sample_ds < (s1 - s0) ? sample_ds : (s1 - s0);
    std::size_t na = 0, nr = 0;
    V k1 = f(s, y);
    bool have_k1 = true;

    while (s < s1) {
        if (s >= next_sample - Real(1e-14) * (s1 - s0)) {
            sample(s, y);
            next_sample += sample_ds;
        }
        Real target = next_sample < s1 ? next_sample : s1;
        if (h > target - s) h = target - s;
        if (h <= Real(0)) h = target - s;
        if (!have_k1) {
            k1 = f(s, y);
            have_k1 = true;
        }
        V y2, y3, y4, y5, y6, y7;
        axpy(y2, y, h, {{Real(1) / 5, &k1}});
        V k2 = f(s + c2 * h, y2);
        axpy(y3, y, h, {{Real(3) / 40, &k1}, {Real(9) / 40, &k2}});
        V k3 = f(s + c3 * h, y3);
        axpy(y4, y, h,
             {{Real(44) / 45, &k1}, {Real(-56) / 15, &k2}, {Real(32) / 9, &k3}});
        V k4 = f(s + c4 * h, y4);
        axpy(y5, y, h,
             {{Real(19372) / 6561, &k1},
              {Real(-25360) / 2187, &k2},
              {Real(64448) / 6561, &k3},
              {Real(-212) / 729, &k4}});
        V k5 = f(s + c5 * h, y5);
        axpy(y6, y, h,
             {{Real(9017) / 3168, &k1},
              {Real(-355) / 33, &k2},
              {Real(46732) / 5247, &k3},
              {Real(49) / 176, &k4},
              {Real(-5103) / 18656, &k5}});
        V k6 = f(s + h, y6);
        axpy(y7, y, h,
             {{Real(35) / 384, &k1},
              {Real(500) / 1113, &k3},
              {Real(125) / 192, &k4},
              {Real(-2187) / 6784, &k5},
              {Real(11) / 84, &k6}});
        V k7 = f(s + h, y7);

        // embedded 4th-order difference
        Real errnorm = Real(0);
        for (std::size_t i = 0; i < N; ++i) {
            const Real e = h * (Real(71) / 57600 * k1[i] - Real(71) / 16695 * k3[i] +
                                Real(71) / 1920 * k4[i] -
                                Real(17253) / 339200 * k5[i] +
                                Real(22) / 525 * k6[i] - Real(1) / 40 * k7[i]);
            const Real ay = xm::fabs(y[i]) > xm::fabs(y7[i]) ? xm::fabs(y[i])
                                                             : xm::fabs(y7[i]);
            const Real sc = atol + rtol * ay;
            const Real q = e / sc;
            errnorm += q * q;
        }
        errnorm = xm::sqrt(errnorm / Real(N));

        if (errnorm <= h || h <= Real(16) * xm::eps<Real>() * xm::fabs(s)) {
            // accept (error-per-unit-step test)
            s += h;
            y = y7;
            k1 = k7;  // FSAL
            ++na;
            if (stop(s, y)) {
                sample(s, y);
                if (n_accept) *n_accept = na;
                if (n_reject) *n_reject = nr;
                return Status::stopped;
            }
        } else {
            ++nr;
            have_k1 = true;  // k1 still valid at s
        }
        Real fac = errnorm > Real(0)
                       ? Real(0.9) * xm::pow(h / errnorm, Real(0.25))
                       : Real(5);
        if (fac > Real(5)) fac = Real(5);
        if (fac < Real(0.2)) fac = Real(0.2);
        h *= fac;
        if (h < Real(1e3) * xm::eps<Real>() * (s1 - s0) && s < s1) {
            if (n_accept) *n_accept = na;
            if (n_reject) *n_reject = nr;
            return Status::step_underflow;
        }
    }
    sample(s, y);
    if (n_accept) *n_accept = na;
    if (n_reject) *n_reject = nr;
    return Status::ok;
}

// ---- Gauss-Legendre collocation, s = 5 stages, order 10 ----

template <class Real>
struct GaussTableau {
    Real c[5], b[5], a[5][5];
    GaussTableau() {
        // nodes: roots of P5 mapped to [0,1]; closed forms keep full precision
        const Real s70 = xm::sqrt(Real(70));
        const Real r1 = xm::sqrt((Real(35) - Real(2) * s70) / Real(63));
        const Real r2 = xm::sqrt((Real(35) + Real(2) * s70) / Real(63));
        const Real x[5] = {-r2, -r1, Real(0), r1, r2};
        for (int i = 0; i < 5; ++i) c[i] = (Real(1) + x[i]) / Real(2);
        // solve the order conditions  sum_j M[k][j] v_j = rhs_k  with
        // M[k][j] = c_j^k (Vandermonde), for b and each row of a
        auto solve5 = [&](const Real rhs[5], Real out[5]) {
            Real M[5][6];
            for (int k = 0; k < 5; ++k) {
                for (int j = 0; j < 5; ++j) {
                    Real p = Real(1);
                    for (int t = 0; t < k; ++t) p *= c[j];
                    M[k][j] = p;
                }
                M[k][5] = rhs[k];
            }
            for (int col = 0; col < 5; ++col) {
                int piv = col;
                for (int r = col + 1; r < 5; ++r)
                    if (xm::fabs(M[r][col]) > xm::fabs(M[piv][col])) piv = r;
                for (int j = 0; j < 6; ++j) {
                    const Real t = M[col][j];
                    M[col][j] = M[piv][j];
                    M[piv][j] = t;
                }
                for (int r = 0; r < 5; ++r) {
                    if (r == col) continue;
                    const Real fac = M[r][col] / M[col][col];
                    for (int j = col; j < 6; ++j) M[r][j] -= fac * M[col][j];
                }
            }
            for (int j = 0; j < 5; ++j) out[j] = M[j][5] / M[j][j];
        };
        Real rhs[5];
        for (int k = 0; k < 5; ++k) rhs[k] = Real(1) / Real(k + 1);
        solve5(rhs, b);
        for (int i = 0; i < 5; ++i) {
            for (int k = 0; k < 5; ++k) {
                Real p = Real(1);
                for (int t = 0; t < k + 1; ++t) p *= c[i];
                rhs[k] = p / Real(k + 1);
            }
            solve5(rhs, a[i]);
        }
    }
};

template <class Real, std::size_t N, class F, class SampleCb>
void gauss10(F&& f, Vec<Real, N> y, Real s0, Real s1, Real h_target,
             Real sample_ds, SampleCb&& sample) {
    static const GaussTableau<Real> tab;  // per-Real instantiation
    using V = Vec<Real, N>;
    long nsub = (long)((double)(sample_ds / h_target)) + 1;
    const Real h = sample_ds / Real(nsub);
    const long nsamp = (long)((double)((s1 - s0) / sample_ds) + 0.5);
    sample(s0, y);
    Real s = s0;
    for (long isamp = 0; isamp < nsamp; ++isamp) {
        for (long sub = 0; sub < nsub; ++sub) {
            V K[5];
            for (int i = 0; i < 5; ++i) K[i] = f(s + tab.c[i] * h, y);
            // fixed-point iteration on the stage derivatives
            for (int it = 0; it < 100; ++it) {
                V Knew[5];
                Real delta = Real(0);
                for (int i = 0; i < 5; ++i) {
                    V yi;
                    for (std::size_t d = 0; d < N; ++d) {
                        Real acc = y[d];
                        for (int j = 0; j < 5; ++j)
                            acc += h * tab.a[i][j] * K[j][d];
                        yi[d] = acc;
                    }
                    Knew[i] = f(s + tab.c[i] * h, yi);
                    for (std::size_t d = 0; d < N; ++d) {
                        const Real dd = xm::fabs(Knew[i][d] - K[i][d]);
                        if (dd > delta) delta = dd;
                    }
                }
                for (int i = 0; i < 5; ++i) K[i] = Knew[i];
                if (delta < Real(4) * xm::eps<Real>()) break;
            }
            for (std::size_t d = 0; d < N; ++d) {
                Real acc = y[d];
                for (int j = 0; j < 5; ++j) acc += h * tab.b[j] * K[j][d];
                y[d] = acc;
            }
            s += h;
        }
        s = s0 + Real(isamp + 1) * sample_ds;  // defeat drift in s itself
        sample(s, y);
    }
}

}  // namespace ode
}  // namespace ring_ladder
