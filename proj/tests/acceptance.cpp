// End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
// exits with the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ring_ladder/analytic.hpp"
#include "ring_ladder/elliptic.hpp"
#include "ring_ladder/meanfield.hpp"
#include "ring_ladder/mqst.hpp"
#include "ring_ladder/qubit.hpp"
#include "ring_ladder/setup.hpp"

using namespace ring_ladder;

namespace {

int n_fail = 0;

void report(int idx, bool pass, const std::string& what,
            const std::string& detail) {
    std::printf("criterion %d: %s - %s (%s)\n", idx, pass ? "PASS" : "FAIL",
                what.c_str(), detail.c_str());
    if (!pass) ++n_fail;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

SystemParams sys(double lr, double delta) {
    return SystemParams{lr, delta, 1.0, {}};
}

struct MatrixEntry {
    double lr, delta, z0, theta0;
};

const std::vector<MatrixEntry> kMatrix = {
    {0.0, 2.0, 0.0, 0.0},
    {0.0, 2.0, -0.8944271909999159, 0.0},
    {0.1, 0.0, 0.5, 0.0},
    {0.1, 1.0, 0.5, 0.0},
    {10.0, 0.0, 0.4, 0.0},
    {10.0, 0.0, 0.6, 0.0},
    {10.0, 0.0, 0.8, 0.0},
    {10.0, 1.0, -0.5, 0.0},
    {10.0, 1.0, 0.509117, 0.0},
    {10.0, 1.0, 0.5091177438541846, 0.0},
    {10.0, 1.0, 0.6, 0.0},
    {10.0, 1.0, 0.8606968821211354, 0.0},
    {10.0, 1.0, -0.1111881931757237, M_PI},
};

bool needs_quad_reference(const RegimeReport& r) {
    if (r.branch == Branch::DELTA0_K_EQ1 ||
        r.branch == Branch::GEN_DELTA_ZERO_DECAY ||
        r.branch == Branch::GEN_DELTA_ZERO_OSC ||
        r.branch == Branch::FROZEN_INF)
        return true;
    if (!std::isnan(r.k) && std::fabs(r.k - 1.0) < 1e-3) return true;
    if (!std::isnan(r.disc)) {
        const double s3 = std::fabs(r.g2 * r.g2 * r.g2);
        const double s27 = 27.0 * r.g3 * r.g3;
        if (std::fabs(r.disc) <= 1e-4 * std::max(s3, s27)) return true;
    }
    return false;
}

struct OracleSeries {
    std::vector<double> t, z;
};

// reference Z(s) over [0, s_max]; extended precision near degenerate manifolds
OracleSeries oracle(const MatrixEntry& e, const RegimeReport& rep,
                    double s_max, double sample_ds) {
    OracleSeries out;
    if (needs_quad_reference(rep)) {
        using Q = __float128;
        Q z0q = Q(e.z0), th0q = Q(e.theta0);
        if (rep.branch == Branch::FROZEN_INF)
            refine_frozen<Q>(Q(e.lr), Q(e.delta), z0q, th0q);
        else
            z0q = refine_degenerate_z0<Q>(rep.branch, Q(e.lr), Q(e.delta),
                                          z0q, th0q);
        reference_trajectory<Q>(Q(e.lr), Q(e.delta), z0q, th0q, Q(s_max),
                                Q(1) / Q(1024), Q(sample_ds),
                                [&](Q st, Q Z, Q) {
                                    out.t.push_back(double(st));
                                    out.z.push_back(double(Z));
                                });
    } else {
        const auto traj = integrate(sys(e.lr, e.delta), e.z0, e.theta0, s_max,
                                    1e-12, 1e-12, sample_ds);
        for (const auto& smp : traj.samples) {
            out.t.push_back(smp.s_tilde);
            out.z.push_back(smp.Z);
        }
    }
    return out;
}

double measured_period(const OracleSeries& o) {
    double zbar = 0.0;
    for (double v : o.z) zbar += v;
    zbar /= double(o.z.size());
    std::vector<double> tc;
    for (std::size_t i = 0; i + 1 < o.z.size(); ++i)
        if (o.z[i] < zbar && o.z[i + 1] >= zbar) {
            const double w = (zbar - o.z[i]) / (o.z[i + 1] - o.z[i]);
            tc.push_back(o.t[i] + w * (o.t[i + 1] - o.t[i]));
        }
    if (tc.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return (tc.back() - tc.front()) / double(tc.size() - 1);
}

}  // namespace

int main() {
    // ---- 1: closed forms vs. integration oracle across the branch matrix
    std::vector<OracleSeries> series;
    std::vector<RegimeReport> reports;
    double worst1 = 0;
    std::string worst1_at;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& e : kMatrix) {
        const auto p = sys(e.lr, e.delta);
        const auto rep = classify(p, e.z0, e.theta0);
        const auto o = oracle(e, rep, 20.0, 0.05);
        double mz = 0;
        for (std::size_t i = 0; i < o.t.size(); ++i)
            mz = std::max(mz, std::fabs(analytic_Z(p, e.z0, e.theta0,
                                                   o.t[i]) -
                                        o.z[i]));
        if (mz > worst1) {
            worst1 = mz;
            worst1_at = branch_name(rep.branch);
        }
        series.push_back(o);
        reports.push_back(rep);
    }
    const double secs1 =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(1, worst1 <= 1e-6 && secs1 < 10.0,
           "oracle equivalence across the branch matrix",
           "max |Z_analytic - Z_ODE| = " + sci(worst1) + " at " +
               worst1_at + ", " + std::to_string(secs1) + " s");

    // ---- 2: critical imbalance, closed form and trajectory bisection
    {
        const auto t2 = std::chrono::steady_clock::now();
        const auto ci = critical_imbalance(10.0, 0.0);
        const bool exact = ci.has_threshold && ci.Zc == 0.6;
        auto trapped = [&](double z0) {
            const auto d =
                detect_mqst(integrate(sys(10.0, 0.0), z0, 0.0, 40.0, 1e-10,
                                      1e-10, 0.01));
            return d.mqst;
        };
        double lo = 0.5, hi = 0.7;
        bool bracket = !trapped(lo) && trapped(hi);
        while (bracket && hi - lo > 1e-4) {
            const double mid = (lo + hi) / 2;
            (trapped(mid) ? hi : lo) = mid;
        }
        const double zc_num = (lo + hi) / 2;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t2)
                .count();
        report(2,
               exact && bracket && std::fabs(zc_num - 0.6) <= 1e-3 &&
                   secs < 30.0,
               "critical imbalance Zc = 0.6",
               "closed form " + std::to_string(ci.Zc) + ", bisection " +
                   std::to_string(zc_num) + ", " + std::to_string(secs) +
                   " s");
    }

    // ---- 3: period divergence approaching the separatrix
    {
        const auto p = sys(10.0, 0.0);
        const double T04 = classify(p, 0.4, 0.0).period;
        const double T08 = classify(p, 0.8, 0.0).period;
        const double Tlo = classify(p, 0.6 - 1e-4, 0.0).period;
        const double Thi = classify(p, 0.6 + 1e-4, 0.0).period;
        report(3, Tlo > 5.0 * T04 && Thi > 5.0 * T08,
               "period diverges at the separatrix",
               "T(0.6-1e-4)/T(0.4) = " + std::to_string(Tlo / T04) +
                   ", T(0.6+1e-4)/T(0.8) = " + std::to_string(Thi / T08));
    }

    // ---- 4: period formulas vs. measured periods
    {
        double worst = 0;
        std::string at = "-";
        for (std::size_t i = 0; i < kMatrix.size(); ++i) {
            if (!reports[i].periodic) continue;
            const double pm = measured_period(series[i]);
            if (std::isnan(pm)) continue;
            const double rel = std::fabs(pm - reports[i].period) /
                               reports[i].period;
            if (rel > worst) {
                worst = rel;
                at = branch_name(reports[i].branch);
            }
        }
        report(4, worst <= 1e-4, "period formulas match measured periods",
               "max rel. error = " + sci(worst) + " at " + at);
    }

    // ---- 5: energy conservation on every integration in the matrix
    {
        double worst = 0;
        for (const auto& e : kMatrix) {
            const auto traj = integrate(sys(e.lr, e.delta), e.z0, e.theta0,
                                        100.0, 1e-10, 1e-10, 0.1);
            const double H0 = traj.samples.front().H;
            for (const auto& smp : traj.samples)
                worst = std::max(worst, std::fabs(smp.H - H0));
        }
        report(5, worst <= 1e-8, "energy conservation over s in [0, 100]",
               "max |H - H0| = " + sci(worst));
    }

    // ---- 6: special-function suite
    {
        std::mt19937 rng(20240817);
        std::uniform_real_distribution<double> du(-10.0, 10.0), dm(0.0, 1.0);
        double worst_id = 0;
        for (int i = 0; i < 1000; ++i) {
            const double u = du(rng), m = dm(rng);
            const auto j = jacobi_sn_cn_dn(u, m);
            worst_id = std::max(worst_id,
                                std::fabs(j.sn * j.sn + j.cn * j.cn - 1.0));
            worst_id = std::max(
                worst_id, std::fabs(j.dn * j.dn + m * j.sn * j.sn - 1.0));
        }
        // K(m) vs. AGM-independent quadrature (midpoint-refined Richardson)
        double worst_K = 0;
        for (double m : {0.05, 0.3, 0.6, 0.9, 0.99}) {
            const int n = 1 << 16;
            double acc = 0;
            for (int i = 0; i < n; ++i) {
                const double t = M_PI / 2 * (i + 0.5) / n;
                const double s = std::sin(t);
                acc += 1.0 / std::sqrt(1.0 - m * s * s);
            }
            acc *= M_PI / 2 / n;
            worst_K = std::max(worst_K, std::fabs(ellint_K(m) - acc) / acc);
        }
        // Weierstrass defining ODE
        double worst_p = 0;
        const double h = 1e-6;
        for (auto [g2, g3] : {std::pair{4.0, 1.0}, std::pair{1.0, 1.0},
                              std::pair{12.0, -8.0}, std::pair{12.0, 8.0}}) {
            const auto cr = depressed_cubic_roots(g2, g3);
            for (double u : {0.25, 0.4, 0.7}) {
                const double p = weierstrass_p(u, cr);
                const double pd = (weierstrass_p(u + h, cr) -
                                   weierstrass_p(u - h, cr)) /
                                  (2 * h);
                const double rhs = 4 * p * p * p - g2 * p - g3;
                worst_p = std::max(worst_p, std::fabs(pd * pd - rhs) /
                                                std::max(1.0, std::fabs(rhs)));
            }
        }
        report(6, worst_id <= 1e-12 && worst_K <= 1e-10 && worst_p <= 1e-8,
               "special-function suite",
               "jacobi " + sci(worst_id) + ", K " +
                   sci(worst_K) + ", p-ODE " +
                   sci(worst_p));
    }

    // ---- 7: qubit landscape degeneracy at Phi_a - Phi_b = pi
    {
        auto land_at = [](double phi_diff) {
            QubitParams q;
            q.E_J = 1.0;
            q.E_Jp = 0.8;
            q.Phi_a = phi_diff / 2;
            q.Phi_b = -phi_diff / 2;
            q.N = 20;
            return find_minima(q, 128);
        };
        bool pass = false;
        std::string detail;
        try {
            const auto land = land_at(M_PI);
            if (land.minima.size() == 2) {
                const double dU =
                    std::fabs(land.minima[1].U - land.minima[0].U);
                double prev = dU;
                bool monotone = true;
                for (double det : {0.05, 0.1}) {
                    const auto l2 = land_at(M_PI - det);
                    const double d2 =
                        l2.minima.size() >= 2
                            ? std::fabs(l2.minima[1].U - l2.minima[0].U)
                            : std::numeric_limits<double>::infinity();
                    if (!(d2 > prev)) monotone = false;
                    prev = d2;
                }
                pass = dU <= 1e-10 && monotone;
                detail = "two minima, dU = " + std::to_string(dU);
            } else {
                detail = "expected 2 in-cell minima, found " +
                         std::to_string(land.minima.size());
            }
        } catch (const std::exception& ex) {
            detail = std::string("minimum search failed: ") + ex.what();
        }
        report(7, pass, "degenerate double-well qubit landscape", detail);
    }

    // ---- 8: ring spacing range
    {
        OpticalSetup s{};
        s.E0_sq = 1.0;
        s.l = 12;
        s.wavelength_lambda = 830e-9;
        s.k_LG = 2 * M_PI / s.wavelength_lambda;
        s.focal_f = 40e-3;
        s.mass_m = 1.0;
        s.r0 = 50e-6;
        s.beam_sep_D = 5.5e-3;
        const double d_hi = ring_spacing(s);
        s.beam_sep_D = 19.6e-3;
        const double d_lo = ring_spacing(s);
        const bool pass = std::fabs(d_hi - 6.0e-6) <= 0.02 * 6.0e-6 &&
                          std::fabs(d_lo - 1.7e-6) <= 0.02 * 1.7e-6;
        report(8, pass, "ring spacing 1.7-6 um across the beam separations",
               "d(5.5 mm) = " + std::to_string(d_hi * 1e6) +
                   " um, d(19.6 mm) = " + std::to_string(d_lo * 1e6) + " um");
    }

    // ---- 9: corrupted-modulus negative control
    {
        double least = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < kMatrix.size(); ++i) {
            const auto& e = kMatrix[i];
            if (e.lr != 10.0 || e.delta != 0.0) continue;  // Fig. 5 set
            const auto p = sys(e.lr, e.delta);
            const auto& o = series[i];
            double mz = 0;
            for (std::size_t j = 0; j < o.t.size(); ++j)
                mz = std::max(mz,
                              std::fabs(solve_delta0_nosqrt_k(
                                            p, e.z0, 0.0, o.t[j], nullptr) -
                                        o.z[j]));
            least = std::min(least, mz);
        }
        report(9, least > 1e-6,
               "sqrt-free modulus fails the oracle comparison",
               "smallest max-error across the set = " +
                   sci(least));
    }

    return n_fail;
}
