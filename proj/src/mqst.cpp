#include "ring_ladder/mqst.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ring_ladder {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// E - U(Z) = (1 - Z^2) - (H0 - lr Z^2/2 - Delta Z)^2
double room(const SystemParams& p, double H0, double Z) {
    const double P = H0 - p.lambda_rho * Z * Z / 2.0 - p.delta * Z;
    return (1.0 - Z * Z) - P * P;
}

double room_deriv(const SystemParams& p, double H0, double Z) {
    const double P = H0 - p.lambda_rho * Z * Z / 2.0 - p.delta * Z;
    return -2.0 * Z + 2.0 * P * (p.lambda_rho * Z + p.delta);
}

}  // namespace

CriticalImbalance critical_imbalance(double lambda_rho, double theta0) {
    CriticalImbalance out{false, kNaN};
    if (!(lambda_rho > 0.0)) return out;
    const double c2 = std::cos(2.0 * theta0);
    const double lr = lambda_rho, lr2 = lr * lr;
    const double rad = (1.0 + c2) * (c2 + 2.0 * (lr - 1.0) * (lr - 1.0) - 1.0);
    if (rad < 0.0) return out;
    const double zc2 = 2.0 / lr - (1.0 + c2) / lr2 + std::sqrt(rad) / lr2;
    if (!(zc2 > 1e-14) || zc2 > 1.0) return out;
    out.has_threshold = true;
    out.Zc = std::sqrt(zc2);
    return out;
}

PotentialSlice classical_potential(const SystemParams& p, double H0, double Z) {
    const double lr = p.lambda_rho, d = p.delta;
    PotentialSlice s;
    s.E = 1.0 - H0 * H0;
    s.U = Z * Z * (lr * lr * Z * Z / 4.0 + 1.0 + d * d - H0 * lr) +
          Z * (lr * d * Z * Z - 2.0 * H0 * d);
    return s;
}

std::vector<Interval> allowed_regions(const SystemParams& p, double H0) {
    const double lr = p.lambda_rho, d = p.delta;
    // room(Z) = c4 Z^4 + c3 Z^3 + c2 Z^2 + c1 Z + c0
    double c[5] = {1.0 - H0 * H0, 2.0 * H0 * d, -(1.0 + d * d - H0 * lr),
                   -lr * d, -lr * lr / 4.0};
    int deg = 4;
    while (deg > 0 && std::fabs(c[deg]) < 1e-300) --deg;
    std::vector<double> roots;
    if (deg >= 1) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 0; i < deg; ++i) comp(0, i) = -c[deg - 1 - i] / c[deg];
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        for (int i = 0; i < deg; ++i) {
            const auto ev = es.eigenvalues()[i];
            if (std::fabs(ev.imag()) > 1e-8 * (1.0 + std::fabs(ev.real())))
                continue;
            double z = ev.real();
            for (int it = 0; it < 5; ++it) {
                const double f = room(p, H0, z), fp = room_deriv(p, H0, z);
                if (fp == 0.0) break;
                z -= f / fp;
            }
            if (z >= -1.0 - 1e-10 && z <= 1.0 + 1e-10)
                roots.push_back(std::clamp(z, -1.0, 1.0));
        }
    }
    roots.push_back(-1.0);
    roots.push_back(1.0);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::fabs(a - b) < 1e-12;
                            }),
                roots.end());
    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double mid = (roots[i] + roots[i + 1]) / 2.0;
        if (room(p, H0, mid) >= -1e-14) {
            if (!out.empty() && std::fabs(out.back().hi - roots[i]) < 1e-12)
                out.back().hi = roots[i + 1];
            else
                out.push_back({roots[i], roots[i + 1]});
        }
    }
    return out;
}

double phase_of_Z(const SystemParams& p, double H0, double Z, int sign) {
    const double w = 1.0 - Z * Z;
    if (w <= 0.0) throw std::domain_error("phase_of_Z: |Z| >= 1");
    double arg =
        (p.lambda_rho * Z * Z / 2.0 + p.delta * Z - H0) / std::sqrt(w);
    if (std::fabs(arg) > 1.0 + 1e-9)
        throw std::domain_error("phase_of_Z: Z outside the allowed region");
    arg = std::clamp(arg, -1.0, 1.0);
    const double th = std::acos(arg);
    return sign >= 0 ? th : -th;
}

PortraitCurve portrait_curve(const SystemParams& p, double z0, double theta0,
                             int id, int n_points) {
    if (n_points < 16) n_points = 16;
    PortraitCurve out;
    out.id = id;
    const double H0 = hamiltonian0(p.lambda_rho, p.delta, z0, theta0);
    const auto regions = allowed_regions(p, H0);
    const Interval* reg = nullptr;
    for (const auto& r : regions)
        if (z0 >= r.lo - 1e-9 && z0 <= r.hi + 1e-9) {
            reg = &r;
            break;
        }
    if (!reg) throw std::runtime_error("portrait_curve: z0 not in any region");
    const double lo = reg->lo, hi = reg->hi;
    if (hi - lo < 1e-12) {  // frozen point
        out.topology = CurveTopology::closed;
        out.Theta.push_back(theta0);
        out.Z.push_back(z0);
        return out;
    }
    auto arg_at = [&](double Z) {
        const double w = 1.0 - Z * Z;
        if (w <= 0.0) return Z > 0 ? 1.0 : -1.0;  // pole-touching orbits
        return std::clamp((p.lambda_rho * Z * Z / 2.0 + p.delta * Z - H0) /
                              std::sqrt(w),
                          -1.0, 1.0);
    };
    const double alo = arg_at(lo), ahi = arg_at(hi);
    const bool closed = alo * ahi > 0.0;
    out.topology = closed ? CurveTopology::closed : CurveTopology::running;
    const int half = n_points / 2;
    // interior chebyshev-like nodes avoid the sqrt singularity at |Z| = 1
    auto node = [&](int i) {
        const double t = 0.5 * (1.0 - std::cos(M_PI * i / (half - 1)));
        double Z = lo + (hi - lo) * t;
        return std::clamp(Z, -1.0 + 1e-12, 1.0 - 1e-12);
    };
    std::vector<double> thf, zf;
    for (int i = 0; i < half; ++i) {
        const double Z = node(i);
        thf.push_back(std::acos(arg_at(Z)));
        zf.push_back(Z);
    }
    if (closed) {
        // return branch mirrors the forward one; pi-centred librations use
        // 2 pi - acos so the loop stays contiguous on the cylinder
        const bool pi_centred = alo < 0.0;
        for (auto t : thf) {
            out.Theta.push_back(t);
        }
        out.Z = zf;
        for (int i = half - 1; i >= 0; --i) {
            out.Theta.push_back(pi_centred ? 2.0 * M_PI - thf[i] : -thf[i]);
            out.Z.push_back(zf[i]);
        }
        out.Theta.push_back(out.Theta.front());
        out.Z.push_back(out.Z.front());
        // recentre near theta0
        double cmin = out.Theta[0], cmax = cmin;
        for (auto t : out.Theta) {
            cmin = std::min(cmin, t);
            cmax = std::max(cmax, t);
        }
        const double shift =
            2.0 * M_PI * std::round((theta0 - (cmin + cmax) / 2.0) / (2.0 * M_PI));
        for (auto& t : out.Theta) t += shift;
        return out;
    }
    // running phase: one Z-cycle advances Theta by 2 pi; tile over |Theta|<=3pi
    std::vector<double> bth, bz;
    for (int i = 0; i < half; ++i) {
        bth.push_back(thf[i]);
        bz.push_back(zf[i]);
    }
    const double off = ahi < 0.0 ? 2.0 * M_PI : 0.0;
    for (int i = half - 1; i >= 0; --i) {
        bth.push_back(-thf[i] + off);
        bz.push_back(zf[i]);
    }
    for (int n = -2; n <= 2; ++n) {
        for (std::size_t i = 0; i < bth.size(); ++i) {
            const double t = bth[i] + 2.0 * M_PI * n;
            if (std::fabs(t) <= 3.0 * M_PI + 1e-9) {
                out.Theta.push_back(t);
                out.Z.push_back(bz[i]);
            }
        }
    }
    return out;
}

MqstDetection detect_mqst(const Trajectory& traj) {
    MqstDetection d{false, false, 0.0, 0, ""};
    const auto& s = traj.samples;
    if (s.size() < 4) {
        d.note = "too few samples";
        return d;
    }
    auto trap_mean = [&](std::size_t i0, std::size_t i1) {
        double acc = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
            acc += (s[i].Z + s[i + 1].Z) / 2.0 *
                   (s[i + 1].s_tilde - s[i].s_tilde);
        const double T = s[i1].s_tilde - s[i0].s_tilde;
        return T > 0 ? acc / T : s[i0].Z;
    };
    double zmin = s[0].Z, zmax = s[0].Z;
    for (const auto& q : s) {
        zmin = std::min(zmin, q.Z);
        zmax = std::max(zmax, q.Z);
    }
    if (zmax - zmin < 1e-12) {
        d.ok = true;
        d.mean_Z = s[0].Z;
        d.note = "constant imbalance";
        d.mqst = std::fabs(d.mean_Z) > 1e-3;
        return d;
    }
    const double zbar0 = trap_mean(0, s.size() - 1);
    // upward crossings of the coarse mean pick out whole oscillation periods
    std::vector<double> tc;
    std::vector<std::size_t> ic;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i].Z < zbar0 && s[i + 1].Z >= zbar0) {
            const double w = (zbar0 - s[i].Z) / (s[i + 1].Z - s[i].Z);
            tc.push_back(s[i].s_tilde +
                         w * (s[i + 1].s_tilde - s[i].s_tilde));
            ic.push_back(i);
        }
    }
    if (tc.size() < 2) {
        d.mean_Z = zbar0;
        d.note = "no full oscillation period in record";
        d.mqst = std::fabs(d.mean_Z) > 1e-3;
        return d;
    }
    // trapezoid between the first and last crossing, with boundary segments
    // ending exactly at Z = zbar0
    const std::size_t i0 = ic.front(), i1 = ic.back();
    double acc = (s[i0 + 1].Z + zbar0) / 2.0 * (s[i0 + 1].s_tilde - tc.front());
    for (std::size_t i = i0 + 1; i < i1; ++i)
        acc += (s[i].Z + s[i + 1].Z) / 2.0 * (s[i + 1].s_tilde - s[i].s_tilde);
    acc += (s[i1].Z + zbar0) / 2.0 * (tc.back() - s[i1].s_tilde);
    d.ok = true;
    d.n_periods = static_cast<int>(tc.size()) - 1;
    d.mean_Z = acc / (tc.back() - tc.front());
    d.mqst = std::fabs(d.mean_Z) > 1e-3;
    return d;
}

}  // namespace ring_ladder
