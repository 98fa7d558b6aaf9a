#include "ring_ladder/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ring_ladder {

namespace {

double coupling_offset(const QubitParams& q) {
    return double(q.N - 2) / q.N * (q.Phi_a - q.Phi_b);
}

}  // namespace

void validate(const QubitParams& q) {
    if (!(q.E_J > 0.0))
        throw std::invalid_argument("QubitParams: E_J must be > 0");
    if (q.N < 4 || q.N % 2 != 0)
        throw std::invalid_argument("QubitParams: N must be even and >= 4");
    if (q.l_max < 1)
        throw std::invalid_argument("QubitParams: l_max must be >= 1");
}

double effective_potential(double ta, double tb, const QubitParams& q) {
    const double w = q.E_J / (2.0 * (q.N - 1));
    const double da = ta - q.Phi_a, db = tb - q.Phi_b;
    return w * (da * da + db * db) - q.E_J * (std::cos(ta) + std::cos(tb)) -
           q.E_Jp * std::cos(ta - tb - coupling_offset(q));
}

void potential_gradient(double ta, double tb, const QubitParams& q,
                        double grad[2]) {
    const double w = q.E_J / (q.N - 1);
    const double sc = q.E_Jp * std::sin(ta - tb - coupling_offset(q));
    grad[0] = w * (ta - q.Phi_a) + q.E_J * std::sin(ta) + sc;
    grad[1] = w * (tb - q.Phi_b) + q.E_J * std::sin(tb) - sc;
}

void potential_hessian(double ta, double tb, const QubitParams& q,
                       double hess[3]) {
    const double w = q.E_J / (q.N - 1);
    const double cc = q.E_Jp * std::cos(ta - tb - coupling_offset(q));
    hess[0] = w + q.E_J * std::cos(ta) + cc;
    hess[1] = w + q.E_J * std::cos(tb) + cc;
    hess[2] = -cc;
}

double string_barrier(const QubitParams& q, const Minimum& from,
                      const Minimum& to, int n_images) {
    if (n_images < 3) n_images = 3;
    std::vector<double> xa(n_images), xb(n_images);
    for (int i = 0; i < n_images; ++i) {
        const double t = double(i) / (n_images - 1);
        xa[i] = from.theta_a + t * (to.theta_a - from.theta_a);
        xb[i] = from.theta_b + t * (to.theta_b - from.theta_b);
    }
    const double ftol = 1e-8 * q.E_J;
    double step = 0.05;
    for (int it = 0; it < 20000; ++it) {
        // move interior images along the perpendicular force
        double fmax = 0.0;
        std::vector<double> na = xa, nb = xb;
        for (int i = 1; i + 1 < n_images; ++i) {
            double g[2];
            potential_gradient(xa[i], xb[i], q, g);
            double ta = xa[i + 1] - xa[i - 1], tb = xb[i + 1] - xb[i - 1];
            const double tn = std::hypot(ta, tb);
            if (tn > 0) {
                ta /= tn;
                tb /= tn;
            }
            const double gpar = g[0] * ta + g[1] * tb;
            const double pa = g[0] - gpar * ta, pb = g[1] - gpar * tb;
            fmax = std::max(fmax, std::hypot(pa, pb));
            na[i] = xa[i] - step * pa / q.E_J;
            nb[i] = xb[i] - step * pb / q.E_J;
        }
        // reparametrize to equal arclength
        std::vector<double> arc(n_images, 0.0);
        for (int i = 1; i < n_images; ++i)
            arc[i] = arc[i - 1] +
                     std::hypot(na[i] - na[i - 1], nb[i] - nb[i - 1]);
        const double L = arc.back();
        if (L > 0) {
            int seg = 0;
            for (int i = 1; i + 1 < n_images; ++i) {
                const double target = L * i / (n_images - 1);
                while (seg + 2 < n_images && arc[seg + 1] < target) ++seg;
                const double denom = arc[seg + 1] - arc[seg];
                const double t = denom > 0 ? (target - arc[seg]) / denom : 0.0;
                xa[i] = na[seg] + t * (na[seg + 1] - na[seg]);
                xb[i] = nb[seg] + t * (nb[seg + 1] - nb[seg]);
            }
        }
        if (fmax < ftol) break;
    }
    double umax = effective_potential(from.theta_a, from.theta_b, q);
    for (int i = 0; i < n_images; ++i)
        umax = std::max(umax, effective_potential(xa[i], xb[i], q));
    return umax - effective_potential(from.theta_a, from.theta_b, q);
}

Landscape find_minima(const QubitParams& q, int grid_resolution) {
    validate(q);
    if (grid_resolution < 64)
        throw std::invalid_argument("find_minima: grid_resolution must be >= 64");
    const int R = grid_resolution;
    Landscape ls;
    ls.grid_resolution = R;
    ls.axis.resize(R);
    for (int i = 0; i < R; ++i)
        ls.axis[i] = -M_PI + 2.0 * M_PI * i / (R - 1);
    ls.grid_U.resize(std::size_t(R) * R);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j)
            ls.grid_U[std::size_t(i) * R + j] =
                effective_potential(ls.axis[i], ls.axis[j], q);

    auto at = [&](int i, int j) { return ls.grid_U[std::size_t(i) * R + j]; };
    std::vector<Minimum> mins;
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            bool lowest = true;
            for (int di = -1; di <= 1 && lowest; ++di)
                for (int dj = -1; dj <= 1 && lowest; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= R || jj >= R) continue;
                    if (at(ii, jj) < at(i, j)) lowest = false;
                }
            if (!lowest) continue;
            // Newton polish
            double ta = ls.axis[i], tb = ls.axis[j];
            bool converged = false;
            for (int it = 0; it < 200; ++it) {
                double g[2], h[3];
                potential_gradient(ta, tb, q, g);
                potential_hessian(ta, tb, q, h);
                const double det = h[0] * h[1] - h[2] * h[2];
                double dxa, dxb;
                if (h[0] > 0 && det > 0) {
                    dxa = (h[1] * g[0] - h[2] * g[1]) / det;
                    dxb = (h[0] * g[1] - h[2] * g[0]) / det;
                } else {  // fall back to a damped gradient step
                    dxa = g[0] / q.E_J * 0.2;
                    dxb = g[1] / q.E_J * 0.2;
                }
                ta -= dxa;
                tb -= dxb;
                if (std::hypot(g[0], g[1]) < 1e-13 * q.E_J) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            double h[3];
            potential_hessian(ta, tb, q, h);
            if (!(h[0] > 0 && h[0] * h[1] - h[2] * h[2] > 0)) continue;
            if (ta < -M_PI - 1e-6 || ta > M_PI + 1e-6 || tb < -M_PI - 1e-6 ||
                tb > M_PI + 1e-6)
                continue;
            bool dup = false;
            for (const auto& m : mins)
                if (std::hypot(m.theta_a - ta, m.theta_b - tb) < 1e-6)
                    dup = true;
            if (!dup)
                mins.push_back({ta, tb, effective_potential(ta, tb, q)});
        }
    }
    if (mins.empty())
        throw std::runtime_error("find_minima: degenerate landscape, "
                                 "no minimum with positive-definite Hessian");
    std::sort(mins.begin(), mins.end(),
              [](const Minimum& a, const Minimum& b) { return a.U < b.U; });
    ls.minima = mins;

    for (std::size_t i = 0; i + 1 < mins.size(); ++i) {
        const Minimum& lo = mins[i].U <= mins[i + 1].U ? mins[i] : mins[i + 1];
        const Minimum& hi = mins[i].U <= mins[i + 1].U ? mins[i + 1] : mins[i];
        ls.barriers.push_back(string_barrier(q, lo, hi));
    }
    ls.intra_cell_barrier =
        mins.size() >= 2 ? string_barrier(q, mins[0], mins[1]) : 0.0;
    Minimum wrapped{mins[0].theta_a + 2.0 * M_PI,
                    mins[0].theta_b + 2.0 * M_PI,
                    effective_potential(mins[0].theta_a + 2.0 * M_PI,
                                        mins[0].theta_b + 2.0 * M_PI, q)};
    ls.inter_cell_barrier = string_barrier(q, mins[0], wrapped);
    ls.barrier_ratio = ls.inter_cell_barrier != 0.0
                           ? ls.intra_cell_barrier / ls.inter_cell_barrier
                           : 0.0;
    return ls;
}

std::vector<BathMode> bath_spectrum(const QubitParams& q) {
    validate(q);
    std::vector<BathMode> out;
    const int kmax = (q.N - 2) / 2;
    for (int k = 1; k <= kmax; ++k) {
        const double x = 2.0 * M_PI * k / (q.N - 1);
        out.push_back({std::sqrt(2.0 * q.E_J * q.U_int * (1.0 - std::cos(x))),
                       4.0 / std::sqrt(double(q.N - 1)) * std::sin(x)});
    }
    return out;
}

double admittance(const QubitParams& q, double omega_l) {
    double acc = 0.0;
    for (const auto& m : bath_spectrum(q))
        acc += m.zeta * m.zeta / (m.omega * m.omega + omega_l * omega_l);
    return acc;
}

KernelResult kernel_G(const QubitParams& q, double tau) {
    validate(q);
    if (!(q.beta > 0.0))
        throw std::invalid_argument("kernel_G: beta must be > 0");
    if (tau < 0.0 || tau > q.beta)
        throw std::invalid_argument("kernel_G: tau outside [0, beta]");
    const int kmax = (q.N - 2) / 2;
    std::vector<double> ck(kmax), denom0(kmax);
    for (int k = 1; k <= kmax; ++k) {
        ck[k - 1] = std::cos(2.0 * M_PI * k / (q.N - 1));
        denom0[k - 1] = 2.0 * q.E_J * q.U_int * (1.0 - ck[k - 1]);
    }
    auto partial = [&](int lmax) {
        std::complex<double> acc{0.0, 0.0};
        for (int l = 1; l <= lmax; ++l) {  // l = 0 term vanishes
            const double wl = 2.0 * M_PI * l / q.beta;
            const double wl2 = wl * wl;
            double s = 0.0;
            for (int k = 0; k < kmax; ++k)
                s += wl2 * (1.0 + ck[k]) / (denom0[k] + wl2);
            acc += s * std::exp(std::complex<double>(0.0, wl * tau));
        }
        return acc;
    };
    KernelResult res;
    res.G = partial(q.l_max);
    const std::complex<double> g2 = partial(2 * q.l_max);
    res.convergence = std::abs(g2 - res.G) / (std::abs(g2) + 1e-300);
    res.warning = res.convergence > 0.01;
    return res;
}

}  // namespace ring_ladder
