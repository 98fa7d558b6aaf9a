#include <doctest.h>

#include <cmath>
#include <complex>

#include "ring_ladder/qubit.hpp"

using namespace ring_ladder;

namespace {

QubitParams params(double ratio, double phi_a, double phi_b) {
    QubitParams q;
    q.E_J = 1.0;
    q.E_Jp = ratio;
    q.Phi_a = phi_a;
    q.Phi_b = phi_b;
    q.N = 20;
    return q;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate(params(0.8, M_PI / 2, -M_PI / 2)));
    QubitParams bad = params(0.8, 0, 0);
    bad.E_J = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = params(0.8, 0, 0);
    bad.N = 7;  // odd
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.N = 2;  // too small
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = params(0.8, 0, 0);
    bad.l_max = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK_THROWS_AS(find_minima(params(0.8, 0, 0), 16), std::invalid_argument);
}

TEST_CASE("ring-exchange symmetry of the potential") {
    // swapping the rings and their twists leaves U invariant
    const auto q = params(0.8, 1.1, -0.4);
    const auto qs = params(0.8, -0.4, 1.1);
    for (auto [a, b] : {std::pair{0.3, -0.9}, std::pair{2.0, 0.5},
                        std::pair{-1.4, -2.2}}) {
        CHECK(effective_potential(a, b, q) ==
              doctest::Approx(effective_potential(b, a, qs)).epsilon(1e-14));
    }
}

TEST_CASE("potential decomposes into periodic part plus confinement") {
    // removing the quadratic confinement must leave a 2pi-periodic function
    const auto q = params(0.8, M_PI / 2, -M_PI / 2);
    auto periodic_part = [&](double a, double b) {
        return effective_potential(a, b, q) -
               q.E_J * std::pow(a - q.Phi_a, 2) / (2.0 * (q.N - 1)) -
               q.E_J * std::pow(b - q.Phi_b, 2) / (2.0 * (q.N - 1));
    };
    for (auto [a, b] : {std::pair{0.2, 0.7}, std::pair{-1.0, 2.0}}) {
        CHECK(periodic_part(a, b) ==
              doctest::Approx(periodic_part(a + 2 * M_PI, b)).epsilon(1e-12));
        CHECK(periodic_part(a, b) ==
              doctest::Approx(periodic_part(a, b - 2 * M_PI)).epsilon(1e-12));
    }
}

TEST_CASE("gradient and hessian match finite differences") {
    const auto q = params(0.8, M_PI / 2, -M_PI / 2);
    const double h = 1e-6;
    for (auto [a, b] : {std::pair{0.4, -0.8}, std::pair{1.7, 2.3}}) {
        double g[2], hess[3];
        potential_gradient(a, b, q, g);
        potential_hessian(a, b, q, hess);
        const double ga = (effective_potential(a + h, b, q) -
                           effective_potential(a - h, b, q)) /
                          (2 * h);
        const double gb = (effective_potential(a, b + h, q) -
                           effective_potential(a, b - h, q)) /
                          (2 * h);
        CHECK(std::fabs(g[0] - ga) < 1e-8);
        CHECK(std::fabs(g[1] - gb) < 1e-8);
        double gp[2], gm[2];
        potential_gradient(a + h, b, q, gp);
        potential_gradient(a - h, b, q, gm);
        CHECK(std::fabs(hess[0] - (gp[0] - gm[0]) / (2 * h)) < 1e-7);
        CHECK(std::fabs(hess[2] - (gp[1] - gm[1]) / (2 * h)) < 1e-7);
        potential_gradient(a, b + h, q, gp);
        potential_gradient(a, b - h, q, gm);
        CHECK(std::fabs(hess[1] - (gp[1] - gm[1]) / (2 * h)) < 1e-7);
    }
}

TEST_CASE("landscape minima are genuine and the gradient vanishes there") {
    const auto q = params(0.8, M_PI / 2, -M_PI / 2);
    const auto land = find_minima(q, 96);
    REQUIRE(!land.minima.empty());
    CHECK(land.grid_resolution == 96);
    CHECK(land.grid_U.size() == 96u * 96u);
    for (const auto& m : land.minima) {
        double g[2], hess[3];
        potential_gradient(m.theta_a, m.theta_b, q, g);
        CHECK(std::hypot(g[0], g[1]) < 1e-10);
        potential_hessian(m.theta_a, m.theta_b, q, hess);
        // positive definite: trace and determinant positive
        CHECK(hess[0] + hess[1] > 0);
        CHECK(hess[0] * hess[1] - hess[2] * hess[2] > 0);
        CHECK(m.U ==
              doctest::Approx(effective_potential(m.theta_a, m.theta_b, q))
                  .epsilon(1e-12));
    }
    // minima are sorted by energy
    for (size_t i = 0; i + 1 < land.minima.size(); ++i)
        CHECK(land.minima[i].U <= land.minima[i + 1].U);
    // winding both phases by 2pi costs confinement energy: finite barrier
    CHECK(land.inter_cell_barrier > 0);
    CHECK(std::isfinite(land.barrier_ratio));
}

TEST_CASE("string barrier endpoints and positivity") {
    const auto q = params(0.8, M_PI / 2, -M_PI / 2);
    const auto land = find_minima(q, 96);
    REQUIRE(!land.minima.empty());
    const auto& m0 = land.minima.front();
    Minimum shifted{m0.theta_a + 2 * M_PI, m0.theta_b + 2 * M_PI,
                    effective_potential(m0.theta_a + 2 * M_PI,
                                        m0.theta_b + 2 * M_PI, q)};
    const double barrier = string_barrier(q, m0, shifted);
    CHECK(barrier > 0);
    // path to itself has no barrier
    CHECK(string_barrier(q, m0, m0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("bath spectrum") {
    const auto q = params(0.8, 0, 0);
    const auto modes = bath_spectrum(q);
    REQUIRE(modes.size() == (size_t)(q.N - 2) / 2);  // 9 modes at N = 20
    for (size_t i = 0; i < modes.size(); ++i) {
        const double arg = 2 * M_PI * double(i + 1) / (q.N - 1);
        CHECK(modes[i].omega ==
              doctest::Approx(std::sqrt(2 * q.E_J * q.U_int *
                                        (1 - std::cos(arg))))
                  .epsilon(1e-12));
        CHECK(modes[i].zeta ==
              doctest::Approx(4.0 / std::sqrt(q.N - 1.0) * std::sin(arg))
                  .epsilon(1e-12));
    }
    // frequencies increase with k over the first Brillouin half
    for (size_t i = 0; i + 1 < modes.size(); ++i)
        CHECK(modes[i].omega < modes[i + 1].omega);
    CHECK(modes[0].omega == doctest::Approx(0.329189).epsilon(1e-5));
}

TEST_CASE("admittance sum") {
    const auto q = params(0.8, 0, 0);
    // zero-frequency value: sum zeta_k^2 / omega_k^2
    CHECK(admittance(q, 0.0) == doctest::Approx(3.578947).epsilon(1e-5));
    // monotonically screened with frequency, with 1/omega^2 asymptotics
    CHECK(admittance(q, 1.0) < admittance(q, 0.5));
    const double y_big = admittance(q, 100.0);
    double z2 = 0;
    for (const auto& m : bath_spectrum(q)) z2 += m.zeta * m.zeta;
    CHECK(y_big == doctest::Approx(z2 / 1e4).epsilon(1e-3));
}

TEST_CASE("imaginary-time kernel") {
    auto q = params(0.8, 0, 0);
    q.l_max = 2000;
    // tau outside [0, beta] is rejected
    CHECK_THROWS_AS(kernel_G(q, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(kernel_G(q, q.beta + 0.1), std::invalid_argument);
    // at tau = 0 every phase factor is 1: purely real, slowly convergent sum
    const auto g0 = kernel_G(q, 0.0);
    CHECK(std::fabs(g0.G.imag()) < 1e-9 * std::fabs(g0.G.real()));
    CHECK(g0.G.real() > 0);
    CHECK(g0.warning);  // the tau = 0 tail decays only as 1/l
    // interior tau: oscillating phases tame the tail
    const auto gi = kernel_G(q, 0.5);
    CHECK(!gi.warning);
    CHECK(gi.convergence < 0.01);
    // halving l_max changes the interior value very little
    auto q2 = q;
    q2.l_max = 1000;
    const auto gi2 = kernel_G(q2, 0.5);
    CHECK(std::abs(gi.G - gi2.G) < 0.01 * (std::abs(gi.G) + 1.0));
}
