#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ring_ladder/meanfield.hpp"

using namespace ring_ladder;

namespace {

SystemParams sys(double lr, double delta) {
    SystemParams p;
    p.lambda_rho = lr;
    p.delta = delta;
    p.omega0 = 1.0;
    return p;
}

}  // namespace

TEST_CASE("energy conservation over a long window") {
    for (auto [lr, d, z0] : {std::tuple{10.0, 0.0, 0.4},
                             std::tuple{10.0, 1.0, 0.6},
                             std::tuple{0.1, 0.0, 0.5},
                             std::tuple{10.0, 0.0, 0.8}}) {
        const auto traj = integrate(sys(lr, d), z0, 0.0, 100.0, 1e-10, 1e-10,
                                    0.05);
        REQUIRE(!traj.samples.empty());
        const double H0 = traj.samples.front().H;
        double drift = 0;
        for (const auto& s : traj.samples)
            drift = std::max(drift, std::fabs(s.H - H0));
        CHECK(drift <= 1e-8);
        CHECK(traj.samples.back().s_tilde ==
              doctest::Approx(100.0).epsilon(1e-10));
    }
}

TEST_CASE("equations derive from the hamiltonian") {
    const auto p = sys(7.3, 0.4);
    const double h = 1e-6;
    for (auto [Z, Th] : {std::pair{0.3, 0.7}, std::pair{-0.5, 2.1},
                         std::pair{0.05, -1.2}}) {
        const auto d = rhs({Z, Th}, p);
        REQUIRE(!d.singular);
        const double dHdTh = (hamiltonian({Z, Th + h}, p) -
                              hamiltonian({Z, Th - h}, p)) /
                             (2 * h);
        const double dHdZ =
            (hamiltonian({Z + h, Th}, p) - hamiltonian({Z - h, Th}, p)) /
            (2 * h);
        CHECK(d.dZ == doctest::Approx(-dHdTh).epsilon(1e-8));
        CHECK(d.dTheta == doctest::Approx(dHdZ).epsilon(1e-8));
    }
    CHECK(rhs({1.0, 0.3}, p).singular);
}

TEST_CASE("time-reversal symmetry") {
    // (Z, Theta) -> (Z, -Theta) reverses the flow: integrating forward from
    // the reflected endpoint must return to the reflected start
    const auto p = sys(10.0, 1.0);
    const double T = 5.0;
    const auto fwd = integrate(p, 0.6, 0.3, T, 1e-12, 1e-12, T);
    const auto& end = fwd.samples.back();
    const auto back = integrate(p, end.Z, -end.Theta, T, 1e-12, 1e-12, T);
    const auto& ret = back.samples.back();
    CHECK(std::fabs(ret.Z - 0.6) < 1e-8);
    CHECK(std::fabs(ret.Theta - (-0.3)) < 1e-8);
}

TEST_CASE("singular orbit halts at the pole") {
    // lambda*rho = 0, H0 = 0: Z swings to -1 where the phase equation blows up
    const auto traj = integrate(sys(0.0, 0.0), 0.0, M_PI / 2, 10.0, 1e-10,
                                1e-10, 0.01);
    CHECK(traj.singular_stop);
    CHECK(std::fabs(traj.samples.back().Z) > 0.999);
    CHECK(traj.samples.back().s_tilde < 10.0);
}

TEST_CASE("input validation") {
    const auto p = sys(1.0, 0.0);
    CHECK_THROWS_AS(integrate(p, 1.5, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, 0.5, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, 0.5, 0.0, 1.0, 1e-2, 1e-10),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, 0.5, 0.0, 1.0, 1e-10, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, 0.5, 0.0, 1.0, 1e-10, 1e-10, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(hamiltonian({1.2, 0.0}, p), std::domain_error);
}

TEST_CASE("josephson current") {
    const State st{0.6, 0.5};
    CHECK(josephson_current_reduced(st) ==
          doctest::Approx(std::sqrt(1 - 0.36) * std::sin(0.5)).epsilon(1e-14));
    CHECK(josephson_current(st, 1000.0, 0.25, 1.0) ==
          doctest::Approx(250.0 * josephson_current_reduced(st))
              .epsilon(1e-14));
    CHECK(josephson_current_reduced({1.0, 0.5}) == 0.0);
}

TEST_CASE("csv output layout") {
    const auto traj = integrate(sys(10.0, 0.0), 0.4, 0.0, 1.0, 1e-10, 1e-10,
                                0.5);
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    const std::string text = os.str();
    CHECK(text.rfind("s_tilde,Z,Theta,H,H_drift\n", 0) == 0);
    // one line per sample plus header
    size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == traj.samples.size() + 1);
}

TEST_CASE("quad-precision reference matches the adaptive integrator") {
    using Q = __float128;
    const auto p = sys(10.0, 1.0);
    const auto traj = integrate(p, 0.6, 0.0, 2.0, 1e-12, 1e-12, 0.5);
    std::vector<double> zs;
    reference_trajectory<Q>(Q(10), Q(1), Q(0.6), Q(0), Q(2), Q(1) / 1024,
                            Q(0.5), [&](Q, Q Z, Q) {
                                zs.push_back((double)Z);
                            });
    REQUIRE(zs.size() == traj.samples.size());
    for (size_t i = 0; i < zs.size(); ++i)
        CHECK(std::fabs(zs[i] - traj.samples[i].Z) < 1e-9);
}
