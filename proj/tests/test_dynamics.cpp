#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <complex>

#include "qrabi/dynamics.hpp"
#include "qrabi/meanfield.hpp"
#include "qrabi/stability.hpp"

using namespace qrabi;
using cd = std::complex<double>;

namespace {

ModelParams make(double tau, double g, double kappa = 3.0, double gamma = 0.5) {
    ModelParams p;
    p.tau = tau;
    p.g_tilde = g;
    p.kappa = kappa;
    p.gamma_tilde = gamma;
    return p;
}

}  // namespace

TEST_CASE("origin is a fixed point of the flow") {
    CHECK(std::abs(dynamics::rhs(make(2.0, 1.0), cd(0.0, 0.0), -1)) == 0.0);
    CHECK(std::abs(dynamics::rhs(make(2.0, 1.0), cd(0.0, 0.0), +1)) == 0.0);
}

TEST_CASE("mean-field SRP solutions are fixed points of the flow") {
    for (const auto& p : {make(2.0, 1.0), make(6.0, 0.5), make(3.3, 0.6)}) {
        for (const auto& root : meanfield::sz_candidates(p)) {
            if (!root.physical) continue;
            for (const auto& s : meanfield::solve_xy(p, root))
                CHECK(std::abs(dynamics::rhs(p, s.alpha(), -1)) < 1e-9);
        }
    }
}

TEST_CASE("isotropic fixed point matches the printed coherence") {
    // kappa = 0, tau = 1: |alpha| = g sqrt(1 - (1+gamma^2)^2/(16 g^4))/sqrt(1+gamma^2)
    const auto p = make(1.0, 1.2, 0.0, 0.5);
    const auto traj = dynamics::integrate(p, cd(0.4, 0.1), -1);
    REQUIRE(traj.converged_to.has_value());
    const double expected =
        1.2 * std::sqrt(1.0 - std::pow(1.25, 2) / (16.0 * std::pow(1.2, 4))) / std::sqrt(1.25);
    CHECK(std::abs(traj.alpha.back()) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("normal-phase relaxation with spin norm preserved") {
    const auto p = make(0.5, 1.0);
    const auto traj = dynamics::integrate(p, cd(0.2, 0.2), -1);
    REQUIRE(traj.converged_to.has_value());
    CHECK(std::abs(traj.spin.back().s_z + 1.0) < 1e-6);
    CHECK(std::abs(traj.alpha.back()) < 1e-4);
    CHECK(traj.steady_time > 0.0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.spin[i];
        CHECK(std::abs(s.s_x * s.s_x + s.s_y * s.s_y + s.s_z * s.s_z - 1.0) < 1e-12);
        CHECK(s.s_z < 0.0);  // branch -1 throughout
        if (i > 0) CHECK(traj.times[i] > traj.times[i - 1]);
    }
    // the approach to the NP can spiral, so check the decaying envelope:
    // the max of |alpha| over each successive quarter of the run shrinks
    const std::size_t n = traj.times.size();
    double prev_env = 1e300;
    for (int q = 0; q < 4; ++q) {
        double env = 0.0;
        for (std::size_t i = q * n / 4; i < (q + 1) * n / 4; ++i)
            env = std::max(env, std::abs(traj.alpha[i]));
        CHECK(env <= prev_env + 1e-12);
        prev_env = env;
    }
}

TEST_CASE("converged endpoints agree with the mean-field module") {
    const auto p = make(2.0, 1.2);
    const auto traj = dynamics::integrate(p, cd(0.5, 0.1), -1);
    REQUIRE(traj.converged_to.has_value());
    const auto& mf = *traj.converged_to;
    CHECK(std::abs(traj.alpha.back() - mf.alpha()) < 1e-6);
    CHECK(stability::assess(p, mf).stable);
    CHECK(mf.s_z > -1.0);
    CHECK(mf.s_z < 0.0);
}

TEST_CASE("bistable initial conditions select different attractors") {
    const auto p = make(6.0, 0.5);
    const auto a = dynamics::integrate(p, cd(0.3, 0.05), -1);
    const auto b = dynamics::integrate(p, cd(0.7, 0.1), -1);
    REQUIRE(a.converged_to.has_value());
    REQUIRE(b.converged_to.has_value());
    CHECK(std::abs(a.alpha.back()) < 1e-4);   // NP
    CHECK(std::abs(b.alpha.back()) > 1e-2);   // SRP
}

TEST_CASE("positive branch always inverts the spin") {
    for (const auto& p : {make(0.5, 1.0), make(2.0, 1.0), make(6.0, 0.5)}) {
        const auto traj = dynamics::integrate(p, cd(0.3, 0.2), +1);
        CHECK(std::abs(traj.spin.back().s_z - 1.0) < 1e-6);
        for (const auto& s : traj.spin) CHECK(s.s_z > 0.0);
    }
}

TEST_CASE("tolerance halving leaves the endpoint unchanged") {
    const auto p = make(2.0, 1.0);
    dynamics::IntegrateOptions o1, o2;
    o1.tol = 1e-10;
    o2.tol = 5e-11;
    const auto a = dynamics::integrate(p, cd(0.5, 0.1), -1, o1);
    const auto b = dynamics::integrate(p, cd(0.5, 0.1), -1, o2);
    CHECK(std::abs(a.alpha.back() - b.alpha.back()) < 1e-7);
}

TEST_CASE("basin maps: uniform phases and the bistable mixture") {
    dynamics::IntegrateOptions opt;
    opt.t_max = 300.0;

    const auto srp_map = dynamics::basin_map(make(2.0, 1.2), 0.1, 0.8, -0.3, 0.3, 5, 5, opt, 2);
    for (const auto l : srp_map.labels) CHECK(l == dynamics::BasinLabel::SRP);

    const auto np_map = dynamics::basin_map(make(0.5, 1.0), -0.5, 0.5, -0.5, 0.5, 4, 4, opt, 2);
    for (const auto l : np_map.labels) CHECK(l == dynamics::BasinLabel::NP);

    const auto bi = dynamics::basin_map(make(6.0, 0.5), 0.0, 0.9, -0.1, 0.2, 6, 6, opt, 2);
    bool has_np = false, has_srp = false;
    for (const auto l : bi.labels) {
        has_np |= (l == dynamics::BasinLabel::NP);
        has_srp |= (l == dynamics::BasinLabel::SRP);
    }
    CHECK(has_np);
    CHECK(has_srp);
}
