#include <doctest.h>

#include <cmath>
#include <random>

#include "qrabi/meanfield.hpp"
#include "qrabi/stability.hpp"

using namespace qrabi;

namespace {

ModelParams make(double tau, double g, double kappa = 3.0, double gamma = 0.5) {
    ModelParams p;
    p.tau = tau;
    p.g_tilde = g;
    p.kappa = kappa;
    p.gamma_tilde = gamma;
    return p;
}

// Independent residual oracle: the three steady-state equations evaluated
// directly from (x, y, s) without going through steady_residual's internals.
double oracle_residual(const ModelParams& p, const meanfield::MeanFieldState& s) {
    const std::complex<double> I(0.0, 1.0);
    const std::complex<double> alpha(s.x, s.y);
    const std::complex<double> sm = 0.5 * std::complex<double>(s.s_x, -s.s_y);
    const std::complex<double> sp = std::conj(sm);
    const double g = p.g_tilde;
    const std::complex<double> eq1 = (1.0 - I * p.gamma_tilde) * alpha + g * (sm + p.tau * sp) +
                                     2.0 * p.kappa * g * g * (alpha + std::conj(alpha));
    const std::complex<double> w = alpha + p.tau * std::conj(alpha);
    const std::complex<double> eq2 = g * w * s.s_z - sm;
    const std::complex<double> eq3 = g * (std::conj(w) * sm - w * sp);
    return std::max({std::abs(eq1), std::abs(eq2), std::abs(eq3)});
}

}  // namespace

TEST_CASE("s_z roots satisfy the determinant condition") {
    const auto p = make(6.0, 0.5);
    const auto roots = meanfield::solve_sz(p);
    bool any_physical = false;
    for (const auto& r : roots) {
        CHECK(std::abs(meanfield::determinant_m(p, r.s_z)) < 1e-10);
        if (r.physical) {
            any_physical = true;
            CHECK(r.s_z > -1.0);
            CHECK(r.s_z < 0.0);
        }
    }
    CHECK(any_physical);  // bistable-region parameters
}

TEST_CASE("isotropic line rejects the generic solver") {
    const auto p = make(1.0, 1.0, 0.0, 0.5);
    CHECK_THROWS_AS(meanfield::solve_sz(p), meanfield::DegenerateAnisotropy);
    // dedicated formula: s_z = -(1 + gamma^2 + 4 kappa g^2)/(4 g^2)
    const double sz = meanfield::isotropic_sz(p);
    CHECK(sz == doctest::Approx(-(1.0 + 0.25) / 4.0).epsilon(1e-12));
    // kappa >= 1 pushes the root below -1 for every coupling (no-go)
    for (double g = 0.1; g < 5.0; g += 0.13)
        CHECK(meanfield::isotropic_sz(make(1.0, g, 1.0, 0.5)) < -1.0);
}

TEST_CASE("double root at the g_c^b boundary") {
    const double tau = 5.0, kappa = 3.0, gamma = 0.5;
    const auto b = meanfield::critical_g_b(tau, kappa, gamma);
    REQUIRE(!b.g_c_b.empty());
    const auto p = make(tau, b.g_c_b.front(), kappa, gamma);
    const auto roots = meanfield::solve_sz(p);
    REQUIRE(!roots.empty());
    // discriminant vanishes: every root collapses onto -h/((1-tau^2)^2 g^2)
    const double g2 = p.g_tilde * p.g_tilde;
    const double h = 1.0 + tau * tau + 2.0 * kappa * g2 * (1.0 - tau) * (1.0 - tau);
    const double sz_double = -h / ((1.0 - tau * tau) * (1.0 - tau * tau) * g2);
    for (const auto& r : roots) CHECK(r.s_z == doctest::Approx(sz_double).epsilon(1e-5));
}

TEST_CASE("solve_xy states satisfy the full nonlinear system") {
    for (const auto& pt : {make(2.0, 1.0), make(6.0, 0.5), make(3.3, 0.6), make(-2.5, 1.2)}) {
        for (const auto& root : meanfield::sz_candidates(pt)) {
            if (!root.physical) continue;
            const auto states = meanfield::solve_xy(pt, root);
            CHECK(states.size() == 2);  // Z2 pair
            for (const auto& s : states) {
                CHECK(oracle_residual(pt, s) < 1e-9);
                CHECK(meanfield::steady_residual(pt, s) < 1e-9);
                const double norm = s.s_x * s.s_x + s.s_y * s.s_y + s.s_z * s.s_z;
                CHECK(std::abs(norm - 1.0) < 1e-12);
            }
            // Z2 partners are exact mirrors
            CHECK(states[0].x == doctest::Approx(-states[1].x).epsilon(1e-14));
            CHECK(states[0].y == doctest::Approx(-states[1].y).epsilon(1e-14));
        }
    }
}

TEST_CASE("kappa=0 critical lines reduce to the known formula") {
    for (double tau : {0.3, 0.5, -0.4, 2.0, -3.0}) {
        for (double gamma : {0.1, 0.5, 0.9}) {
            const auto pm = meanfield::critical_g_pm(tau, 0.0, gamma);
            const double omt2 = (1.0 - tau * tau) * (1.0 - tau * tau);
            const double rad = 4.0 * tau * tau - gamma * gamma * omt2;
            if (rad < 0.0) continue;
            // +/- sqrt over (1 - tau^2)^2
            const double a = (tau * tau + 1.0 - std::sqrt(rad)) / omt2;
            const double b = (tau * tau + 1.0 + std::sqrt(rad)) / omt2;
            if (a > 0.0 && pm.g_c_minus)
                CHECK(*pm.g_c_minus == doctest::Approx(std::sqrt(a)).epsilon(1e-12));
            if (b > 0.0 && pm.g_c_plus)
                CHECK(*pm.g_c_plus == doctest::Approx(std::sqrt(b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-system limit of the minus branch") {
    // gamma -> 0: g_c^- = 1/|1-tau| for tau < kappa
    const auto pm = meanfield::critical_g_pm(2.0, 3.0, 1e-8);
    REQUIRE(pm.g_c_minus.has_value());
    CHECK(*pm.g_c_minus == doctest::Approx(1.0).epsilon(1e-4));
    // tau > kappa: g_c = 1/sqrt((tau+1)^2 - 4 kappa)
    const auto pm2 = meanfield::critical_g_pm(4.0, 3.0, 1e-8);
    REQUIRE(pm2.g_c_minus.has_value());
    CHECK(*pm2.g_c_minus == doctest::Approx(1.0 / std::sqrt(25.0 - 12.0)).epsilon(1e-4));
}

TEST_CASE("g_c^b closed-dissipationless limit and kappa=0 anisotropies") {
    // gamma -> 0, kappa != 0: g_c^f = sqrt(tau/(kappa (tau-1)^2))
    const auto b = meanfield::critical_g_b(5.0, 3.0, 1e-10);
    REQUIRE(!b.g_c_b.empty());
    CHECK(b.g_c_b.front() == doctest::Approx(std::sqrt(5.0 / (3.0 * 16.0))).epsilon(1e-4));

    // kappa = 0: boundary is g-independent, tau_c_b = +/-(1 +/- sqrt(gamma^2+1))/gamma
    const double gamma = 0.5;
    const auto b0 = meanfield::critical_g_b(0.0, 0.0, gamma);
    CHECK(b0.g_c_b.empty());
    REQUIRE(b0.tau_c_b.size() == 4);
    for (double tc : b0.tau_c_b) {
        bool match = false;
        for (double s1 : {-1.0, 1.0})
            for (double s2 : {-1.0, 1.0})
                if (std::abs(tc - s1 * (1.0 + s2 * std::sqrt(gamma * gamma + 1.0)) / gamma) <
                    1e-10)
                    match = true;
        CHECK(match);
        // h^2 = q at tau_c_b independently of g
        for (double g : {0.3, 0.8, 1.7}) {
            const double h = 1.0 + tc * tc;
            const double q = (1.0 - tc * tc) * (1.0 - tc * tc) * (1.0 + gamma * gamma);
            CHECK(std::abs(h * h - q) < 1e-8 * std::abs(h * h) * (1.0 + g));
        }
    }
}

TEST_CASE("merge point of the g_c branches") {
    const double tau_cs = meanfield::merge_tau(3.0, 0.5, 2.0, 3.0);
    CHECK(tau_cs == doctest::Approx(2.603).epsilon(1e-3));
    // residual of the defining equation
    const double lhs = std::abs((3.0 - tau_cs) / (1.0 - tau_cs));
    const double rhs = 0.5 * std::sqrt(0.25 * (1.0 + tau_cs) * (1.0 + tau_cs) - 3.0);
    CHECK(std::abs(lhs - rhs) < 1e-9);
    const double g_c0 = meanfield::merge_g(tau_cs, 3.0);
    CHECK(g_c0 == doctest::Approx(0.839).epsilon(2e-3));
    // the two branches indeed coincide there
    const auto pm = meanfield::critical_g_pm(tau_cs, 3.0, 0.5);
    REQUIRE(pm.g_c_minus.has_value());
    REQUIRE(pm.g_c_plus.has_value());
    CHECK(std::abs(*pm.g_c_plus - *pm.g_c_minus) < 1e-4);
    CHECK_THROWS_AS(meanfield::merge_tau(3.0, 0.5, 1.2, 1.5), meanfield::NoRootInWindow);
}

TEST_CASE("tricritical point locations") {
    const auto pts = meanfield::tricritical_points(3.0, 0.5, 1.5, 8.0);
    REQUIRE(!pts.empty());
    bool found = false;
    const double g_c0 = meanfield::merge_g(meanfield::merge_tau(3.0, 0.5, 2.0, 3.0), 3.0);
    for (const auto& [tau, g] : pts) {
        if (std::abs(tau - 2.414) < 5e-3) {
            found = true;
            CHECK(std::abs(g - g_c0) > 1e-6);  // distinct from the merge point
        }
    }
    CHECK(found);

    // kappa=0, gamma -> 0: a tricritical point approaches (tau, g) = (0, 1)
    const auto pts0 = meanfield::tricritical_points(0.0, 1e-4, -0.5, 0.5);
    bool near_origin = false;
    for (const auto& [tau, g] : pts0)
        if (std::abs(tau) < 0.01 && std::abs(g - 1.0) < 0.01) near_origin = true;
    CHECK(near_origin);
}

TEST_CASE("phase classification along the g_cr = 3 path") {
    auto on_path = [](double g) { return make(3.0 / g, g); };
    CHECK(meanfield::classify_phase(on_path(0.3)).label == PhaseLabel::NP);
    CHECK(meanfield::classify_phase(on_path(0.8)).label == PhaseLabel::Bistable);
    CHECK(meanfield::classify_phase(on_path(1.5)).label == PhaseLabel::SRP);
    CHECK(meanfield::classify_phase(on_path(2.2)).label == PhaseLabel::NP);  // reentrant
}

TEST_CASE("no-go line is NP everywhere") {
    for (double kappa : {1.0, 2.0, 3.0}) {
        for (int i = 0; i < 100; ++i) {
            const double g = 0.05 + 5.0 * i / 99.0;
            const auto p = make(1.0, g, kappa, 0.5);
            CHECK(meanfield::classify_phase(p).label == PhaseLabel::NP);
        }
    }
}

TEST_CASE("kappa=0 boundary is even in tau") {
    for (double tau : {0.3, 0.7, 2.0, 4.5}) {
        for (double gamma : {0.2, 0.6}) {
            const auto a = meanfield::critical_g_pm(tau, 0.0, gamma);
            const auto b = meanfield::critical_g_pm(-tau, 0.0, gamma);
            REQUIRE(a.g_c_minus.has_value() == b.g_c_minus.has_value());
            if (a.g_c_minus)
                CHECK(*a.g_c_minus == doctest::Approx(*b.g_c_minus).epsilon(1e-12));
            if (a.g_c_plus && b.g_c_plus)
                CHECK(*a.g_c_plus == doctest::Approx(*b.g_c_plus).epsilon(1e-12));
        }
    }
}

TEST_CASE("eta = 0 asymptote is flagged, not thrown") {
    // (1+tau)^2 = 4 kappa -> tau = 2 sqrt(kappa) - 1
    const double tau = 2.0 * std::sqrt(3.0) - 1.0;
    const auto pm = meanfield::critical_g_pm(tau, 3.0, 0.5);
    CHECK(pm.eta_zero);
}

TEST_CASE("validation rejects bad parameters") {
    ModelParams p;
    p.g_tilde = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.g_tilde = 0.1;
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
