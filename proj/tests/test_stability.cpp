#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
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

// Independent oracle: the full semiclassical flow in (x, y, s_x, s_y) with
// s_z eliminated through the spin norm, time in units of 1/omega. The Bloch
// equations ds/dt = h x s use the effective field
//   h = (delta/omega) (2 g Re w, -2 g Im w, 1),  w = alpha + tau alpha^*,
// and the cavity equation matches the first steady-state equation.
Eigen::Vector4d full_flow(const ModelParams& p, double ratio, const Eigen::Vector4d& v,
                          double branch_sign) {
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    const double g = p.g_tilde, t = p.tau;
    const cd alpha(v[0], v[1]);
    const double s_x = v[2], s_y = v[3];
    const double s_z = branch_sign * std::sqrt(std::max(0.0, 1.0 - s_x * s_x - s_y * s_y));
    const cd sm(0.5 * s_x, -0.5 * s_y);
    const cd sp = std::conj(sm);

    const cd dalpha = -I * ((1.0 - I * p.gamma_tilde) * alpha + g * (sm + t * sp) +
                            2.0 * p.kappa * g * g * (alpha + std::conj(alpha)));
    const cd w = alpha + t * std::conj(alpha);
    const double hx = ratio * 2.0 * g * w.real();
    const double hy = ratio * (-2.0) * g * w.imag();
    const double hz = ratio;
    Eigen::Vector4d out;
    out[0] = dalpha.real();
    out[1] = dalpha.imag();
    out[2] = hy * s_z - hz * s_y;
    out[3] = hz * s_x - hx * s_z;
    return out;
}

Eigen::Matrix4d jacobian(const ModelParams& p, double ratio, const Eigen::Vector4d& v0,
                         double branch_sign) {
    Eigen::Matrix4d J;
    const double h = 1e-7;
    for (int j = 0; j < 4; ++j) {
        Eigen::Vector4d vp = v0, vm = v0;
        vp[j] += h;
        vm[j] -= h;
        J.col(j) = (full_flow(p, ratio, vp, branch_sign) - full_flow(p, ratio, vm, branch_sign)) /
                   (2.0 * h);
    }
    return J;
}

// Two slowest eigenvalues (smallest modulus) of the 4x4 Jacobian.
std::array<std::complex<double>, 2> slow_eigs(const Eigen::Matrix4d& J) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(J);
    std::array<std::complex<double>, 4> all;
    for (int i = 0; i < 4; ++i) all[i] = es.eigenvalues()[i];
    std::sort(all.begin(), all.end(),
              [](auto a, auto b) { return std::abs(a) < std::abs(b); });
    return {all[0], all[1]};
}

}  // namespace

TEST_CASE("trace and antisymmetry identities of the stability matrix") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ut(-3.0, 7.0), ug(0.1, 2.0), uk(0.0, 4.0),
        ugam(0.05, 1.0);
    for (int i = 0; i < 50; ++i) {
        const auto p = make(ut(rng), ug(rng), uk(rng), ugam(rng));
        if (std::abs(std::abs(p.tau) - 1.0) < 1e-3) continue;
        const auto M = stability::build_M(p, meanfield::trivial_down());
        CHECK(std::abs(M.m11 + M.m22 + 2.0 * p.gamma_tilde) < 1e-12);
        CHECK(std::abs((M.m11 + p.gamma_tilde) + (M.m22 + p.gamma_tilde)) < 1e-12);
        CHECK(M.sigma > 0.0);
    }
}

TEST_CASE("spin elimination at the NP and the isotropic degeneracy") {
    const auto p = make(2.0, 1.0);
    const auto r = stability::spin_eliminate(p, meanfield::trivial_down());
    // delta s_x = -2 g (1+tau) dx, delta s_y = 2 g (1-tau) dy at the NP
    CHECK(r.c_xx == doctest::Approx(-2.0 * p.g_tilde * (1.0 + p.tau)).epsilon(1e-12));
    CHECK(r.c_xy == doctest::Approx(0.0));
    CHECK(r.c_yx == doctest::Approx(0.0));
    CHECK(r.c_yy == doctest::Approx(2.0 * p.g_tilde * (1.0 - p.tau)).epsilon(1e-12));

    const auto iso = stability::spin_eliminate(make(1.0, 0.8), meanfield::trivial_down());
    CHECK(iso.c_yy == doctest::Approx(0.0));
    CHECK(iso.c_yx == doctest::Approx(0.0));
}

TEST_CASE("Q reduces to the printed NP polynomial and vanishes at g_c") {
    const double kappa = 3.0, gamma = 0.5;
    for (double tau : {2.0, 2.2, 2.5}) {
        for (double g : {0.5, 1.0, 1.6}) {
            const auto p = make(tau, g, kappa, gamma);
            const auto M = stability::build_M(p, meanfield::trivial_down());
            const double g2 = g * g;
            const double q_np = 1.0 + gamma * gamma + 2.0 * (2.0 * kappa - tau * tau - 1.0) * g2 +
                                (1.0 - tau) * (1.0 - tau) *
                                    ((1.0 + tau) * (1.0 + tau) - 4.0 * kappa) * g2 * g2;
            CHECK(M.q_value == doctest::Approx(q_np).epsilon(1e-10));
            CHECK(stability::q_np(p) == doctest::Approx(q_np).epsilon(1e-12));
            // Q/Sigma is the determinant of the assembled matrix
            CHECK(M.q_value / M.sigma ==
                  doctest::Approx(M.m11 * M.m22 - M.m12 * M.m21).epsilon(1e-10));
        }
        const auto pm = meanfield::critical_g_pm(tau, kappa, gamma);
        for (const auto& gc : {pm.g_c_minus, pm.g_c_plus}) {
            if (!gc) continue;
            CHECK(std::abs(stability::q_np(make(tau, *gc, kappa, gamma))) < 1e-10);
        }
    }
}

TEST_CASE("NP verdict along the g_cr = 3 path") {
    auto np_verdict = [](double g) {
        return stability::assess(make(3.0 / g, g), meanfield::trivial_down());
    };
    CHECK(np_verdict(1.5).verdict == stability::Verdict::Unstable);
    CHECK(np_verdict(2.2).verdict == stability::Verdict::Stable);  // reentrant NP
    CHECK(np_verdict(0.8).verdict == stability::Verdict::Stable);  // bistable window
}

TEST_CASE("complex pair regime has real part -gamma") {
    const auto p = make(0.2, 0.3, 0.0, 0.4);
    const auto M = stability::build_M(p, meanfield::trivial_down());
    REQUIRE(M.q_value / M.sigma > p.gamma_tilde * p.gamma_tilde);
    const auto v = stability::assess(p, meanfield::trivial_down());
    CHECK(v.eigenvalues[0].real() == doctest::Approx(-p.gamma_tilde).epsilon(1e-10));
    CHECK(v.eigenvalues[1].real() == doctest::Approx(-p.gamma_tilde).epsilon(1e-10));
    CHECK(v.stable);
}

TEST_CASE("reduced matrix matches the slow block of the full Jacobian") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ut(-2.0, 4.0), ug(0.1, 1.2), uk(0.0, 3.5),
        ugam(0.05, 1.0);
    const double ratio = 1e4;
    int tested = 0;
    for (int i = 0; tested < 50 && i < 500; ++i) {
        const auto p = make(ut(rng), ug(rng), uk(rng), ugam(rng));
        if (std::abs(std::abs(p.tau) - 1.0) < 0.05) continue;

        std::vector<meanfield::MeanFieldState> states = {meanfield::trivial_down()};
        for (const auto& root : meanfield::sz_candidates(p)) {
            if (!root.physical) continue;
            const auto xy = meanfield::solve_xy(p, root);
            states.push_back(xy.front());
        }
        for (const auto& s : states) {
            if (std::abs(s.s_z) < 0.05) continue;  // norm parametrization degenerates
            const Eigen::Vector4d v0(s.x, s.y, s.s_x, s.s_y);
            const double branch_sign = s.s_z < 0.0 ? -1.0 : 1.0;
            const auto slow = slow_eigs(jacobian(p, ratio, v0, branch_sign));

            const auto verdict = stability::assess(p, s);
            for (const auto& lam : verdict.eigenvalues) {
                const double err =
                    std::min(std::abs(lam - slow[0]), std::abs(lam - slow[1]));
                CHECK(err < 0.01 * std::max(1e-3, std::abs(lam)));
            }
        }
        ++tested;
    }
    CHECK(tested == 50);
}

TEST_CASE("sign changes of the NP spectrum line up with the critical couplings") {
    const double tau = 2.5, kappa = 3.0, gamma = 0.5;
    const auto pm = meanfield::critical_g_pm(tau, kappa, gamma);
    REQUIRE(pm.g_c_minus.has_value());
    REQUIRE(pm.g_c_plus.has_value());
    const double gc_lo = std::min(*pm.g_c_minus, *pm.g_c_plus);
    const double gc_hi = std::max(*pm.g_c_minus, *pm.g_c_plus);
    const int n = 2000;
    std::vector<double> crossings;
    auto max_re = [&](double g) {
        const auto v = stability::assess(make(tau, g, kappa, gamma), meanfield::trivial_down());
        return std::max(v.eigenvalues[0].real(), v.eigenvalues[1].real());
    };
    double prev = max_re(0.01);
    for (int i = 1; i <= n; ++i) {
        const double g = 0.01 + (2.5 - 0.01) * i / n;
        const double cur = max_re(g);
        if ((prev < 0.0) != (cur < 0.0)) crossings.push_back(g);
        prev = cur;
    }
    REQUIRE(crossings.size() == 2);
    const double dg = (2.5 - 0.01) / n;
    CHECK(std::abs(crossings[0] - gc_lo) < 2.0 * dg);
    CHECK(std::abs(crossings[1] - gc_hi) < 2.0 * dg);
}
