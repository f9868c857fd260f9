#include "qrabi/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qrabi/rootfind.hpp"
#include "qrabi/stability.hpp"

namespace qrabi::meanfield {

namespace {

constexpr double kTauDegeneracyTol = 1e-12;
constexpr double kTauOffset = 1e-9;  // analytic-limit offset for tau = -1

bool is_physical_sz(double s_z) { return s_z > -1.0 && s_z < 0.0; }

}  // namespace

std::vector<SzRoot> solve_sz(const ModelParams& p) {
    p.validate();
    const double t = p.tau;
    if (std::abs(std::abs(t) - 1.0) < kTauDegeneracyTol)
        throw DegenerateAnisotropy("solve_sz: |tau| = 1, prefactor (1-tau^2)^2 vanishes");
    const double g2 = p.g_tilde * p.g_tilde;
    const double omt2 = 1.0 - t * t;
    const double h = 1.0 + t * t + 2.0 * p.kappa * g2 * (1.0 - t) * (1.0 - t);
    const double q = omt2 * omt2 * (1.0 + 4.0 * p.kappa * g2 + p.gamma_tilde * p.gamma_tilde);
    const double disc = h * h - q;
    if (disc < 0.0) return {};
    if (g2 == 0.0) return {};
    const double denom = omt2 * omt2 * g2;
    const double sq = std::sqrt(disc);
    std::vector<SzRoot> roots;
    const double sz_minus = -(h - sq) / denom;
    const double sz_plus = -(h + sq) / denom;
    roots.push_back({sz_minus, Branch::SuperradiantMinusRoot, is_physical_sz(sz_minus)});
    if (disc > 0.0)
        roots.push_back({sz_plus, Branch::SuperradiantPlusRoot, is_physical_sz(sz_plus)});
    return roots;
}

double isotropic_sz(const ModelParams& p) {
    const double g2 = p.g_tilde * p.g_tilde;
    if (g2 == 0.0) return -std::numeric_limits<double>::infinity();
    return -(1.0 + p.gamma_tilde * p.gamma_tilde + 4.0 * p.kappa * g2) / (4.0 * g2);
}

std::vector<SzRoot> sz_candidates(const ModelParams& p) {
    const double t = p.tau;
    if (std::abs(t - 1.0) < kTauDegeneracyTol) {
        const double sz = isotropic_sz(p);
        if (!std::isfinite(sz)) return {};
        return {{sz, Branch::SuperradiantMinusRoot, is_physical_sz(sz)}};
    }
    if (std::abs(t + 1.0) < kTauDegeneracyTol) {
        ModelParams q = p;
        q.tau = -1.0 + kTauOffset;
        return solve_sz(q);
    }
    return solve_sz(p);
}

std::vector<MeanFieldState> solve_xy(const ModelParams& p, const SzRoot& root) {
    const double t = p.tau;
    const double g = p.g_tilde;
    const double g2 = g * g;
    const double sz = root.s_z;
    const double one_m_sz2 = 1.0 - sz * sz;
    if (one_m_sz2 < 0.0)
        throw NegativeRadicand("solve_xy: 1 - s_z^2 < 0");
    if (one_m_sz2 == 0.0) {
        MeanFieldState s;
        s.s_z = sz;
        s.branch = root.branch;
        return {s, s};
    }

    // Linear relations from the first steady-state equation:
    //   A x + gamma y = 0,  -gamma x + B y = 0, with A B = -gamma^2 at a root.
    const double A = 1.0 + 4.0 * p.kappa * g2 + g2 * (1.0 + t) * (1.0 + t) * sz;
    const double B = 1.0 + g2 * (1.0 - t) * (1.0 - t) * sz;
    const double gt = p.gamma_tilde;

    double x, y;
    if (std::abs(B) >= std::abs(A)) {
        // y/x = gamma/B; spin norm fixes the magnitude.
        const double r = (B != 0.0) ? gt / B : 0.0;
        const double denom = 4.0 * g2 * sz * sz *
                             ((1.0 + t) * (1.0 + t) + (1.0 - t) * (1.0 - t) * r * r);
        x = std::sqrt(one_m_sz2 / denom);
        y = r * x;
    } else {
        // x/y = -gamma/A (better conditioned when |A| > |B|).
        const double r = (A != 0.0) ? -gt / A : 0.0;
        const double denom = 4.0 * g2 * sz * sz *
                             ((1.0 - t) * (1.0 - t) + (1.0 + t) * (1.0 + t) * r * r);
        y = std::sqrt(one_m_sz2 / denom);
        x = r * y;
    }

    std::vector<MeanFieldState> out;
    for (int sign : {+1, -1}) {
        MeanFieldState s;
        s.x = sign * x;
        s.y = sign * y;
        s.s_z = sz;
        s.s_x = 2.0 * g * (1.0 + t) * s.x * sz;
        s.s_y = 2.0 * g * (t - 1.0) * s.y * sz;
        s.branch = root.branch;
        out.push_back(s);
    }
    return out;
}

double steady_residual(const ModelParams& p, const MeanFieldState& s) {
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    const cd alpha(s.x, s.y);
    const cd sm(0.5 * s.s_x, -0.5 * s.s_y);
    const cd sp = std::conj(sm);
    const double g = p.g_tilde;
    const double t = p.tau;

    const cd eq1 = (1.0 - I * p.gamma_tilde) * alpha + g * (sm + t * sp) +
                   2.0 * p.kappa * g * g * (alpha + std::conj(alpha));
    const cd w = alpha + t * std::conj(alpha);
    const cd eq2 = g * w * s.s_z - sm;
    // z-component of the spin precession, (w^* s_- - w s_+) ~ d s_z/dt
    const cd eq3 = std::conj(w) * sm - w * sp;

    double r = 0.0;
    for (const cd& e : {eq1, eq2, eq3})
        r = std::max({r, std::abs(e.real()), std::abs(e.imag())});
    return r;
}

double determinant_m(const ModelParams& p, double s_z) {
    const double t = p.tau;
    const double g2 = p.g_tilde * p.g_tilde;
    const double omt2 = 1.0 - t * t;
    return -0.25 * (2.0 * (g2 * (1.0 + t * t) + 2.0 * p.kappa * g2 * g2 * (1.0 - t) * (1.0 - t)) * s_z +
                    (1.0 + 4.0 * p.kappa * g2 + p.gamma_tilde * p.gamma_tilde) +
                    omt2 * omt2 * g2 * g2 * s_z * s_z);
}

CriticalPair critical_g_pm(double tau, double kappa, double gamma_tilde) {
    CriticalPair out;
    const double eta = (tau - 1.0) * (tau - 1.0) * ((1.0 + tau) * (1.0 + tau) - 4.0 * kappa);
    if (std::abs(eta) < 1e-14) {
        out.eta_zero = true;
        return out;
    }
    const double num0 = tau * tau - 2.0 * kappa + 1.0;
    const double inner = 4.0 * (kappa - tau) * (kappa - tau) - gamma_tilde * gamma_tilde * eta;
    if (inner < 0.0) return out;  // branches complex, both absent
    const double sq = std::sqrt(inner);
    const double vm = (num0 - sq) / eta;
    const double vp = (num0 + sq) / eta;
    if (vm > 0.0) out.g_c_minus = std::sqrt(vm);
    if (vp > 0.0) out.g_c_plus = std::sqrt(vp);
    return out;
}

BoundaryB critical_g_b(double tau, double kappa, double gamma_tilde) {
    BoundaryB out;
    if (kappa == 0.0) {
        if (gamma_tilde > 0.0) {
            const double s = std::sqrt(gamma_tilde * gamma_tilde + 1.0);
            for (double v : {(1.0 + s) / gamma_tilde, (1.0 - s) / gamma_tilde}) {
                out.tau_c_b.push_back(v);
                out.tau_c_b.push_back(-v);
            }
            std::sort(out.tau_c_b.begin(), out.tau_c_b.end());
        }
        return out;
    }
    const double d = 2.0 * kappa * (tau - 1.0) * (tau - 1.0);
    if (d == 0.0) return out;
    const double omt2 = 1.0 - tau * tau;
    for (int sign : {-1, +1}) {
        const double v = (2.0 * tau + sign * gamma_tilde * omt2) / d;
        if (v > 0.0) out.g_c_b.push_back(std::sqrt(v));
    }
    std::sort(out.g_c_b.begin(), out.g_c_b.end());
    return out;
}

namespace {

// Signed residual of the merge condition Eq-style:
//   |(kappa - tau)/(1 - tau)| - gamma sqrt(((1+tau)/2)^2 - kappa).
double merge_residual(double tau, double kappa, double gamma_tilde) {
    const double half = 0.5 * (1.0 + tau);
    const double rad = half * half - kappa;
    if (rad < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs((kappa - tau) / (1.0 - tau)) - gamma_tilde * std::sqrt(rad);
}

}  // namespace

double merge_tau(double kappa, double gamma_tilde, double tau_lo, double tau_hi) {
    auto f = [&](double t) { return merge_residual(t, kappa, gamma_tilde); };
    const auto roots = find_roots_scan(f, tau_lo, tau_hi, 2000, 1e-12);
    for (double r : roots)
        if (std::abs(r - 1.0) > 1e-9) return r;
    throw NoRootInWindow("merge_tau: no merge point in the window");
}

double merge_g(double tau_cs, double kappa) {
    const double eta =
        (tau_cs - 1.0) * (tau_cs - 1.0) * ((1.0 + tau_cs) * (1.0 + tau_cs) - 4.0 * kappa);
    const double v = (tau_cs * tau_cs - 2.0 * kappa + 1.0) / eta;
    if (!(v > 0.0)) throw Error("merge_g: non-positive g_c0^2 at the merge anisotropy");
    return std::sqrt(v);
}

std::vector<std::pair<double, double>> tricritical_points(double kappa, double gamma_tilde,
                                                          double tau_lo, double tau_hi) {
    std::vector<std::pair<double, double>> out;
    if (kappa == 0.0) {
        // Vertical lines tau_c^b crossed by the g_c^{+/-} branches.
        const BoundaryB b = critical_g_b(0.0, 0.0, gamma_tilde);
        for (double t : b.tau_c_b) {
            if (t < tau_lo || t > tau_hi) continue;
            // At tau_c^b the two g_c branches coincide exactly (the inner
            // radicand 4 tau^2 - gamma^2 (1-tau^2)^2 vanishes identically),
            // so evaluate the degenerate coupling in closed form.
            const double omt2 = std::abs(1.0 - t * t);
            if (omt2 < 1e-12) continue;
            out.emplace_back(t, std::sqrt(1.0 + t * t) / omt2);
        }
        return out;
    }
    // Each (g_c^b branch, g_c^{+/-} branch) pair: bisect sign changes of the
    // difference where both curves are defined.
    for (int bi = 0; bi < 2; ++bi) {
        for (int pm = 0; pm < 2; ++pm) {
            auto diff = [&](double t) -> double {
                const BoundaryB b = critical_g_b(t, kappa, gamma_tilde);
                if (static_cast<int>(b.g_c_b.size()) <= bi)
                    return std::numeric_limits<double>::quiet_NaN();
                const CriticalPair c = critical_g_pm(t, kappa, gamma_tilde);
                const std::optional<double>& g = (pm == 0) ? c.g_c_minus : c.g_c_plus;
                if (!g) return std::numeric_limits<double>::quiet_NaN();
                return b.g_c_b[bi] - *g;
            };
            std::vector<double> hits = find_roots_scan(diff, tau_lo, tau_hi, 2000, 1e-12);
            // The curves can also meet tangentially (the generic tricritical
            // geometry): refine local minima of |diff| and keep near-zeros.
            const int n_scan = 2000;
            std::vector<double> f(n_scan + 1);
            for (int i = 0; i <= n_scan; ++i)
                f[i] = diff(tau_lo + (tau_hi - tau_lo) * i / n_scan);
            for (int i = 1; i < n_scan; ++i) {
                if (!std::isfinite(f[i - 1]) || !std::isfinite(f[i]) || !std::isfinite(f[i + 1]))
                    continue;
                if (std::abs(f[i]) >= std::abs(f[i - 1]) ||
                    std::abs(f[i]) >= std::abs(f[i + 1]))
                    continue;
                double a = tau_lo + (tau_hi - tau_lo) * (i - 1) / n_scan;
                double c = tau_lo + (tau_hi - tau_lo) * (i + 1) / n_scan;
                for (int it = 0; it < 200 && (c - a) > 1e-13; ++it) {
                    const double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
                    if (std::abs(diff(m1)) < std::abs(diff(m2)))
                        c = m2;
                    else
                        a = m1;
                }
                const double t = 0.5 * (a + c);
                if (std::abs(diff(t)) < 1e-6) hits.push_back(t);
            }
            for (double t : hits) {
                const BoundaryB b = critical_g_b(t, kappa, gamma_tilde);
                if (static_cast<int>(b.g_c_b.size()) > bi) out.emplace_back(t, b.g_c_b[bi]);
            }
        }
    }
    std::sort(out.begin(), out.end());
    // Drop near-duplicate crossings from adjacent branch pairings.
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) {
                              return std::abs(a.first - b.first) < 1e-5 &&
                                     std::abs(a.second - b.second) < 1e-5;
                          }),
              out.end());
    return out;
}

Classification classify_phase(const ModelParams& p) {
    p.validate();
    Classification out;

    bool np_stable = false;
    {
        const auto v = stability::assess(p, trivial_down());
        np_stable = v.stable;
        if (np_stable) out.stable_states.push_back(trivial_down());
    }

    bool srp_stable = false;
    for (const SzRoot& root : sz_candidates(p)) {
        if (!root.physical) continue;
        for (const MeanFieldState& s : solve_xy(p, root)) {
            const auto v = stability::assess(p, s);
            if (v.stable) {
                srp_stable = true;
                out.stable_states.push_back(s);
            }
        }
    }

    if (np_stable && srp_stable)
        out.label = PhaseLabel::Bistable;
    else if (srp_stable)
        out.label = PhaseLabel::SRP;
    else
        out.label = PhaseLabel::NP;
    return out;
}

}  // namespace qrabi::meanfield
