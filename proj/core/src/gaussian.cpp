#include "qrabi/gaussian.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qrabi/rootfind.hpp"
#include "qrabi/stability.hpp"

namespace qrabi::gaussian {

using cd = std::complex<double>;

namespace {
constexpr cd I(0.0, 1.0);

double squeeze_r(const ModelParams& p) {
    return -0.25 * std::log(1.0 + 4.0 * p.kappa * p.g_tilde * p.g_tilde);
}
}  // namespace

GaussianCoeffs np_coeffs(const ModelParams& p) {
    const double g2 = p.g_tilde * p.g_tilde;
    const double t = p.tau;
    const double xi = std::sqrt(1.0 + 4.0 * p.kappa * g2);
    const double opt2 = (1.0 + t) * (1.0 + t);
    const double omt2 = (1.0 - t) * (1.0 - t);

    GaussianCoeffs c;
    c.phase = Phase::NP;
    c.r = squeeze_r(p);
    c.R = 0.5 * p.omega * (2.0 * xi - g2 * (opt2 / xi + xi * omt2));
    c.P = 0.25 * p.omega * g2 * (xi * omt2 - opt2 / xi);
    c.s_z = -1.0;
    c.g_r_prime = -p.g_tilde * (std::cosh(c.r) + t * std::sinh(c.r));
    c.g_cr_prime = -p.g_tilde * (std::sinh(c.r) + t * std::cosh(c.r));
    return c;
}

std::pair<cd, cd> liouville_eigs(const GaussianCoeffs& c, double gamma) {
    const double ch = std::cosh(c.r);
    const double sh = std::sinh(c.r);
    const cd rad = std::sqrt(cd(gamma * gamma * sh * sh + 4.0 * std::norm(c.P) - c.R * c.R, 0.0));
    return {-gamma * ch - rad, -gamma * ch + rad};
}

std::pair<cd, cd> np_liouville_eigs(const ModelParams& p) {
    return liouville_eigs(np_coeffs(p), p.gamma());
}

GaussianCoeffs srp_coeffs(const ModelParams& p, const meanfield::MeanFieldState& s) {
    if (!(s.s_z > -1.0 && s.s_z < 0.0))
        throw NotSuperradiant("srp_coeffs: state is not superradiant (s_z must be in (-1, 0))");
    const double g = p.g_tilde;
    const double t = p.tau;
    const double abs_sz = std::abs(s.s_z);
    const double sqrt_chi = 1.0 / abs_sz;      // sqrt(chi) = 1/|s_z|
    const double chi = sqrt_chi * sqrt_chi;

    const cd alpha(s.x, s.y);
    const cd w = alpha + t * std::conj(alpha);

    // Dressed couplings from the spin rotation that diagonalizes the displaced
    // spin Hamiltonian; (alpha + tau alpha^*)^2 enters unconjugated.
    const cd w2 = w * w;
    const double denom = chi + sqrt_chi;
    const cd g_r = -0.5 * g * (1.0 + 1.0 / sqrt_chi - 4.0 * t * g * g * w2 / denom);
    const cd g_cr = -0.5 * g * (t * (1.0 + 1.0 / sqrt_chi) - 4.0 * g * g * w2 / denom);

    GaussianCoeffs c;
    c.phase = Phase::SRP;
    c.r = squeeze_r(p);
    c.s_z = s.s_z;
    const double ch = std::cosh(c.r);
    const double sh = std::sinh(c.r);
    c.g_r_prime = g_r * ch + g_cr * sh;
    c.g_cr_prime = g_r * sh + g_cr * ch;

    const double xi = std::sqrt(1.0 + 4.0 * p.kappa * g * g);
    c.R = p.omega * (xi - abs_sz * (std::norm(c.g_r_prime) + std::norm(c.g_cr_prime)));
    c.P = -p.omega * abs_sz * c.g_r_prime * std::conj(c.g_cr_prime);
    return c;
}

double srp_linear_residual(const ModelParams& p, const meanfield::MeanFieldState& s) {
    const double g2 = p.g_tilde * p.g_tilde;
    const double t = p.tau;
    const cd alpha(s.x, s.y);
    const double abs_sz = std::abs(s.s_z);
    // Coefficient of the annihilation operator in the displaced, rotated
    // Hamiltonian after spin-down projection; stationarity makes it vanish.
    const cd eta = g2 * abs_sz * ((1.0 + t * t) * alpha + 2.0 * t * std::conj(alpha));
    const cd c_a = (1.0 + I * p.gamma_tilde) * std::conj(alpha) + 4.0 * p.kappa * g2 * s.x -
                   std::conj(eta);
    return std::abs(c_a);
}

SecondMoments second_moments(const GaussianCoeffs& c, double gamma) {
    const double sh = std::sinh(c.r);
    const double sh2r = std::sinh(2.0 * c.r);
    const cd P = c.P;
    const double R = c.R;

    Eigen::Matrix3cd K;
    K << -2.0 * gamma, 2.0 * I * std::conj(P), -2.0 * I * P,
        -4.0 * I * P, -2.0 * I * R - 2.0 * gamma, 0.0,
        4.0 * I * std::conj(P), 0.0, 2.0 * I * R - 2.0 * gamma;
    Eigen::Vector3cd Y;
    Y << 2.0 * gamma * sh * sh, -2.0 * I * P - gamma * sh2r, 2.0 * I * std::conj(P) - gamma * sh2r;

    const double det = std::abs(K.determinant());
    if (det < 1e-14 || denominator(c, gamma) <= 0.0)
        throw SingularK("second_moments: K singular (system at criticality)");

    const Eigen::Vector3cd s = K.fullPivLu().solve(-Y);
    SecondMoments m;
    m.n = s(0).real();
    m.a2 = s(1);
    return m;
}

double closed_form_n(const GaussianCoeffs& c, double gamma) {
    const double sh = std::sinh(c.r);
    const double sh2r = std::sinh(2.0 * c.r);
    const double Rt2 = c.R * c.R + gamma * gamma;
    const double Pt = gamma * c.P.imag() - c.R * c.P.real();
    return (Rt2 * sh * sh + Pt * sh2r + 2.0 * std::norm(c.P)) / denominator(c, gamma);
}

double denominator(const GaussianCoeffs& c, double gamma) {
    return gamma * gamma + c.R * c.R - 4.0 * std::norm(c.P);
}

double symplectic_eigenvalue(const SecondMoments& m) {
    const double vxx = 0.5 + m.n + m.a2.real();
    const double vpp = 0.5 + m.n - m.a2.real();
    const double vxp = m.a2.imag();
    const double det = vxx * vpp - vxp * vxp;
    return det > 0.0 ? std::sqrt(det) : 0.0;
}

namespace {

// Stable superradiant state along a fit path; falls back to the first physical
// root when the stability filter rejects everything (marginal points).
std::optional<meanfield::MeanFieldState> stable_srp_state(const ModelParams& p) {
    std::optional<meanfield::MeanFieldState> fallback;
    for (const auto& root : meanfield::sz_candidates(p)) {
        if (!root.physical) continue;
        for (const auto& s : meanfield::solve_xy(p, root)) {
            if (!fallback) fallback = s;
            if (stability::assess(p, s).stable) return s;
        }
    }
    return fallback;
}

struct LineFit {
    double slope, stderr_;
};

LineFit linfit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - my - slope * (xs[i] - mx);
        ss_res += r * r;
    }
    const double se = (n > 2) ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
    return {slope, se};
}

}  // namespace

ExponentFit fit_exponents(const FitPath& path, double d_min, double d_max, int n_points) {
    std::vector<double> log_d, log_n, log_gap;
    const ModelParams p0 = path.params_at(path.g_c);
    const double denom_floor = 1e-12 * p0.omega * p0.omega;

    for (int i = 0; i < n_points; ++i) {
        const double d =
            d_min * std::pow(d_max / d_min, static_cast<double>(i) / (n_points - 1));
        const double g = path.g_c + path.side * d;
        if (g <= 0.0) continue;
        const ModelParams p = path.params_at(g);

        GaussianCoeffs c;
        if (path.branch == Phase::NP) {
            c = np_coeffs(p);
        } else {
            const auto s = stable_srp_state(p);
            if (!s) continue;
            c = srp_coeffs(p, *s);
        }
        const double den = denominator(c, p.gamma());
        if (den < denom_floor) continue;
        const double n = closed_form_n(c, p.gamma());
        const double gap = std::abs(liouville_eigs(c, p.gamma()).second.real());
        if (!(n > 0.0) || !(gap > 0.0)) continue;
        log_d.push_back(std::log(d));
        log_n.push_back(std::log(n));
        log_gap.push_back(std::log(gap));
    }

    if (log_d.size() < 20 ||
        (log_d.back() - log_d.front()) < 2.0 * std::log(10.0) - 1e-9)
        throw InsufficientDecades("fit_exponents: fewer than 2 decades of usable samples");

    const LineFit fb = linfit(log_d, log_n);
    const LineFit fn = linfit(log_d, log_gap);
    ExponentFit out;
    out.beta = fb.slope;
    out.beta_stderr = fb.stderr_;
    out.nu = fn.slope;
    out.nu_stderr = fn.stderr_;
    out.d_min = std::exp(log_d.front());
    out.d_max = std::exp(log_d.back());
    out.n_points = static_cast<int>(log_d.size());
    return out;
}

double refine_gc(const std::function<double(double)>& f, double lo, double hi) {
    return bisect(f, lo, hi, 1e-14);
}

}  // namespace qrabi::gaussian
