#include "qrabi/stability.hpp"

#include <cmath>

namespace qrabi::stability {

SpinResponse spin_eliminate(const ModelParams& p, const MeanFieldState& s) {
    const double g = p.g_tilde;
    const double g2 = g * g;
    const double t = p.tau;
    const double opt = 1.0 + t;
    const double omt = 1.0 - t;
    const double x = s.x, y = s.y, sz = s.s_z;

    SpinResponse r;
    r.sigma = 1.0 + 4.0 * g2 * (opt * opt * x * x + omt * omt * y * y);

    const double cx = 2.0 * g * sz * opt / r.sigma;
    r.c_xx = cx * (4.0 * g2 * omt * omt * y * y + 1.0);
    r.c_xy = cx * (-4.0 * g2 * omt * omt * x * y);

    const double cy = 2.0 * g * sz * omt / r.sigma;
    r.c_yx = cy * (4.0 * g2 * opt * opt * x * y);
    r.c_yy = cy * (-(4.0 * g2 * opt * opt * x * x + 1.0));
    return r;
}

StabilityMatrix build_M(const ModelParams& p, const MeanFieldState& s) {
    const double g2 = p.g_tilde * p.g_tilde;
    const double g4 = g2 * g2;
    const double t = p.tau;
    const double opt2 = (1.0 + t) * (1.0 + t);
    const double omt2 = (1.0 - t) * (1.0 - t);
    const double omt22 = (1.0 - t * t) * (1.0 - t * t);
    const double x = s.x, y = s.y, sz = s.s_z;
    const double gt = p.gamma_tilde;

    StabilityMatrix m;
    m.sigma = 1.0 + 4.0 * g2 * (opt2 * x * x + omt2 * y * y);
    const double cross = 4.0 * sz * x * y * omt22 * g4 / m.sigma;
    m.m11 = -gt - cross;
    m.m22 = -gt + cross;
    m.m12 = 1.0 + sz * omt2 * (4.0 * x * x * opt2 * g2 + 1.0) * g2 / m.sigma;
    m.m21 = -(1.0 + 4.0 * p.kappa * g2) - sz * opt2 * (4.0 * y * y * omt2 * g2 + 1.0) * g2 / m.sigma;

    // Q as printed; Q/Sigma equals det(M).
    m.q_value = (1.0 + gt * gt + 4.0 * p.kappa * g2) * m.sigma +
                2.0 * (1.0 + t * t) * sz * g2 +
                omt22 * (sz * sz + 4.0 * (x * x + y * y) * sz) * g4 +
                4.0 * p.kappa * sz * omt2 * g4 * (4.0 * g2 * opt2 * x * x + 1.0);
    return m;
}

double q_np(const ModelParams& p) {
    const double g2 = p.g_tilde * p.g_tilde;
    const double t = p.tau;
    return 1.0 + p.gamma_tilde * p.gamma_tilde + 2.0 * (2.0 * p.kappa - t * t - 1.0) * g2 +
           (1.0 - t) * (1.0 - t) * ((1.0 + t) * (1.0 + t) - 4.0 * p.kappa) * g2 * g2;
}

StabilityVerdict assess(const ModelParams& p, const MeanFieldState& state) {
    const StabilityMatrix m = build_M(p, state);
    const double tr = m.m11 + m.m22;
    const double det = m.m11 * m.m22 - m.m12 * m.m21;
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0.0));

    StabilityVerdict v;
    v.eigenvalues[0] = 0.5 * tr + disc;
    v.eigenvalues[1] = 0.5 * tr - disc;
    const double max_re = std::max(v.eigenvalues[0].real(), v.eigenvalues[1].real());
    if (max_re < -kStabilityMargin)
        v.verdict = Verdict::Stable;
    else if (max_re > kStabilityMargin)
        v.verdict = Verdict::Unstable;
    else
        v.verdict = Verdict::Critical;
    v.stable = v.verdict == Verdict::Stable;
    return v;
}

}  // namespace qrabi::stability
