#include "qrabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qrabi/stability.hpp"

namespace qrabi::dynamics {

using cd = std::complex<double>;

namespace {
constexpr cd I(0.0, 1.0);
}

cd rhs(const ModelParams& p, cd alpha, int branch) {
    const double g2 = p.g_tilde * p.g_tilde;
    const double t = p.tau;
    const cd w = alpha + t * std::conj(alpha);
    const double sz = branch / std::sqrt(1.0 + 4.0 * g2 * std::norm(w));
    const cd spin_term = g2 * sz * ((1.0 + t * t) * alpha + 2.0 * t * std::conj(alpha));
    return -I * p.omega *
           ((1.0 - I * p.gamma_tilde) * alpha + spin_term +
            2.0 * p.kappa * g2 * (alpha + std::conj(alpha)));
}

SpinSample spin_of(const ModelParams& p, cd alpha, int branch) {
    const double t = p.tau;
    const cd w = alpha + t * std::conj(alpha);
    const double sz = branch / std::sqrt(1.0 + 4.0 * p.g_tilde * p.g_tilde * std::norm(w));
    const cd sm = p.g_tilde * w * sz;  // s_- = (s_x - i s_y)/2
    return {2.0 * sm.real(), -2.0 * sm.imag(), sz};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    cd y_new;
    cd k1, k_new;  // FSAL derivative at both ends, for dense output
    double err;
};

StepResult dopri_step(const ModelParams& p, int branch, cd y, cd k1, double h) {
    auto f = [&](cd a) { return rhs(p, a, branch); };
    const cd k2 = f(y + h * a21 * k1);
    const cd k3 = f(y + h * (a31 * k1 + a32 * k2));
    const cd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const cd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cd k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cd y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const cd k7 = f(y_new);
    const cd err_v = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y_new, k1, k7, std::abs(err_v)};
}

// Cubic Hermite interpolation between step endpoints.
cd hermite(double theta, cd y0, cd y1, cd f0, cd f1, double h) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * f0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1;
}

}  // namespace

Trajectory integrate(const ModelParams& p, cd alpha0, int branch,
                     const IntegrateOptions& opt) {
    p.validate();
    if (branch != 1 && branch != -1) throw Error("integrate: branch must be +1 or -1");
    if (!(opt.t_max > 0.0) || !(opt.tol > 0.0))
        throw Error("integrate: t_max and tol must be positive");

    Trajectory traj;
    traj.branch = branch;

    const double dwell = (p.gamma_tilde > 0.0) ? 10.0 / p.gamma_tilde : opt.t_max;
    const double rhs_tol = opt.converge_rhs * p.omega;

    double t = 0.0;
    cd y = alpha0;
    cd k1 = rhs(p, y, branch);
    double h = 1e-3;
    double next_sample = 0.0;
    double dwell_start = -1.0;
    bool converged = false;

    auto emit = [&](double ts, cd a) {
        traj.times.push_back(ts);
        traj.alpha.push_back(a);
        traj.spin.push_back(spin_of(p, a, branch));
    };

    while (t < opt.t_max) {
        h = std::min(h, opt.t_max - t);
        const StepResult st = dopri_step(p, branch, y, k1, h);
        const double scale = opt.tol * (1.0 + std::abs(y));
        if (st.err > scale) {
            h *= std::max(0.2, 0.9 * std::pow(scale / st.err, 0.2));
            continue;
        }
        // Accept; emit dense-output samples inside the step.
        while (next_sample <= t + h) {
            const double theta = (h > 0.0) ? (next_sample - t) / h : 0.0;
            emit(next_sample, hermite(theta, y, st.y_new, st.k1, st.k_new, h));
            next_sample += opt.sample_dt;
        }
        t += h;
        y = st.y_new;
        k1 = st.k_new;
        if (st.err > 0.0) h *= std::min(5.0, 0.9 * std::pow(scale / st.err, 0.2));

        if (std::abs(k1) < rhs_tol) {
            if (dwell_start < 0.0) dwell_start = t;
            if (t - dwell_start >= dwell) {
                converged = true;
                break;
            }
        } else {
            dwell_start = -1.0;
        }
    }
    if (traj.times.empty() || t > traj.times.back()) emit(t, y);

    if (converged) {
        traj.steady_time = dwell_start;
        meanfield::MeanFieldState s;
        const SpinSample sp = spin_of(p, y, branch);
        s.x = y.real();
        s.y = y.imag();
        s.s_x = sp.s_x;
        s.s_y = sp.s_y;
        s.s_z = sp.s_z;
        if (branch > 0)
            s.branch = meanfield::Branch::TrivialUp;
        else if (std::abs(y) < 1e-6)
            s.branch = meanfield::Branch::TrivialDown;
        else
            s.branch = meanfield::Branch::SuperradiantMinusRoot;
        traj.converged_to = s;
    }
    return traj;
}

BasinMap basin_map(const ModelParams& p, double re_lo, double re_hi, double im_lo,
                   double im_hi, int n_re, int n_im, const IntegrateOptions& opt,
                   int n_workers) {
    BasinMap map;
    map.re_axis.resize(n_re);
    map.im_axis.resize(n_im);
    for (int i = 0; i < n_re; ++i)
        map.re_axis[i] = n_re > 1 ? re_lo + (re_hi - re_lo) * i / (n_re - 1) : re_lo;
    for (int i = 0; i < n_im; ++i)
        map.im_axis[i] = n_im > 1 ? im_lo + (im_hi - im_lo) * i / (n_im - 1) : im_lo;
    map.labels.assign(static_cast<std::size_t>(n_re) * n_im, BasinLabel::NoConvergence);

    if (n_workers <= 0)
        n_workers = std::max(1u, std::thread::hardware_concurrency());

    auto work = [&](int worker) {
        for (std::size_t cell = worker; cell < map.labels.size();
             cell += static_cast<std::size_t>(n_workers)) {
            const int i_im = static_cast<int>(cell) / n_re;
            const int i_re = static_cast<int>(cell) % n_re;
            const cd a0(map.re_axis[i_re], map.im_axis[i_im]);
            IntegrateOptions o = opt;
            o.sample_dt = opt.t_max;  // endpoints only
            const Trajectory tr = integrate(p, a0, -1, o);
            if (!tr.converged_to) continue;
            map.labels[cell] = (std::abs(tr.converged_to->alpha()) < 1e-4)
                                   ? BasinLabel::NP
                                   : BasinLabel::SRP;
        }
    };
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < n_workers; ++wkr) pool.emplace_back(work, wkr);
    for (auto& th : pool) th.join();
    return map;
}

}  // namespace qrabi::dynamics
