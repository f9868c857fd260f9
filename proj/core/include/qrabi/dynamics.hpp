#ifndef QRABI_DYNAMICS_HPP
#define QRABI_DYNAMICS_HPP

#include <complex>
#include <optional>
#include <vector>

#include "qrabi/meanfield.hpp"
#include "qrabi/params.hpp"

namespace qrabi::dynamics {

struct NoConvergence : Error {
    using Error::Error;
};

// Closed semiclassical cavity equation with the spin adiabatically eliminated:
//   s_z = branch / sqrt(1 + 4 g^2 |alpha + tau alpha^*|^2),
//   s_- = g (alpha + tau alpha^*) s_z.
std::complex<double> rhs(const ModelParams& p, std::complex<double> alpha, int branch);

struct SpinSample {
    double s_x, s_y, s_z;
};

// Spin reconstructed from alpha via the adiabatic relations; unit norm by
// construction.
SpinSample spin_of(const ModelParams& p, std::complex<double> alpha, int branch);

struct Trajectory {
    std::vector<double> times;                  // units of 1/omega, increasing
    std::vector<std::complex<double>> alpha;
    std::vector<SpinSample> spin;
    int branch = -1;
    std::optional<meanfield::MeanFieldState> converged_to;
    double steady_time = -1.0;                  // first time the criterion held
};

struct IntegrateOptions {
    double t_max = 200.0;
    double tol = 1e-10;         // absolute + relative per-step error
    double sample_dt = 0.1;     // dense-output sampling interval
    double converge_rhs = 1e-8; // |dalpha/dt| threshold (units of omega)
};

// Adaptive Dormand-Prince 5(4) integration. Convergence is declared after the
// |dalpha/dt| criterion holds for a dwell of 10/gamma_tilde time units; the
// trajectory is returned either way (converged_to absent on no convergence).
Trajectory integrate(const ModelParams& p, std::complex<double> alpha0, int branch,
                     const IntegrateOptions& opt = {});

enum class BasinLabel { NP, SRP, NoConvergence };

struct BasinMap {
    std::vector<double> re_axis, im_axis;
    std::vector<BasinLabel> labels;  // row-major over (im, re)
    BasinLabel at(int i_im, int i_re) const {
        return labels[static_cast<std::size_t>(i_im) * re_axis.size() + i_re];
    }
};

// Long-time label of every initial condition on a rectangle, branch -1,
// cells distributed over n_workers threads.
BasinMap basin_map(const ModelParams& p, double re_lo, double re_hi, double im_lo,
                   double im_hi, int n_re, int n_im, const IntegrateOptions& opt = {},
                   int n_workers = 0);

}  // namespace qrabi::dynamics

#endif
