#ifndef QRABI_GAUSSIAN_HPP
#define QRABI_GAUSSIAN_HPP

#include <complex>
#include <functional>
#include <optional>
#include <utility>

#include "qrabi/meanfield.hpp"
#include "qrabi/params.hpp"

namespace qrabi::gaussian {

struct NotSuperradiant : Error {
    using Error::Error;
};
struct SingularK : Error {
    using Error::Error;
};
struct InsufficientDecades : Error {
    using Error::Error;
};

enum class Phase { NP, SRP };

// Coefficients of the effective quadratic Hamiltonian
//   H = R a^dag a + P a^dag^2 + P^* a^2
// after the squeeze that removes the A^2 term, r = -(1/4) ln(1 + 4 kappa g^2).
struct GaussianCoeffs {
    double R = 0.0;                     // energy units
    std::complex<double> P = 0.0;       // energy units
    double r = 0.0;                     // squeeze parameter (<= 0 for kappa > 0)
    Phase phase = Phase::NP;
    // SRP extras: dressed couplings after the squeeze mixing and the
    // underlying mean-field s_z.
    std::complex<double> g_r_prime = 0.0;
    std::complex<double> g_cr_prime = 0.0;
    double s_z = -1.0;
};

GaussianCoeffs np_coeffs(const ModelParams& p);

// Eigenvalues (l_minus, l_plus) of the 2x2 first-moment Liouville matrix,
// l_{+/-} = -gamma cosh r +/- sqrt(gamma^2 sinh^2 r + 4|P|^2 - R^2).
std::pair<std::complex<double>, std::complex<double>> liouville_eigs(const GaussianCoeffs& c,
                                                                     double gamma);
std::pair<std::complex<double>, std::complex<double>> np_liouville_eigs(const ModelParams& p);

// Effective coefficients on a superradiant mean-field state (dressed couplings
// from the spin rotation, then the squeeze mixing). Throws NotSuperradiant
// unless s_z of the state lies in (-1, 0).
GaussianCoeffs srp_coeffs(const ModelParams& p, const meanfield::MeanFieldState& state);

// Residual of the linear a^dag + a term after spin-down projection; mean-field
// stationarity must make this vanish before the term is dropped.
double srp_linear_residual(const ModelParams& p, const meanfield::MeanFieldState& state);

struct SecondMoments {
    double n = 0.0;                  // <a^dag a> in the squeezed frame
    std::complex<double> a2 = 0.0;   // <a^2>
};

// Steady second moments from s_s = -K^{-1} Y. Throws SingularK at exact
// criticality.
SecondMoments second_moments(const GaussianCoeffs& c, double gamma);

// Closed-form photon number
//   n = (Rt^2 sinh^2 r + Pt sinh 2r + 2|P|^2) / (gamma^2 + R^2 - 4|P|^2)
// with Rt^2 = R^2 + gamma^2 and Pt = gamma Im(P) - R Re(P).
double closed_form_n(const GaussianCoeffs& c, double gamma);

// Denominator gamma^2 + R^2 - 4|P|^2; its zeros are the Gaussian stability
// boundaries.
double denominator(const GaussianCoeffs& c, double gamma);

// Symplectic eigenvalue of the 2x2 covariance matrix built from (n, a2);
// physical Gaussian states satisfy >= 1/2.
double symplectic_eigenvalue(const SecondMoments& m);

// ----- critical-exponent fits ------------------------------------------------

struct ExponentFit {
    double beta = 0.0;       // slope of log n vs log|g - g_c|
    double nu = 0.0;         // slope of log Re[l^+] vs log|g - g_c|
    double beta_stderr = 0.0;
    double nu_stderr = 0.0;
    double d_min = 0.0, d_max = 0.0;  // fit window actually used
    int n_points = 0;
};

struct FitPath {
    // Model parameters as a function of g_tilde along the path.
    std::function<ModelParams(double)> params_at;
    double g_c = 0.0;      // critical coupling approached
    int side = -1;         // -1: approach from below, +1: from above
    Phase branch = Phase::NP;  // which effective theory supplies n and the gap
};

// Log-log least-squares fit of n and the Liouvillian gap over a geometric grid
// of distances |g - g_c| in [d_min, d_max] (default 1e-6..1e-2, 40 points).
// Points where the Gaussian denominator is smaller than 1e-12 * omega^2 are
// excluded; throws InsufficientDecades when fewer than 2 decades survive.
ExponentFit fit_exponents(const FitPath& path, double d_min = 1e-6, double d_max = 1e-2,
                          int n_points = 40);

// Refine a critical coupling by bisection of the given function's sign change
// around an initial guess (used before fitting; exponent fits are
// hypersensitive to g_c error).
double refine_gc(const std::function<double(double)>& f, double lo, double hi);

}  // namespace qrabi::gaussian

#endif
