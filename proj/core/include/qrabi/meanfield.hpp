#ifndef QRABI_MEANFIELD_HPP
#define QRABI_MEANFIELD_HPP

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qrabi/params.hpp"

namespace qrabi::meanfield {

struct DegenerateAnisotropy : Error {
    using Error::Error;
};
struct NegativeRadicand : Error {
    using Error::Error;
};
struct NoRootInWindow : Error {
    using Error::Error;
};

enum class Branch {
    TrivialDown,           // x = y = 0, s_z = -1
    TrivialUp,             // x = y = 0, s_z = +1
    SuperradiantMinusRoot, // s_z from the -sqrt root of the quadratic
    SuperradiantPlusRoot,  // s_z from the +sqrt root
};

struct MeanFieldState {
    double x = 0.0;
    double y = 0.0;
    double s_x = 0.0;
    double s_y = 0.0;
    double s_z = -1.0;
    Branch branch = Branch::TrivialDown;

    std::complex<double> alpha() const { return {x, y}; }
};

inline MeanFieldState trivial_down() { return {}; }
inline MeanFieldState trivial_up() {
    MeanFieldState s;
    s.s_z = 1.0;
    s.branch = Branch::TrivialUp;
    return s;
}

// One root of the s_z quadratic with its sign tag and physicality flag.
struct SzRoot {
    double s_z;
    Branch branch;      // SuperradiantMinusRoot / SuperradiantPlusRoot
    bool physical;      // s_z in (-1, 0)
};

// Roots of the determinant condition det[M](s_z) = 0:
//   s_z = -(h -/+ sqrt(h^2 - q)) / ((1 - tau^2)^2 g^2)
// with h = 1 + tau^2 + 2 kappa g^2 (1-tau)^2 and
//      q = (1 - tau^2)^2 (1 + 4 kappa g^2 + gamma^2).
// Throws DegenerateAnisotropy at |tau| = 1; returns an empty list when
// h^2 < q (no real superradiant root, NP only).
std::vector<SzRoot> solve_sz(const ModelParams& p);

// Dedicated isotropic (tau = 1) root, s_z = -(1 + gamma^2 + 4 kappa g^2)/(4 g^2).
// For kappa >= 1 this is always < -1 (the no-go line).
double isotropic_sz(const ModelParams& p);

// Superradiant candidates for general tau including the isotropic line and the
// tau = -1 degeneracy (evaluated with a 1e-9 offset). Unphysical roots are
// included and flagged.
std::vector<SzRoot> sz_candidates(const ModelParams& p);

// Nontrivial (x, y) solutions for a given superradiant root. Returns the
// Z2-related pair +/-(x, y); the relative sign of y is fixed by the linear
// steady-state relations, so only two of the four sign choices solve the full
// system once gamma > 0.
std::vector<MeanFieldState> solve_xy(const ModelParams& p, const SzRoot& root);

// Residual of the three steady-state equations at a candidate state
// (max norm over the real/imaginary components).
double steady_residual(const ModelParams& p, const MeanFieldState& s);

// det[M] evaluated at a given s_z (vanishes at every solve_sz root).
double determinant_m(const ModelParams& p, double s_z);

// Critical couplings g_c^-/g_c^+ between the NP and the SRP,
//   g_c^{+/-} = sqrt((tau^2 - 2 kappa + 1 +/- sqrt(4 (kappa-tau)^2 - gamma^2 eta)) / eta),
// eta = (tau-1)^2 ((1+tau)^2 - 4 kappa). A branch is absent when its value is
// non-real or non-positive. eta = 0 is an asymptote of the boundary; it is
// reported through the flag rather than an exception.
struct CriticalPair {
    std::optional<double> g_c_minus;
    std::optional<double> g_c_plus;
    bool eta_zero = false;
};
CriticalPair critical_g_pm(double tau, double kappa, double gamma_tilde);

// Boundary where s_z becomes real (h^2 = q). For kappa != 0 up to two couplings
//   g_c^b = sqrt((2 tau +/- gamma (1 - tau^2)) / (2 kappa (tau-1)^2));
// for kappa = 0 the boundary is g-independent and given by the four
// anisotropies tau_c^b = +/-(1 +/- sqrt(gamma^2 + 1))/gamma.
struct BoundaryB {
    std::vector<double> g_c_b;    // ascending, kappa != 0
    std::vector<double> tau_c_b;  // kappa = 0 only
};
BoundaryB critical_g_b(double tau, double kappa, double gamma_tilde);

// Anisotropy tau_c^s at which the g_c^+/- branches merge:
// root of |(kappa - tau)/(1 - tau)| - gamma sqrt(((1+tau)/2)^2 - kappa)
// inside the window. Throws NoRootInWindow.
double merge_tau(double kappa, double gamma_tilde, double tau_lo, double tau_hi);

// Coupling at the merge point (radicand of critical_g_pm vanishes there).
double merge_g(double tau_cs, double kappa);

// Crossings of the g_c^b curve with the g_c^+/- branches inside a tau window
// (for kappa = 0, crossings of g_c^+/- with the vertical lines tau_c^b).
std::vector<std::pair<double, double>> tricritical_points(double kappa, double gamma_tilde,
                                                          double tau_lo, double tau_hi);

// Phase classification: solve the mean-field equations, filter every candidate
// through the stability module, and label the point.
struct Classification {
    PhaseLabel label = PhaseLabel::NP;
    std::vector<MeanFieldState> stable_states;  // trivial-down first when stable
};
Classification classify_phase(const ModelParams& p);

}  // namespace qrabi::meanfield

#endif
