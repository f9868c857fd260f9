#ifndef QRABI_STABILITY_HPP
#define QRABI_STABILITY_HPP

#include <array>
#include <complex>

#include "qrabi/meanfield.hpp"
#include "qrabi/params.hpp"

namespace qrabi::stability {

using meanfield::MeanFieldState;

// Margin used to separate stable / unstable / marginal eigenvalues
// (in units of omega).
inline constexpr double kStabilityMargin = 1e-10;

// Adiabatic elimination of the spin fluctuations: the 2x2 coefficient block of
//   (delta s_x, delta s_y) = C (delta x, delta y).
struct SpinResponse {
    double c_xx, c_xy;  // delta s_x = c_xx dx + c_xy dy
    double c_yx, c_yy;  // delta s_y = c_yx dx + c_yy dy
    double sigma;       // Sigma = 1 + 4 g^2 [(1+tau)^2 x^2 + (1-tau)^2 y^2]
};
SpinResponse spin_eliminate(const ModelParams& p, const MeanFieldState& state);

// Reduced 2x2 cavity stability matrix M (dimensionless; physical rates are
// omega * M). trace(M) = -2 gamma_tilde identically.
struct StabilityMatrix {
    double m11, m12, m21, m22;
    double sigma;    // the Sigma normalizer
    double q_value;  // Q combination; Q/Sigma = det(M)
};
StabilityMatrix build_M(const ModelParams& p, const MeanFieldState& state);

// Q_np polynomial: Q at the trivial NP state; its zeros are g_c^+/-.
double q_np(const ModelParams& p);

enum class Verdict { Stable, Unstable, Critical };

struct StabilityVerdict {
    std::array<std::complex<double>, 2> eigenvalues;  // units of omega
    Verdict verdict = Verdict::Unstable;
    bool stable = false;  // verdict == Stable
};

// Eigenvalues of the assembled matrix via the quadratic formula on its
// characteristic polynomial. The printed closed form for lambda_{+/-} carries
// a typo in the radicand; the matrix itself is the ground truth.
StabilityVerdict assess(const ModelParams& p, const MeanFieldState& state);

}  // namespace qrabi::stability

#endif
