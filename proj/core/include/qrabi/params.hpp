#ifndef QRABI_PARAMS_HPP
#define QRABI_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace qrabi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Parameters of the dissipative anisotropic Rabi model with the A^2 term.
// All couplings are kept in dimensionless form: g_tilde = g/sqrt(omega*delta),
// gamma_tilde = gamma/omega, kappa = D/(g^2/delta).
struct ModelParams {
    double omega = 1.0;        // cavity frequency (> 0)
    double delta = 1.0;        // qubit frequency (> 0)
    double g_tilde = 0.0;      // dimensionless coupling (>= 0)
    double tau = 1.0;          // anisotropy, any sign
    double kappa = 0.0;        // A^2 strength ratio (>= 0)
    double gamma_tilde = 0.0;  // dimensionless cavity damping (>= 0)

    void validate() const {
        if (!(omega > 0.0)) throw ConfigError("ModelParams: omega must be > 0");
        if (!(delta > 0.0)) throw ConfigError("ModelParams: delta must be > 0");
        if (!(g_tilde >= 0.0))
            throw ConfigError("ModelParams: g_tilde must be >= 0 (negative couplings are a phase redefinition)");
        if (!(kappa >= 0.0)) throw ConfigError("ModelParams: kappa must be >= 0");
        if (!(gamma_tilde >= 0.0)) throw ConfigError("ModelParams: gamma_tilde must be >= 0");
    }

    // Physical damping rate gamma = gamma_tilde * omega.
    double gamma() const { return gamma_tilde * omega; }

    ModelParams with_g(double g) const {
        ModelParams q = *this;
        q.g_tilde = g;
        return q;
    }
    ModelParams with_tau(double t) const {
        ModelParams q = *this;
        q.tau = t;
        return q;
    }
};

enum class PhaseLabel { NP, SRP, Bistable };

inline const char* to_string(PhaseLabel l) {
    switch (l) {
        case PhaseLabel::NP: return "NP";
        case PhaseLabel::SRP: return "SRP";
        case PhaseLabel::Bistable: return "NP+SRP";
    }
    return "?";
}

}  // namespace qrabi

#endif
