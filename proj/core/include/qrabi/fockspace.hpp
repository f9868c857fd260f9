#ifndef QRABI_FOCKSPACE_HPP
#define QRABI_FOCKSPACE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "qrabi/params.hpp"

namespace qrabi::fockspace {

struct DegenerateNullSpace : Error {
    using Error::Error;
};

using SpMat = Eigen::SparseMatrix<std::complex<double>>;
using DenseMat = Eigen::MatrixXcd;

struct HilbertConfig {
    int n_max = 40;       // Fock cutoff, dimension n_max + 1
    double ratio = 50.0;  // delta / omega

    void validate() const {
        if (n_max < 2) throw ConfigError("HilbertConfig: n_max must be >= 2");
        if (!(ratio > 0.0)) throw ConfigError("HilbertConfig: ratio must be > 0");
    }
    int fock_dim() const { return n_max + 1; }
    int dim() const { return 2 * (n_max + 1); }  // spin (x) Fock, spin slowest
};

// Basis convention: index = s * (n_max+1) + n with s = 0 spin-down, s = 1
// spin-up; sigma_z |down> = -|down>.

// Single-mode operators on the Fock factor.
SpMat annihilation(int fock_dim);

// Hamiltonian on the spin (x) Fock space (omega, delta from the params with
// delta = ratio * omega; D = kappa g^2 / delta, g = g_tilde sqrt(omega delta)).
SpMat hamiltonian(const ModelParams& p, const HilbertConfig& h);

// Lindblad superoperator on vec(rho), column-major:
//   L = -i (I (x) H - H^T (x) I) + gamma (2 a* (x) a - I (x) a^dag a - (a^dag a)^T (x) I).
SpMat build_liouvillian(const ModelParams& p, const HilbertConfig& h);

struct DensityMatrix {
    DenseMat rho;           // Hermitian, unit trace
    double residual = 0.0;  // ||L vec(rho)||_2
};

// Null vector of L via a trace-replacement sparse LU solve, Hermitized and
// normalized. Throws DegenerateNullSpace when a second near-null vector is
// detected (deep bistable region at finite size).
DensityMatrix steady_state(const SpMat& liouvillian, int dim, unsigned seed = 12345);

struct Observables {
    std::complex<double> a;        // <a>
    double n;                      // <a^dag a>
    std::complex<double> a2;       // <a^2>
    double sigma_z;
    std::complex<double> sigma_p;  // <sigma_+>
    double parity;                 // <P>, P = -sigma_z exp(i pi a^dag a)
    double top_two_population;     // Fock levels n_max-1, n_max (cutoff check)
};
Observables observables(const DensityMatrix& rho, const HilbertConfig& h);

// Cavity state projected onto spin-down (unnormalized; its trace is the
// spin-down population).
DenseMat project_spin_down(const DenseMat& rho, const HilbertConfig& h);

// Displacement operator matrix elements in the Fock basis (exact closed form
// at finite cutoff).
DenseMat displacement(int fock_dim, std::complex<double> beta);

struct WignerGrid {
    std::vector<double> x_a, p_a;       // quadratures, x_a = (a + a^dag)/sqrt(2)
    Eigen::MatrixXd values;             // values(i_p, i_x)
};

// Wigner function of a (possibly unnormalized) cavity density matrix via the
// displaced-parity identity W = (1/pi) Tr[rho D(beta) Pi D^dag(beta)],
// beta = (x_a + i p_a)/sqrt(2); integrates to the trace of rho_cav.
WignerGrid wigner(const DenseMat& rho_cav, const std::vector<double>& x_axis,
                  const std::vector<double>& p_axis);

// Uniform axis helper.
std::vector<double> linspace(double lo, double hi, int n);

// Local maxima above frac * max(W), separated by >= min_sep grid cells.
int count_peaks(const WignerGrid& w, double frac = 0.05, int min_sep = 3);

}  // namespace qrabi::fockspace

#endif
