#include "qrabi/fockspace.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <random>

namespace qrabi::fockspace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

namespace {
constexpr cd I(0.0, 1.0);

// Kronecker product of sparse matrices, vec(rho) column-major convention.
SpMat kron(const SpMat& A, const SpMat& B) {
    SpMat out(A.rows() * B.rows(), A.cols() * B.cols());
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
    for (int ka = 0; ka < A.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(A, ka); ia; ++ia)
            for (int kb = 0; kb < B.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(B, kb); ib; ++ib)
                    trip.emplace_back(ia.row() * B.rows() + ib.row(),
                                      ia.col() * B.cols() + ib.col(),
                                      ia.value() * ib.value());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat identity(int n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

}  // namespace

SpMat annihilation(int fock_dim) {
    SpMat a(fock_dim, fock_dim);
    std::vector<Triplet> trip;
    for (int n = 1; n < fock_dim; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

SpMat hamiltonian(const ModelParams& p, const HilbertConfig& h) {
    p.validate();
    h.validate();
    const int nf = h.fock_dim();
    const double omega = p.omega;
    const double delta = h.ratio * omega;
    const double g = p.g_tilde * std::sqrt(omega * delta);
    const double D = p.kappa * g * g / delta;

    const SpMat a = annihilation(nf);
    const SpMat ad = SpMat(a.adjoint());
    const SpMat x = a + ad;

    // Spin operators in the (down, up) block ordering.
    SpMat sz(2, 2), sp(2, 2), sm(2, 2);
    sz.insert(0, 0) = -1.0;
    sz.insert(1, 1) = 1.0;
    sp.insert(1, 0) = 1.0;  // sigma_+ |down> = |up>
    sm.insert(0, 1) = 1.0;
    sz.makeCompressed();
    sp.makeCompressed();
    sm.makeCompressed();
    const SpMat id2 = identity(2);
    const SpMat idf = identity(nf);

    SpMat H = kron(id2, SpMat(omega * SpMat(ad * a) + D * SpMat(x * x))) +
              kron(SpMat(0.5 * delta * sz), idf) +
              g * (kron(sp, a) + kron(sm, ad)) +
              g * p.tau * (kron(sp, ad) + kron(sm, a));
    H.makeCompressed();
    return H;
}

SpMat build_liouvillian(const ModelParams& p, const HilbertConfig& h) {
    const int nf = h.fock_dim();
    const SpMat H = hamiltonian(p, h);
    const SpMat a_full = kron(identity(2), annihilation(nf));
    const SpMat ad_full = SpMat(a_full.adjoint());
    const SpMat n_full = SpMat(ad_full * a_full);
    const int d = h.dim();
    const SpMat id = identity(d);
    const double gamma = p.gamma();

    SpMat L = -I * (kron(id, H) - kron(SpMat(H.transpose()), id)) +
              gamma * (2.0 * kron(SpMat(a_full.conjugate()), a_full) -
                       kron(id, n_full) - kron(SpMat(n_full.transpose()), id));
    L.makeCompressed();
    return L;
}

DensityMatrix steady_state(const SpMat& liouvillian, int dim, unsigned seed) {
    const int d2 = dim * dim;
    if (liouvillian.rows() != d2)
        throw Error("steady_state: Liouvillian dimension mismatch");

    // Replace the row of the (0,0) matrix element with the trace functional.
    // Trace preservation makes that row redundant, so the modified system is
    // nonsingular whenever the null space is one-dimensional.
    SpMat A = liouvillian;
    std::vector<Triplet> trip;
    trip.reserve(A.nonZeros() + dim);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    for (int n = 0; n < dim; ++n) trip.emplace_back(0, n * dim + n, cd(1.0, 0.0));
    SpMat M(d2, d2);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();

    Eigen::SparseLU<SpMat> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw Error("steady_state: sparse LU factorization failed");
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d2);
    b(0) = 1.0;
    Eigen::VectorXcd v = lu.solve(b);

    DensityMatrix out;
    out.rho = Eigen::Map<DenseMat>(v.data(), dim, dim);
    out.rho = 0.5 * (out.rho + out.rho.adjoint().eval());
    out.rho /= out.rho.trace().real();
    Eigen::Map<Eigen::VectorXcd> vr(out.rho.data(), d2);
    out.residual = (liouvillian * vr).norm();

    // Probe for a second near-null vector: one inverse-iteration pass through
    // the same factorization from a random start, deflated against rho.
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss;
        Eigen::VectorXcd u(d2);
        for (int i = 0; i < d2; ++i) u(i) = cd(gauss(rng), gauss(rng));
        const Eigen::VectorXcd r0 = vr / vr.norm();
        for (int it = 0; it < 3; ++it) {
            u -= r0 * r0.dot(u);
            // Zero the replaced row's influence: solve M u' = u projected.
            Eigen::VectorXcd rhs = u;
            rhs(0) = 0.0;
            u = lu.solve(rhs);
            u -= r0 * r0.dot(u);
            const double nu = u.norm();
            if (nu == 0.0) break;
            u /= nu;
        }
        if (u.norm() > 0.0) {
            const double res2 = (liouvillian * u).norm();
            if (res2 < 1e-12) {
                throw DegenerateNullSpace(
                    "steady_state: second null vector detected (near-degenerate steady states)");
            }
        }
    }
    return out;
}

Observables observables(const DensityMatrix& dm, const HilbertConfig& h) {
    const int nf = h.fock_dim();
    const DenseMat& rho = dm.rho;
    Observables o{};
    o.a = 0.0;
    o.a2 = 0.0;
    o.n = 0.0;
    o.sigma_z = 0.0;
    o.sigma_p = 0.0;
    o.parity = 0.0;
    o.top_two_population = 0.0;
    for (int s = 0; s < 2; ++s) {
        const double sz = (s == 0) ? -1.0 : 1.0;
        for (int n = 0; n < nf; ++n) {
            const int i = s * nf + n;
            const double pop = rho(i, i).real();
            o.sigma_z += sz * pop;
            o.parity += -sz * ((n % 2 == 0) ? 1.0 : -1.0) * pop;
            o.n += n * pop;
            if (n >= nf - 2) o.top_two_population += pop;
            if (n + 1 < nf) o.a += std::sqrt(double(n + 1)) * rho(i, i + 1);
            if (n + 2 < nf)
                o.a2 += std::sqrt(double((n + 1) * (n + 2))) * rho(i, i + 2);
        }
    }
    // <sigma_+> couples the spin blocks: sigma_+ = |up><down|.
    for (int n = 0; n < nf; ++n) o.sigma_p += rho(n, nf + n);
    return o;
}

DenseMat project_spin_down(const DenseMat& rho, const HilbertConfig& h) {
    const int nf = h.fock_dim();
    return rho.topLeftCorner(nf, nf);
}

DenseMat displacement(int fock_dim, cd beta) {
    // D_{mn} = sqrt(n!/m!) beta^{m-n} e^{-|beta|^2/2} L_n^{(m-n)}(|beta|^2), m >= n;
    // associated Laguerre values by upward recurrence in n.
    DenseMat D(fock_dim, fock_dim);
    const double b2 = std::norm(beta);
    const double pref = std::exp(-0.5 * b2);
    for (int k = 0; k < fock_dim; ++k) {  // k = m - n band (lower triangle)
        // L_n^{(k)}(b2) recurrence.
        std::vector<double> lag(fock_dim, 0.0);
        lag[0] = 1.0;
        if (fock_dim > 1) lag[1] = 1.0 + k - b2;
        for (int n = 2; n < fock_dim; ++n)
            lag[n] = ((2.0 * n - 1.0 + k - b2) * lag[n - 1] - (n - 1.0 + k) * lag[n - 2]) / n;
        for (int n = 0; n + k < fock_dim; ++n) {
            const int m = n + k;
            double lg = 0.0;  // log sqrt(n!/m!)
            for (int j = n + 1; j <= m; ++j) lg -= 0.5 * std::log(double(j));
            const cd val = std::exp(lg) * std::pow(beta, k) * pref * lag[n];
            D(m, n) = val;
            // D_{nm} from D(-beta) symmetry: D_{nm}(beta) = conj(D_{mn}(-beta))... use
            // the closed form directly: D_{nm} = sqrt(n!/m!) (-conj(beta))^{m-n} e^- L_n^{(k)}.
            D(n, m) = std::exp(lg) * std::pow(-std::conj(beta), k) * pref * lag[n];
        }
    }
    return D;
}

WignerGrid wigner(const DenseMat& rho_cav, const std::vector<double>& x_axis,
                  const std::vector<double>& p_axis) {
    const int nf = static_cast<int>(rho_cav.rows());
    WignerGrid w;
    w.x_a = x_axis;
    w.p_a = p_axis;
    w.values.resize(static_cast<int>(p_axis.size()), static_cast<int>(x_axis.size()));

    Eigen::VectorXd par(nf);
    for (int n = 0; n < nf; ++n) par(n) = (n % 2 == 0) ? 1.0 : -1.0;

    for (std::size_t ip = 0; ip < p_axis.size(); ++ip) {
        for (std::size_t ix = 0; ix < x_axis.size(); ++ix) {
            const cd beta = cd(x_axis[ix], p_axis[ip]) / std::sqrt(2.0);
            const DenseMat D = displacement(nf, beta);
            // W = (1/pi) sum_n parity(n) <n| D^dag rho D |n>
            const DenseMat Drho = D.adjoint() * rho_cav * D;
            double val = 0.0;
            for (int n = 0; n < nf; ++n) val += par(n) * Drho(n, n).real();
            w.values(static_cast<int>(ip), static_cast<int>(ix)) = val / M_PI;
        }
    }
    return w;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = (n > 1) ? lo + (hi - lo) * i / (n - 1) : lo;
    return v;
}

int count_peaks(const WignerGrid& w, double frac, int min_sep) {
    const double thresh = frac * w.values.maxCoeff();
    const int nr = static_cast<int>(w.values.rows());
    const int nc = static_cast<int>(w.values.cols());
    std::vector<std::pair<int, int>> peaks;
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nc; ++j) {
            const double v = w.values(i, j);
            if (v < thresh) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nr || jj >= nc) continue;
                    if (w.values(ii, jj) > v) is_max = false;
                }
            if (!is_max) continue;
            bool separated = true;
            for (const auto& [pi, pj] : peaks)
                if (std::abs(pi - i) < min_sep && std::abs(pj - j) < min_sep) separated = false;
            if (separated) peaks.emplace_back(i, j);
        }
    }
    return static_cast<int>(peaks.size());
}

}  // namespace qrabi::fockspace
