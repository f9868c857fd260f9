#ifndef QRABI_SWEEP_HPP
#define QRABI_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qrabi/params.hpp"

namespace qrabi::sweep {

struct AxisSpec {
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    bool geometric = false;

    std::vector<double> values() const;
    void validate(const std::string& name) const;
};

// Full orchestration config; flags of the CLI mirror these field names and a
// JSON --config file uses them verbatim.
struct SweepConfig {
    std::string mode;  // phase-diagram | critical-lines | fluctuations |
                       // exponent-fit | dynamics | basin | steady-state | wigner
    ModelParams params;

    std::optional<AxisSpec> tau_axis;
    std::optional<AxisSpec> g_axis;

    // fluctuations / exponent-fit path
    std::string path_type = "fixed-tau";  // fixed-tau | fixed-gcr
    double path_value = 0.0;              // tau or g_cr = tau * g
    std::string boundary = "pm";          // exponent-fit: pm | merge | b
    int side = -1;                        // approach side
    double g_c_guess = 0.0;               // 0: first boundary crossing on the path
    double fit_d_min = 1e-6, fit_d_max = 1e-2;
    int fit_points = 40;

    // dynamics / basin
    double alpha0_re = 0.0, alpha0_im = 0.0;
    int branch = -1;
    double t_max = 200.0;
    double ode_tol = 1e-10;
    double basin_re_lo = -1.0, basin_re_hi = 1.0, basin_im_lo = -1.0, basin_im_hi = 1.0;
    int basin_resolution = 16;

    // steady-state / wigner
    int n_max = 40;
    double ratio = 50.0;
    double wigner_extent = 6.0;  // half-width of the quadrature grid
    int wigner_points = 81;

    std::string output = "out/run";
    int workers = 0;  // 0: available parallelism; env QRABI_WORKERS overrides
    unsigned seed = 12345;
    bool resume = false;

    void validate() const;
    nlohmann::json to_json() const;
    static SweepConfig from_json(const nlohmann::json& j);
    std::string config_hash() const;
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 config error, 3 partial failures
    std::vector<std::string> files;
    std::size_t cells_failed = 0;
};

// Execute a sweep; writes <output>.csv (+ siblings) and <output>.manifest.json.
RunResult run(const SweepConfig& config);

// Effective worker count (config, then QRABI_WORKERS, then hardware).
int effective_workers(const SweepConfig& config);

}  // namespace qrabi::sweep

#endif
