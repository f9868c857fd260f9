// Command-line driver: every subcommand builds a SweepConfig and hands it to
// qrabi::sweep::run(). A JSON --config file supplies defaults; explicit flags
// win over the file.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrabi/params.hpp"
#include "qrabi/sweep.hpp"

namespace {

using qrabi::sweep::AxisSpec;
using qrabi::sweep::SweepConfig;

struct AxisFlags {
    double start = 0.0, stop = 1.0;
    int count = 0;  // 0: axis not requested on the command line
    bool geometric = false;
};

void add_axis(CLI::App* cmd, const std::string& name, AxisFlags& f) {
    cmd->add_option("--" + name + "-start", f.start, name + " axis start");
    cmd->add_option("--" + name + "-stop", f.stop, name + " axis stop");
    cmd->add_option("--" + name + "-count", f.count, name + " axis point count");
    cmd->add_flag("--" + name + "-geometric", f.geometric, "geometric spacing");
}

void add_params(CLI::App* cmd, SweepConfig& c) {
    cmd->add_option("--omega", c.params.omega, "cavity frequency");
    cmd->add_option("--delta", c.params.delta, "spin splitting");
    cmd->add_option("-g,--g-tilde", c.params.g_tilde, "dimensionless coupling");
    cmd->add_option("-t,--tau", c.params.tau, "anisotropy");
    cmd->add_option("-k,--kappa", c.params.kappa, "A^2 strength");
    cmd->add_option("--gamma-tilde", c.params.gamma_tilde, "dimensionless photon loss");
}

void add_common(CLI::App* cmd, SweepConfig& c, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("-o,--output", c.output, "output path stem");
    cmd->add_option("--workers", c.workers, "worker threads (0: auto)");
    cmd->add_option("--seed", c.seed, "solver seed");
    cmd->add_flag("--resume", c.resume, "resume an interrupted run");
}

// Flags given on the command line override the JSON file; everything else is
// taken from the file.
void merge_config_file(const CLI::App* cmd, SweepConfig& c, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw qrabi::ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    in >> j;
    SweepConfig from_file = SweepConfig::from_json(j);
    from_file.mode = c.mode;

    auto keep = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    if (keep("--omega")) from_file.params.omega = c.params.omega;
    if (keep("--delta")) from_file.params.delta = c.params.delta;
    if (keep("--g-tilde")) from_file.params.g_tilde = c.params.g_tilde;
    if (keep("--tau")) from_file.params.tau = c.params.tau;
    if (keep("--kappa")) from_file.params.kappa = c.params.kappa;
    if (keep("--gamma-tilde")) from_file.params.gamma_tilde = c.params.gamma_tilde;
    if (keep("--output")) from_file.output = c.output;
    if (keep("--workers")) from_file.workers = c.workers;
    if (keep("--seed")) from_file.seed = c.seed;
    if (keep("--resume")) from_file.resume = c.resume;
    if (c.tau_axis) from_file.tau_axis = c.tau_axis;
    if (c.g_axis) from_file.g_axis = c.g_axis;

    auto keep_opt = [&](const std::string& flag, auto member) {
        if (cmd->get_option_no_throw(flag) && keep(flag)) from_file.*member = c.*member;
    };
    keep_opt("--path-type", &SweepConfig::path_type);
    keep_opt("--path-value", &SweepConfig::path_value);
    keep_opt("--boundary", &SweepConfig::boundary);
    keep_opt("--side", &SweepConfig::side);
    keep_opt("--g-c-guess", &SweepConfig::g_c_guess);
    keep_opt("--fit-d-min", &SweepConfig::fit_d_min);
    keep_opt("--fit-d-max", &SweepConfig::fit_d_max);
    keep_opt("--fit-points", &SweepConfig::fit_points);
    keep_opt("--alpha0-re", &SweepConfig::alpha0_re);
    keep_opt("--alpha0-im", &SweepConfig::alpha0_im);
    keep_opt("--branch", &SweepConfig::branch);
    keep_opt("--t-max", &SweepConfig::t_max);
    keep_opt("--ode-tol", &SweepConfig::ode_tol);
    keep_opt("--re-lo", &SweepConfig::basin_re_lo);
    keep_opt("--re-hi", &SweepConfig::basin_re_hi);
    keep_opt("--im-lo", &SweepConfig::basin_im_lo);
    keep_opt("--im-hi", &SweepConfig::basin_im_hi);
    keep_opt("--resolution", &SweepConfig::basin_resolution);
    keep_opt("--n-max", &SweepConfig::n_max);
    keep_opt("--ratio", &SweepConfig::ratio);
    keep_opt("--extent", &SweepConfig::wigner_extent);
    keep_opt("--points", &SweepConfig::wigner_points);
    c = from_file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states, fluctuations, and exact diagnostics of a lossy "
                 "anisotropic Rabi cavity with a diamagnetic term"};
    app.require_subcommand(1);

    SweepConfig c;
    std::string config_path;
    AxisFlags tau_flags, g_flags;
    tau_flags.start = -1.0;
    tau_flags.stop = 8.0;
    g_flags.start = 0.05;
    g_flags.stop = 3.0;

    auto* pd = app.add_subcommand("phase-diagram", "phase label on a (tau, g) grid");
    add_params(pd, c);
    add_axis(pd, "tau", tau_flags);
    add_axis(pd, "g", g_flags);
    add_common(pd, c, config_path);

    auto* cl = app.add_subcommand("critical-lines", "boundary couplings along a tau axis");
    add_params(cl, c);
    add_axis(cl, "tau", tau_flags);
    add_common(cl, c, config_path);

    auto* fl = app.add_subcommand("fluctuations", "photon number and gap along a path");
    add_params(fl, c);
    add_axis(fl, "g", g_flags);
    fl->add_option("--path-type", c.path_type, "fixed-tau | fixed-gcr");
    fl->add_option("--path-value", c.path_value, "tau or g_cr on the path");
    add_common(fl, c, config_path);

    auto* ef = app.add_subcommand("exponent-fit", "critical exponents at a boundary");
    add_params(ef, c);
    ef->add_option("--path-type", c.path_type, "fixed-tau | fixed-gcr");
    ef->add_option("--path-value", c.path_value, "tau or g_cr on the path");
    ef->add_option("--boundary", c.boundary, "pm | merge | b");
    ef->add_option("--side", c.side, "-1 below, +1 above, 0 auto");
    ef->add_option("--g-c-guess", c.g_c_guess, "initial guess for the boundary coupling");
    ef->add_option("--fit-d-min", c.fit_d_min, "smallest |g - g_c|");
    ef->add_option("--fit-d-max", c.fit_d_max, "largest |g - g_c|");
    ef->add_option("--fit-points", c.fit_points, "points on the geometric grid");
    add_common(ef, c, config_path);

    auto* dy = app.add_subcommand("dynamics", "semiclassical trajectory");
    add_params(dy, c);
    dy->add_option("--alpha0-re", c.alpha0_re, "initial Re alpha");
    dy->add_option("--alpha0-im", c.alpha0_im, "initial Im alpha");
    dy->add_option("--branch", c.branch, "spin branch sign (-1 or +1)");
    dy->add_option("--t-max", c.t_max, "integration horizon (1/omega)");
    dy->add_option("--ode-tol", c.ode_tol, "step error tolerance");
    add_common(dy, c, config_path);

    auto* ba = app.add_subcommand("basin", "basin-of-attraction map");
    add_params(ba, c);
    ba->add_option("--re-lo", c.basin_re_lo, "Re alpha0 lower edge");
    ba->add_option("--re-hi", c.basin_re_hi, "Re alpha0 upper edge");
    ba->add_option("--im-lo", c.basin_im_lo, "Im alpha0 lower edge");
    ba->add_option("--im-hi", c.basin_im_hi, "Im alpha0 upper edge");
    ba->add_option("--resolution", c.basin_resolution, "grid points per side");
    ba->add_option("--t-max", c.t_max, "integration horizon (1/omega)");
    ba->add_option("--ode-tol", c.ode_tol, "step error tolerance");
    add_common(ba, c, config_path);

    auto* ss = app.add_subcommand("steady-state", "exact Lindblad steady state");
    add_params(ss, c);
    ss->add_option("--n-max", c.n_max, "Fock cutoff");
    ss->add_option("--ratio", c.ratio, "delta / omega");
    add_common(ss, c, config_path);

    auto* wg = app.add_subcommand("wigner", "cavity Wigner function of the steady state");
    add_params(wg, c);
    wg->add_option("--n-max", c.n_max, "Fock cutoff");
    wg->add_option("--ratio", c.ratio, "delta / omega");
    wg->add_option("--extent", c.wigner_extent, "quadrature half-width");
    wg->add_option("--points", c.wigner_points, "grid points per axis");
    add_common(wg, c, config_path);

    CLI11_PARSE(app, argc, argv);

    CLI::App* cmd = app.get_subcommands().front();
    c.mode = cmd->get_name();
    try {
        if (cmd == pd) {
            c.tau_axis = AxisSpec{tau_flags.start, tau_flags.stop,
                                  tau_flags.count ? tau_flags.count : 64, tau_flags.geometric};
            c.g_axis = AxisSpec{g_flags.start, g_flags.stop, g_flags.count ? g_flags.count : 64,
                                g_flags.geometric};
        } else if (cmd == cl) {
            c.tau_axis = AxisSpec{tau_flags.start, tau_flags.stop,
                                  tau_flags.count ? tau_flags.count : 400, tau_flags.geometric};
        } else if (cmd == fl) {
            c.g_axis = AxisSpec{g_flags.start, g_flags.stop, g_flags.count ? g_flags.count : 200,
                                g_flags.geometric};
        }
        merge_config_file(cmd, c, config_path);

        const auto result = qrabi::sweep::run(c);
        for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
        if (result.cells_failed)
            std::cerr << result.cells_failed << " cells failed (see the error column)\n";
        return result.exit_code;
    } catch (const qrabi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
