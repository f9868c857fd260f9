#include "qrabi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "qrabi/dynamics.hpp"
#include "qrabi/fockspace.hpp"
#include "qrabi/gaussian.hpp"
#include "qrabi/meanfield.hpp"
#include "qrabi/rootfind.hpp"
#include "qrabi/stability.hpp"
#include "qrabi/table.hpp"

namespace qrabi::sweep {

using json = nlohmann::json;
using table::CsvWriter;
using table::format_double;

std::vector<double> AxisSpec::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double f = (count > 1) ? static_cast<double>(i) / (count - 1) : 0.0;
        v[i] = geometric ? start * std::pow(stop / start, f) : start + (stop - start) * f;
    }
    return v;
}

void AxisSpec::validate(const std::string& name) const {
    if (count < 2) throw ConfigError(name + ": count must be >= 2");
    if (!std::isfinite(start) || !std::isfinite(stop))
        throw ConfigError(name + ": range must be finite");
    if (geometric && (start <= 0.0 || stop <= 0.0))
        throw ConfigError(name + ": geometric axis needs positive endpoints");
}

namespace {

const std::vector<std::string> kModes = {"phase-diagram", "critical-lines", "fluctuations",
                                         "exponent-fit",  "dynamics",       "basin",
                                         "steady-state",  "wigner"};

json axis_json(const AxisSpec& a) {
    return json{{"start", a.start}, {"stop", a.stop}, {"count", a.count},
                {"scale", a.geometric ? "geometric" : "linear"}};
}

AxisSpec axis_from_json(const json& j) {
    AxisSpec a;
    a.start = j.at("start").get<double>();
    a.stop = j.at("stop").get<double>();
    a.count = j.at("count").get<int>();
    if (j.contains("scale")) a.geometric = j.at("scale").get<std::string>() == "geometric";
    return a;
}

std::string nan_str() { return format_double(std::numeric_limits<double>::quiet_NaN()); }

}  // namespace

void SweepConfig::validate() const {
    if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end())
        throw ConfigError("unknown mode '" + mode + "'");
    params.validate();
    if (tau_axis) tau_axis->validate("tau_axis");
    if (g_axis) g_axis->validate("g_axis");
    if (mode == "phase-diagram" && (!tau_axis || !g_axis))
        throw ConfigError("phase-diagram needs tau_axis and g_axis");
    if (mode == "critical-lines" && !tau_axis)
        throw ConfigError("critical-lines needs tau_axis");
    if (mode == "fluctuations" && !g_axis) throw ConfigError("fluctuations needs g_axis");
    if (mode == "fluctuations" || mode == "exponent-fit") {
        if (path_type != "fixed-tau" && path_type != "fixed-gcr")
            throw ConfigError("path_type must be fixed-tau or fixed-gcr");
    }
    if (mode == "exponent-fit") {
        if (boundary != "pm" && boundary != "merge" && boundary != "b")
            throw ConfigError("boundary must be pm, merge, or b");
        if (!(fit_d_min > 0.0) || !(fit_d_max > fit_d_min))
            throw ConfigError("fit window must satisfy 0 < fit_d_min < fit_d_max");
    }
    if (mode == "basin" && basin_resolution < 2)
        throw ConfigError("basin_resolution must be >= 2");
    if ((mode == "steady-state" || mode == "wigner")) {
        fockspace::HilbertConfig h{n_max, ratio};
        h.validate();
    }
    if (output.empty()) throw ConfigError("output path must not be empty");
}

json SweepConfig::to_json() const {
    json j;
    j["mode"] = mode;
    j["params"] = {{"omega", params.omega},     {"delta", params.delta},
                   {"g_tilde", params.g_tilde}, {"tau", params.tau},
                   {"kappa", params.kappa},     {"gamma_tilde", params.gamma_tilde}};
    if (tau_axis) j["tau_axis"] = axis_json(*tau_axis);
    if (g_axis) j["g_axis"] = axis_json(*g_axis);
    j["path_type"] = path_type;
    j["path_value"] = path_value;
    j["boundary"] = boundary;
    j["side"] = side;
    j["g_c_guess"] = g_c_guess;
    j["fit_d_min"] = fit_d_min;
    j["fit_d_max"] = fit_d_max;
    j["fit_points"] = fit_points;
    j["alpha0_re"] = alpha0_re;
    j["alpha0_im"] = alpha0_im;
    j["branch"] = branch;
    j["t_max"] = t_max;
    j["ode_tol"] = ode_tol;
    j["basin_re_lo"] = basin_re_lo;
    j["basin_re_hi"] = basin_re_hi;
    j["basin_im_lo"] = basin_im_lo;
    j["basin_im_hi"] = basin_im_hi;
    j["basin_resolution"] = basin_resolution;
    j["n_max"] = n_max;
    j["ratio"] = ratio;
    j["wigner_extent"] = wigner_extent;
    j["wigner_points"] = wigner_points;
    j["output"] = output;
    j["seed"] = seed;
    return j;
}

SweepConfig SweepConfig::from_json(const json& j) {
    SweepConfig c;
    c.mode = j.value("mode", "");
    if (j.contains("params")) {
        const json& p = j["params"];
        c.params.omega = p.value("omega", 1.0);
        c.params.delta = p.value("delta", 1.0);
        c.params.g_tilde = p.value("g_tilde", 0.0);
        c.params.tau = p.value("tau", 1.0);
        c.params.kappa = p.value("kappa", 0.0);
        c.params.gamma_tilde = p.value("gamma_tilde", 0.0);
    }
    if (j.contains("tau_axis")) c.tau_axis = axis_from_json(j["tau_axis"]);
    if (j.contains("g_axis")) c.g_axis = axis_from_json(j["g_axis"]);
    c.path_type = j.value("path_type", c.path_type);
    c.path_value = j.value("path_value", c.path_value);
    c.boundary = j.value("boundary", c.boundary);
    c.side = j.value("side", c.side);
    c.g_c_guess = j.value("g_c_guess", c.g_c_guess);
    c.fit_d_min = j.value("fit_d_min", c.fit_d_min);
    c.fit_d_max = j.value("fit_d_max", c.fit_d_max);
    c.fit_points = j.value("fit_points", c.fit_points);
    c.alpha0_re = j.value("alpha0_re", c.alpha0_re);
    c.alpha0_im = j.value("alpha0_im", c.alpha0_im);
    c.branch = j.value("branch", c.branch);
    c.t_max = j.value("t_max", c.t_max);
    c.ode_tol = j.value("ode_tol", c.ode_tol);
    c.basin_re_lo = j.value("basin_re_lo", c.basin_re_lo);
    c.basin_re_hi = j.value("basin_re_hi", c.basin_re_hi);
    c.basin_im_lo = j.value("basin_im_lo", c.basin_im_lo);
    c.basin_im_hi = j.value("basin_im_hi", c.basin_im_hi);
    c.basin_resolution = j.value("basin_resolution", c.basin_resolution);
    c.n_max = j.value("n_max", c.n_max);
    c.ratio = j.value("ratio", c.ratio);
    c.wigner_extent = j.value("wigner_extent", c.wigner_extent);
    c.wigner_points = j.value("wigner_points", c.wigner_points);
    c.output = j.value("output", c.output);
    c.workers = j.value("workers", c.workers);
    c.seed = j.value("seed", c.seed);
    c.resume = j.value("resume", c.resume);
    return c;
}

std::string SweepConfig::config_hash() const { return table::fnv1a_hex(to_json().dump()); }

int effective_workers(const SweepConfig& config) {
    if (const char* env = std::getenv("QRABI_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (config.workers > 0) return config.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::vector<std::string> base_metadata(const SweepConfig& c) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return {
        "config: " + c.to_json().dump(),
        "config_hash: " + c.config_hash(),
        "conventions: x_a=(a+a^dag)/sqrt(2), p_a=(a-a^dag)/(i sqrt(2)); "
        "alpha=sqrt(omega/delta)<a>; floats %.17g",
        "timestamp: " +
            std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now).count()),
    };
}

void write_manifest(const SweepConfig& c, const std::vector<std::string>& files,
                    const std::vector<std::vector<std::string>>& schemas, std::size_t rows,
                    bool complete, std::size_t failed) {
    json m;
    m["mode"] = c.mode;
    m["config"] = c.to_json();
    m["config_hash"] = c.config_hash();
    m["files"] = json::array();
    for (std::size_t i = 0; i < files.size(); ++i)
        m["files"].push_back({{"path", files[i]}, {"schema", schemas[i]}});
    m["completed_rows"] = rows;
    m["complete"] = complete;
    m["cells_failed"] = failed;
    std::ofstream out(c.output + ".manifest.json");
    if (!out) throw table::IoError("cannot write manifest for " + c.output);
    out << m.dump(2) << "\n";
}

// Resume point: rows already present when the previous run of the same config
// was interrupted.
std::size_t resume_rows(const SweepConfig& c) {
    if (!c.resume) return 0;
    std::ifstream in(c.output + ".manifest.json");
    if (!in) return 0;
    json m;
    try {
        in >> m;
    } catch (...) {
        return 0;
    }
    if (m.value("config_hash", "") != c.config_hash() || m.value("complete", false))
        return 0;
    return table::count_data_rows(c.output + ".csv");
}

// Chunked cell engine: cells computed in parallel, rows written in cell order.
std::size_t run_cells(std::size_t n_cells, std::size_t skip, int workers, CsvWriter& out,
                      const std::function<std::vector<std::string>(std::size_t)>& cell) {
    std::atomic<std::size_t> failed{0};
    const std::size_t block = static_cast<std::size_t>(workers) * 8;
    std::vector<std::vector<std::string>> rows(block);
    for (std::size_t lo = skip; lo < n_cells; lo += block) {
        const std::size_t hi = std::min(n_cells, lo + block);
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{lo};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < hi; i = next.fetch_add(1))
                    rows[i - lo] = cell(i);
            });
        }
        for (auto& t : pool) t.join();
        for (std::size_t i = lo; i < hi; ++i) {
            if (!rows[i - lo].empty() && !rows[i - lo].back().empty()) ++failed;
            out.write_row(rows[i - lo]);
        }
        out.flush();
    }
    return failed;
}

ModelParams params_on_path(const SweepConfig& c, double g) {
    ModelParams p = c.params;
    p.g_tilde = g;
    p.tau = (c.path_type == "fixed-gcr") ? c.path_value / g : c.path_value;
    return p;
}

// Representative stable SRP state, if any.
std::optional<meanfield::MeanFieldState> first_stable_srp(const ModelParams& p) {
    for (const auto& root : meanfield::sz_candidates(p)) {
        if (!root.physical) continue;
        for (const auto& s : meanfield::solve_xy(p, root))
            if (stability::assess(p, s).stable) return s;
    }
    return std::nullopt;
}

RunResult run_phase_diagram(const SweepConfig& c) {
    const auto taus = c.tau_axis->values();
    const auto gs = c.g_axis->values();
    const std::vector<std::string> schema = {"tau", "g_tilde", "label", "s_z",
                                             "x",   "y",       "re_l_plus", "error"};
    const std::size_t skip = resume_rows(c);
    CsvWriter out(c.output + ".csv", schema, base_metadata(c), skip > 0);
    write_manifest(c, {c.output + ".csv"}, {schema}, skip, false, 0);

    auto cell = [&](std::size_t i) -> std::vector<std::string> {
        const double tau = taus[i / gs.size()];
        const double g = gs[i % gs.size()];
        try {
            ModelParams p = c.params;
            p.tau = tau;
            p.g_tilde = g;
            const auto cls = meanfield::classify_phase(p);
            meanfield::MeanFieldState rep;  // trivial-down default
            for (const auto& s : cls.stable_states)
                if (s.branch != meanfield::Branch::TrivialDown &&
                    s.branch != meanfield::Branch::TrivialUp) {
                    rep = s;
                    break;
                }
            const double re_lp = gaussian::np_liouville_eigs(p).second.real();
            return {format_double(tau), format_double(g),     to_string(cls.label),
                    format_double(rep.s_z), format_double(rep.x), format_double(rep.y),
                    format_double(re_lp),   ""};
        } catch (const std::exception& e) {
            return {format_double(tau), format_double(g), "", nan_str(), nan_str(),
                    nan_str(),          nan_str(),        e.what()};
        }
    };
    RunResult r;
    r.cells_failed =
        run_cells(taus.size() * gs.size(), skip, effective_workers(c), out, cell);
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, taus.size() * gs.size(), true, r.cells_failed);
    r.exit_code = r.cells_failed ? 3 : 0;
    return r;
}

RunResult run_critical_lines(const SweepConfig& c) {
    const auto taus = c.tau_axis->values();
    const std::vector<std::string> schema = {"tau",     "g_c_minus", "g_c_plus", "g_c_b_1",
                                             "g_c_b_2", "eta_asymptote", "error"};
    const std::size_t skip = resume_rows(c);
    CsvWriter out(c.output + ".csv", schema, [&] {
        auto md = base_metadata(c);
        if (c.params.kappa == 0.0 && c.params.gamma_tilde > 0.0) {
            const auto b = meanfield::critical_g_b(0.0, 0.0, c.params.gamma_tilde);
            std::string line = "tau_c_b:";
            for (double t : b.tau_c_b) line += " " + format_double(t);
            md.push_back(line);
        }
        return md;
    }(), skip > 0);
    write_manifest(c, {c.output + ".csv"}, {schema}, skip, false, 0);

    auto cell = [&](std::size_t i) -> std::vector<std::string> {
        const double tau = taus[i];
        try {
            const auto pm = meanfield::critical_g_pm(tau, c.params.kappa, c.params.gamma_tilde);
            const auto b = meanfield::critical_g_b(tau, c.params.kappa, c.params.gamma_tilde);
            auto opt_str = [](const std::optional<double>& v) {
                return v ? format_double(*v) : nan_str();
            };
            return {format_double(tau), opt_str(pm.g_c_minus), opt_str(pm.g_c_plus),
                    b.g_c_b.size() > 0 ? format_double(b.g_c_b[0]) : nan_str(),
                    b.g_c_b.size() > 1 ? format_double(b.g_c_b[1]) : nan_str(),
                    pm.eta_zero ? "1" : "0", ""};
        } catch (const std::exception& e) {
            return {format_double(tau), nan_str(), nan_str(), nan_str(), nan_str(), "0",
                    e.what()};
        }
    };
    RunResult r;
    r.cells_failed = run_cells(taus.size(), skip, effective_workers(c), out, cell);
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, taus.size(), true, r.cells_failed);
    r.exit_code = r.cells_failed ? 3 : 0;
    return r;
}

RunResult run_fluctuations(const SweepConfig& c) {
    const auto gs = c.g_axis->values();
    const std::vector<std::string> schema = {"g_tilde",      "tau",   "alpha_abs",
                                             "n_np",         "re_l_plus_np",
                                             "n_srp",        "re_l_plus_srp", "error"};
    const std::size_t skip = resume_rows(c);
    CsvWriter out(c.output + ".csv", schema, base_metadata(c), skip > 0);
    write_manifest(c, {c.output + ".csv"}, {schema}, skip, false, 0);

    auto cell = [&](std::size_t i) -> std::vector<std::string> {
        const double g = gs[i];
        try {
            const ModelParams p = params_on_path(c, g);
            double n_np = std::numeric_limits<double>::quiet_NaN();
            const auto np_c = gaussian::np_coeffs(p);
            const auto np_eigs = gaussian::liouville_eigs(np_c, p.gamma());
            if (gaussian::denominator(np_c, p.gamma()) > 0.0)
                n_np = gaussian::closed_form_n(np_c, p.gamma());
            double n_srp = std::numeric_limits<double>::quiet_NaN();
            double re_lp_srp = std::numeric_limits<double>::quiet_NaN();
            double alpha_abs = 0.0;
            if (const auto s = first_stable_srp(p)) {
                alpha_abs = std::abs(s->alpha());
                const auto sc = gaussian::srp_coeffs(p, *s);
                re_lp_srp = gaussian::liouville_eigs(sc, p.gamma()).second.real();
                if (gaussian::denominator(sc, p.gamma()) > 0.0)
                    n_srp = gaussian::closed_form_n(sc, p.gamma());
            }
            return {format_double(g),    format_double(p.tau),
                    format_double(alpha_abs), format_double(n_np),
                    format_double(np_eigs.second.real()), format_double(n_srp),
                    format_double(re_lp_srp), ""};
        } catch (const std::exception& e) {
            const ModelParams p = params_on_path(c, g);
            return {format_double(g), format_double(p.tau), nan_str(), nan_str(),
                    nan_str(),        nan_str(),            nan_str(), e.what()};
        }
    };
    RunResult r;
    r.cells_failed = run_cells(gs.size(), skip, effective_workers(c), out, cell);
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, gs.size(), true, r.cells_failed);
    r.exit_code = r.cells_failed ? 3 : 0;
    return r;
}

// Critical coupling on the configured path for the exponent-fit mode.
double locate_gc(const SweepConfig& c, gaussian::Phase& branch, int& side) {
    const double kappa = c.params.kappa;
    const double gt = c.params.gamma_tilde;
    if (c.boundary == "merge") {
        branch = gaussian::Phase::NP;
        if (side == 0) side = -1;
        const double window = 0.5;
        const double tau_cs = meanfield::merge_tau(kappa, gt, c.path_value - window,
                                                   c.path_value + window);
        return meanfield::merge_g(tau_cs, kappa);
    }
    if (c.boundary == "b") {
        branch = gaussian::Phase::SRP;
        if (side == 0) side = +1;
        // Sign change of h^2 - q along the path: s_z becomes real.
        auto f = [&](double g) {
            const ModelParams p = params_on_path(c, g);
            const double t = p.tau, g2 = g * g;
            const double h = 1.0 + t * t + 2.0 * kappa * g2 * (1.0 - t) * (1.0 - t);
            const double q = (1.0 - t * t) * (1.0 - t * t) * (1.0 + 4.0 * kappa * g2 + gt * gt);
            return h * h - q;
        };
        const double guess = c.g_c_guess > 0.0 ? c.g_c_guess : 0.5;
        const auto roots = find_roots_scan(f, std::max(1e-3, 0.2 * guess), 5.0 * guess, 4000);
        if (roots.empty()) throw ConfigError("exponent-fit: no g_c^b crossing on the path");
        double best = roots.front();
        for (double r : roots)
            if (std::abs(r - guess) < std::abs(best - guess)) best = r;
        return best;
    }
    // pm: sign change of the NP Gaussian denominator along the path.
    branch = gaussian::Phase::NP;
    if (side == 0) side = -1;
    auto f = [&](double g) {
        const ModelParams p = params_on_path(c, g);
        return gaussian::denominator(gaussian::np_coeffs(p), p.gamma());
    };
    const double guess = c.g_c_guess > 0.0 ? c.g_c_guess : 1.0;
    const auto roots = find_roots_scan(f, std::max(1e-3, 0.2 * guess), 5.0 * guess, 4000);
    if (roots.empty()) throw ConfigError("exponent-fit: no g_c^+/- crossing on the path");
    double best = roots.front();
    for (double r : roots)
        if (std::abs(r - guess) < std::abs(best - guess)) best = r;
    return best;
}

RunResult run_exponent_fit(const SweepConfig& c) {
    const std::vector<std::string> schema = {"beta", "beta_stderr", "nu",      "nu_stderr",
                                             "g_c",  "d_min",       "d_max",   "n_points"};
    gaussian::Phase branch = gaussian::Phase::NP;
    int side = c.side;
    const double g_c = locate_gc(c, branch, side);

    gaussian::FitPath path;
    path.params_at = [c](double g) { return params_on_path(c, g); };
    path.g_c = g_c;
    path.side = side;
    path.branch = branch;
    const auto fit = gaussian::fit_exponents(path, c.fit_d_min, c.fit_d_max, c.fit_points);

    CsvWriter out(c.output + ".csv", schema, base_metadata(c));
    out.write_row(std::vector<double>{fit.beta, fit.beta_stderr, fit.nu, fit.nu_stderr, g_c,
                                      fit.d_min, fit.d_max, double(fit.n_points)});
    RunResult r;
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, 1, true, 0);
    return r;
}

RunResult run_dynamics(const SweepConfig& c) {
    const std::vector<std::string> schema = {"t", "re_alpha", "im_alpha", "s_x", "s_y", "s_z"};
    dynamics::IntegrateOptions opt;
    opt.t_max = c.t_max;
    opt.tol = c.ode_tol;
    const auto traj = dynamics::integrate(c.params, {c.alpha0_re, c.alpha0_im}, c.branch, opt);

    auto md = base_metadata(c);
    md.push_back(std::string("converged: ") + (traj.converged_to ? "1" : "0"));
    md.push_back("steady_time: " + format_double(traj.steady_time));
    CsvWriter out(c.output + ".csv", schema, md);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        out.write_row(std::vector<double>{traj.times[i], traj.alpha[i].real(),
                                          traj.alpha[i].imag(), traj.spin[i].s_x,
                                          traj.spin[i].s_y, traj.spin[i].s_z});
    RunResult r;
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, traj.times.size(), true, 0);
    return r;
}

RunResult run_basin(const SweepConfig& c) {
    const std::vector<std::string> schema = {"re_alpha0", "im_alpha0", "label"};
    dynamics::IntegrateOptions opt;
    opt.t_max = c.t_max;
    opt.tol = c.ode_tol;
    const auto map =
        dynamics::basin_map(c.params, c.basin_re_lo, c.basin_re_hi, c.basin_im_lo,
                            c.basin_im_hi, c.basin_resolution, c.basin_resolution, opt,
                            effective_workers(c));
    CsvWriter out(c.output + ".csv", schema, base_metadata(c));
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        const int i_im = static_cast<int>(i) / c.basin_resolution;
        const int i_re = static_cast<int>(i) % c.basin_resolution;
        const char* label = map.labels[i] == dynamics::BasinLabel::NP    ? "NP"
                            : map.labels[i] == dynamics::BasinLabel::SRP ? "SRP"
                                                                         : "none";
        out.write_row(std::vector<std::string>{format_double(map.re_axis[i_re]),
                                               format_double(map.im_axis[i_im]), label});
    }
    RunResult r;
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, map.labels.size(), true, 0);
    return r;
}

RunResult run_steady_state(const SweepConfig& c) {
    const std::vector<std::string> schema = {
        "re_a",       "im_a",       "n",      "re_a2",    "im_a2",   "sigma_z",
        "re_sigma_p", "im_sigma_p", "parity", "residual", "top_two_population"};
    const fockspace::HilbertConfig h{c.n_max, c.ratio};
    const auto L = fockspace::build_liouvillian(c.params, h);
    const auto rho = fockspace::steady_state(L, h.dim(), c.seed);
    const auto o = fockspace::observables(rho, h);
    CsvWriter out(c.output + ".csv", schema, base_metadata(c));
    out.write_row(std::vector<double>{o.a.real(), o.a.imag(), o.n, o.a2.real(), o.a2.imag(),
                                      o.sigma_z, o.sigma_p.real(), o.sigma_p.imag(), o.parity,
                                      rho.residual, o.top_two_population});
    RunResult r;
    r.files = {c.output + ".csv"};
    write_manifest(c, r.files, {schema}, 1, true, 0);
    return r;
}

RunResult run_wigner(const SweepConfig& c) {
    const std::vector<std::string> schema = {"x_a", "p_a", "w"};
    const fockspace::HilbertConfig h{c.n_max, c.ratio};
    const auto L = fockspace::build_liouvillian(c.params, h);
    const auto rho = fockspace::steady_state(L, h.dim(), c.seed);
    const auto rho_cav = fockspace::project_spin_down(rho.rho, h);

    double extent = c.wigner_extent;
    fockspace::WignerGrid w;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto xs = fockspace::linspace(-extent, extent, c.wigner_points);
        w = fockspace::wigner(rho_cav, xs, xs);
        double boundary_max = 0.0;
        const int nr = static_cast<int>(w.values.rows());
        const int nc = static_cast<int>(w.values.cols());
        for (int i = 0; i < nr; ++i)
            boundary_max = std::max({boundary_max, std::abs(w.values(i, 0)),
                                     std::abs(w.values(i, nc - 1))});
        for (int j = 0; j < nc; ++j)
            boundary_max = std::max({boundary_max, std::abs(w.values(0, j)),
                                     std::abs(w.values(nr - 1, j))});
        if (boundary_max < 1e-6) break;
        extent *= 1.5;
    }

    CsvWriter out(c.output + ".csv", schema, base_metadata(c));
    for (std::size_t ip = 0; ip < w.p_a.size(); ++ip)
        for (std::size_t ix = 0; ix < w.x_a.size(); ++ix)
            out.write_row(std::vector<double>{
                w.x_a[ix], w.p_a[ip],
                w.values(static_cast<int>(ip), static_cast<int>(ix))});
    CsvWriter out_x(c.output + "_xaxis.csv", {"x_a"}, base_metadata(c));
    for (double v : w.x_a) out_x.write_row(std::vector<double>{v});
    CsvWriter out_p(c.output + "_paxis.csv", {"p_a"}, base_metadata(c));
    for (double v : w.p_a) out_p.write_row(std::vector<double>{v});

    RunResult r;
    r.files = {c.output + ".csv", c.output + "_xaxis.csv", c.output + "_paxis.csv"};
    write_manifest(c, r.files, {schema, {"x_a"}, {"p_a"}}, w.x_a.size() * w.p_a.size(), true,
                   0);
    return r;
}

}  // namespace

RunResult run(const SweepConfig& config) {
    config.validate();
    const auto dir = std::filesystem::path(config.output).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);

    if (config.mode == "phase-diagram") return run_phase_diagram(config);
    if (config.mode == "critical-lines") return run_critical_lines(config);
    if (config.mode == "fluctuations") return run_fluctuations(config);
    if (config.mode == "exponent-fit") return run_exponent_fit(config);
    if (config.mode == "dynamics") return run_dynamics(config);
    if (config.mode == "basin") return run_basin(config);
    if (config.mode == "steady-state") return run_steady_state(config);
    if (config.mode == "wigner") return run_wigner(config);
    throw ConfigError("unknown mode '" + config.mode + "'");
}

}  // namespace qrabi::sweep
