#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwell/classical.hpp"
#include "dwell/coefficients.hpp"
#include "dwell/csv.hpp"
#include "dwell/error.hpp"
#include "dwell/gaussian.hpp"
#include "dwell/hilbert.hpp"
#include "dwell/openquantum.hpp"
#include "dwell/potential.hpp"
#include "dwell/rates.hpp"
#include "dwell/wigner.hpp"

namespace fs = std::filesystem;
using namespace dwell;

namespace {

struct Common {
    std::string preset = "shallow";
    double amplitude = 0.0; // 0: take from preset
    double width = 0.0;
    std::string out = "out";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t points = 0; // 0: default grid
    double half_width = 10.0;

    PotentialParams params() const
    {
        auto p = preset_params();
        if (amplitude > 0.0) p.amplitude = amplitude;
        if (width > 0.0) p.width = width;
        p.validate_double_well();
        return p;
    }

    PotentialParams preset_params() const
    {
        const auto p = dwell::preset(preset);
        require(p.has_value(), ErrorCode::InvalidArgument, "unknown preset '" + preset + "'");
        return *p;
    }

    Grid grid(const PotentialParams& p) const { return points == 0 ? default_grid(p) : Grid(half_width, points); }

    fs::path dir() const
    {
        fs::create_directories(out);
        return fs::path(out);
    }
};

void add_well(CLI::App* sub, Common& c)
{
    sub->add_option("--preset", c.preset, "well preset: shallow or deep")->capture_default_str();
    sub->add_option("--A", c.amplitude, "barrier amplitude (overrides the preset when > 0)")->capture_default_str();
    sub->add_option("--sigma", c.width, "barrier width (overrides the preset when > 0)")->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
}

void add_grid(CLI::App* sub, Common& c)
{
    sub->add_option("--points", c.points, "grid points (0: 256 shallow, 512 otherwise)")->capture_default_str();
    sub->add_option("--half-width", c.half_width, "grid half width L")->capture_default_str();
}

void add_stochastic(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads (0: hardware)")->capture_default_str();
}

ModelKind kind_from(const std::string& name)
{
    const auto k = parse_model_kind(name);
    require(k.has_value(), ErrorCode::InvalidArgument, "unknown model '" + name + "'");
    return *k;
}

OmegaEConvention convention_from(const std::string& name)
{
    const auto c = parse_omega_e_convention(name);
    require(c.has_value(), ErrorCode::InvalidArgument, "unknown omega_e convention '" + name + "'");
    return *c;
}

void write_sidecar(const CLI::App& app, const CLI::App* sub, const fs::path& dir, double ratio)
{
    std::ofstream f(dir / "run.ini");
    require(static_cast<bool>(f), ErrorCode::Io, "cannot write " + (dir / "run.ini").string());
    f << "code_version=\"" << DWELL_VERSION << "\"\n";
    f << "command=\"" << sub->get_name() << "\"\n";
    f << "temp_condition_ratio=" << (std::isnan(ratio) ? std::string("\"none\"") : format_double(ratio)) << "\n";
    const std::string prefix = sub->get_name() + ".";
    std::istringstream all(app.config_to_str(true, false));
    for (std::string line; std::getline(all, line);)
        if (line.rfind(prefix, 0) == 0) f << line << "\n";
}

void print_kv(const std::string& key, double v) { std::cout << key << " = " << format_double(v) << "\n"; }

struct SpectrumArgs {
    std::size_t levels = 10;
};

double run_spectrum(const Common& c, const SpectrumArgs& a)
{
    const auto p = c.params();
    const auto g = c.grid(p);
    const auto spec = eigensolve(build_hamiltonian(g, p), g, a.levels);
    const auto dir = c.dir();
    write_spectrum((dir / "spectrum.csv").string(), spec.energies);
    const double e0 = spec.energies(0), e1 = spec.energies(1);
    const double tt = tunnel_time(e0, e1);
    CsvWriter w((dir / "tunnel_time.csv").string(), {"E0", "E1", "gap", "tunnel_time"});
    w.cell(e0).cell(e1).cell(e1 - e0).cell(tt);
    w.end_row();
    print_kv("E1-E0", e1 - e0);
    print_kv("tunnel_time", tt);
    return std::nan("");
}

struct TunnelArgs {
    double dt = 1e-3;
    double t_final = 0.0; // 0: one tunnel time
    std::size_t record_every = 10;
    std::vector<double> snapshots;
};

double run_tunnel(const Common& c, const TunnelArgs& a)
{
    const auto p = c.params();
    const auto g = c.grid(p);
    const auto geo = well_geometry(p);
    const auto spec = eigensolve(build_hamiltonian(g, p), g, 2);
    const double tt = tunnel_time(spec.energies(0), spec.energies(1));
    const double t_final = a.t_final > 0.0 ? a.t_final : tt;
    std::vector<double> snaps = a.snapshots;
    if (snaps.empty()) snaps = {0.0, 0.5 * t_final, t_final};

    const auto psi0 = coherent_state(g, geo.x_left, 0.0, 1.0, p.mass);
    const auto run = propagate_closed(psi0, p, a.dt, t_final, a.record_every, snaps);
    const auto neg = closed_negativity_series(psi0, p, a.dt, t_final, a.record_every);

    const auto dir = c.dir();
    write_closed_run((dir / "closed.csv").string(), run);
    {
        CsvWriter w((dir / "negativity.csv").string(), {"t", "x_expect", "negativity"});
        for (const auto& s : neg) {
            w.cell(s.t).cell(s.x_expect).cell(s.negativity);
            w.end_row();
        }
    }
    for (std::size_t k = 0; k < run.snapshots.size(); ++k)
        write_wigner((dir / ("wigner_snapshot_" + std::to_string(k) + ".csv")).string(),
                     wigner_from_state(run.snapshots[k]));
    {
        CsvWriter w((dir / "snapshot_times.csv").string(), {"index", "t"});
        for (std::size_t k = 0; k < run.snapshot_times.size(); ++k) {
            w.cell(k).cell(run.snapshot_times[k]);
            w.end_row();
        }
    }
    const auto& last = run.samples.back();
    GridState final_state = run.snapshots.empty() ? psi0 : run.snapshots.back();
    write_state((dir / "state_final.csv").string(), final_state);
    double max_kinetic = 0.0;
    for (const auto& s : run.samples) max_kinetic = std::max(max_kinetic, s.p_expect * s.p_expect / (2.0 * p.mass));
    print_kv("tunnel_time", tt);
    print_kv("x_expect_final", last.x_expect);
    print_kv("x_right", geo.x_right);
    print_kv("max_mean_kinetic", max_kinetic);
    print_kv("barrier_height", geo.barrier_height);
    return std::nan("");
}

struct LangevinArgs {
    double temperature = 1.0;
    double gamma = 0.2;
    double dt = 1e-3;
    double t_max = 0.0; // 0: preset default
    std::size_t n = 1000;
    std::size_t path_stride = 0;
};

double run_langevin(const Common& c, const LangevinArgs& a)
{
    const auto p = c.params();
    LangevinConfig cfg;
    cfg.gamma = a.gamma;
    cfg.temperature = a.temperature;
    cfg.dt = a.dt;
    cfg.t_max = a.t_max > 0.0 ? a.t_max : default_t_max(DynamicsModel::langevin, p);
    cfg.seed = c.seed;
    cfg.ensemble_size = a.n;
    cfg.validate();
    const auto records = run_langevin_ensemble(p, cfg, c.threads);
    const auto est = transition_rate(records);
    const auto dir = c.dir();
    write_crossings((dir / "crossings.csv").string(), records);
    {
        CsvWriter w((dir / "rate.csv").string(), {"T", "gamma", "rate", "sem", "crossing_fraction", "n"});
        w.cell(a.temperature).cell(a.gamma).cell(est.rate).cell(est.rate_sem).cell(est.crossing_fraction).cell(est.n);
        w.end_row();
    }
    if (a.path_stride > 0) {
        const auto geo = well_geometry(p);
        auto pcfg = cfg;
        pcfg.path_stride = a.path_stride;
        pcfg.stop_at_crossing = false;
        const auto tr = simulate_trajectory({geo.x_left, 0.0, 0.0}, p, pcfg, geo.dividing_coordinate, 0);
        write_path((dir / "path.csv").string(), tr.path);
    }
    print_kv("rate", est.rate);
    print_kv("rate_sem", est.rate_sem);
    print_kv("crossing_fraction", est.crossing_fraction);
    return temperature_condition_ratio(a.gamma, a.temperature);
}

struct QuantumArgs {
    std::string model = "minimal";
    std::string omega_e = "curvature";
    int p_sign = 1;
    double temperature = 1.0;
    double gamma = 0.25;
};

void add_quantum(CLI::App* sub, QuantumArgs& q)
{
    sub->add_option("--model", q.model, "minimal or harmonic")->capture_default_str();
    sub->add_option("--omega-e", q.omega_e, "effective frequency convention: curvature or sqrt")->capture_default_str();
    sub->add_option("--p-sign", q.p_sign, "sign of the iP coefficient for the harmonic model")->capture_default_str();
    sub->add_option("--T", q.temperature, "temperature")->capture_default_str();
    sub->add_option("--gamma", q.gamma, "coupling")->capture_default_str();
}

ModelCoefficients coefficients(const QuantumArgs& q, const PotentialParams& p)
{
    require(q.p_sign == 1 || q.p_sign == -1, ErrorCode::InvalidArgument, "p-sign must be +1 or -1");
    return coefficients_for(kind_from(q.model), p, q.gamma, q.temperature, convention_from(q.omega_e), q.p_sign);
}

struct SSEArgs {
    double dt = 1e-3;
    double t_final = 10.0;
    std::size_t n = 10;
    std::size_t write_trajectories = 4;
    std::size_t record_stride = 100;
    unsigned noise_refinement = 1;
};

double run_sse(const Common& c, const QuantumArgs& q, const SSEArgs& a)
{
    const auto p = c.params();
    const auto g = c.grid(p);
    const auto mc = coefficients(q, p);
    const auto geo = well_geometry(p);
    const auto psi0 = coherent_state(g, geo.x_left, 0.0, 1.0, p.mass);
    SSEConfig cfg;
    cfg.dt = a.dt;
    cfg.t_final = a.t_final;
    cfg.seed = c.seed;
    cfg.record_stride = a.record_stride;
    cfg.noise_refinement = a.noise_refinement;
    cfg.validate();
    const auto dir = c.dir();
    const auto summary = run_sse_ensemble(psi0, p, mc, cfg, a.n, c.threads);
    {
        CsvWriter w((dir / "sse_mean.csv").string(),
                    {"t", "mean_x", "sem_x", "mean_p", "sem_p", "mean_x2", "sem_x2", "n"});
        for (std::size_t i = 0; i < summary.times.size(); ++i) {
            w.cell(summary.times[i]).cell(summary.mean_x[i]).cell(summary.sem_x[i]).cell(summary.mean_p[i])
                .cell(summary.sem_p[i]).cell(summary.mean_x2[i]).cell(summary.sem_x2[i]).cell(summary.n);
            w.end_row();
        }
    }
    for (std::size_t i = 0; i < std::min(a.n, a.write_trajectories); ++i) {
        const auto tr = propagate_sse(psi0, p, mc, cfg, i);
        write_sse((dir / ("sse_trajectory_" + std::to_string(i) + ".csv")).string(), tr);
        if (i == 0) write_state((dir / "state_final.csv").string(), tr.final_state);
    }
    print_kv("mean_x_final", summary.mean_x.back());
    print_kv("sem_x_final", summary.sem_x.back());
    return temperature_condition_ratio(q.gamma, q.temperature);
}

struct LindbladArgs {
    double dt = 0.0;
    double t_final = 10.0;
    double record_interval = 0.1;
    std::size_t levels = 0;
    bool wigner = false;
};

double run_lindblad(const Common& c, const QuantumArgs& q, const LindbladArgs& a)
{
    const auto p = c.params();
    const auto mc = coefficients(q, p);
    const auto sys = build_quantum_system(p, c.grid(p), q.temperature, a.levels);
    const auto geo = well_geometry(p);
    const auto rho0 = projected_coherent_state(sys, geo.x_left, 1.0);
    const auto gibbs = gibbs_density_operator(sys.spectrum, q.temperature);
    LindbladConfig cfg;
    cfg.t_final = a.t_final;
    cfg.dt = a.dt;
    cfg.record_interval = a.record_interval;
    const auto run = propagate_lindblad(rho0, sys, mc, cfg, &gibbs);
    const auto dir = c.dir();
    write_lindblad((dir / "lindblad.csv").string(), run);
    write_density_diagonal((dir / "final_populations.csv").string(), run.final_state, sys.spectrum.energies);
    if (a.wigner) write_wigner((dir / "wigner_final.csv").string(), wigner_from_density(sys.spectrum, run.final_state));
    const auto& last = run.samples.back();
    print_kv("levels", static_cast<double>(sys.spectrum.size()));
    print_kv("dt", run.dt);
    print_kv("x_expect_final", last.x_expect);
    print_kv("fidelity_gibbs_final", last.fidelity_gibbs);
    print_kv("min_eig_final", last.min_eig);
    return run.temperature_condition_ratio;
}

struct WignerArgs {
    std::string state;
};

double run_wigner(const Common& c, const WignerArgs& a)
{
    const auto s = read_state(a.state);
    const auto w = wigner_from_state(s);
    const auto dir = c.dir();
    write_wigner((dir / "wigner.csv").string(), w);
    print_kv("negativity", negativity(w));
    print_kv("integral", w.integral());
    print_kv("purity", w.purity());
    return std::nan("");
}

struct GaussianArgs {
    double t_lo = 0.05, t_hi = 5.0;
    double g_lo = 0.05, g_hi = 1.0;
    std::size_t n_t = 10, n_g = 10;
    std::vector<double> omegas{0.5, 1.0, 2.0};
};

double run_gaussian(const Common& c, const GaussianArgs& a)
{
    const auto ts = geometric_points(a.t_lo, a.t_hi, a.n_t);
    const auto gs = geometric_points(a.g_lo, a.g_hi, a.n_g);
    const auto rows = gaussian_lattice_report(ts, gs, a.omegas);
    const auto dir = c.dir();
    write_gaussian_report((dir / "gaussian_report.csv").string(), rows);
    double worst_gt = 0.0, worst_gf = 0.0;
    for (const auto& r : rows) {
        worst_gt = std::max(worst_gt, r.residual_gt);
        worst_gf = std::max(worst_gf, r.residual_gf);
    }
    double worst_root = 0.0;
    for (double t : ts)
        for (double g : gs)
            for (double w : a.omegas) worst_root = std::max(worst_root, check_minimal_stationary(t, g, w).max_abs_difference);
    print_kv("max_residual_GT", worst_gt);
    print_kv("max_residual_GF", worst_gf);
    print_kv("max_GF_root_difference", worst_root);
    require(worst_gt < 1e-10, ErrorCode::ConvergenceFailure, "G_T is not stationary on the lattice");
    return temperature_condition_ratio(gs.back(), ts.front());
}

struct SweepArgs {
    std::string model = "langevin";
    std::string grid = "8x8";
    std::vector<double> temperatures;
    std::vector<double> gammas;
    std::size_t n = 0; // 0: 1000 for langevin, 100 otherwise
    double t_max = 0.0;
    double dt = 0.0;
    double record_interval = 0.01;
    std::string omega_e = "curvature";
    int p_sign = 1;
    std::string checkpoint_dir;
};

double run_sweep_cmd(const Common& c, const SweepArgs& a)
{
    SweepSpec spec;
    const auto m = parse_dynamics_model(a.model);
    require(m.has_value(), ErrorCode::InvalidArgument, "unknown dynamics model '" + a.model + "'");
    spec.model = *m;
    spec.preset = c.preset;
    spec.params = c.params();
    std::size_t nt = 0, ng = 0;
    {
        char sep = 0;
        std::istringstream ss(a.grid);
        ss >> nt >> sep >> ng;
        require(ss && !ss.rdbuf()->in_avail() && (sep == 'x' || sep == 'X') && nt > 0 && ng > 0,
                ErrorCode::InvalidArgument, "--grid must look like 8x8");
    }
    const auto lattice = default_sweep_lattice(nt, ng);
    spec.temperatures = a.temperatures.empty() ? lattice.temperatures : a.temperatures;
    spec.gammas = a.gammas.empty() ? lattice.gammas : a.gammas;
    spec.ensemble_size = a.n > 0 ? a.n : (spec.model == DynamicsModel::langevin ? 1000 : 100);
    spec.t_max = a.t_max;
    spec.dt = a.dt;
    spec.seed = c.seed;
    spec.record_interval = a.record_interval;
    spec.omega_e_convention = convention_from(a.omega_e);
    spec.p_sign = a.p_sign;
    spec.checkpoint_dir = a.checkpoint_dir;
    spec.threads = c.threads;
    spec.validate();
    const auto table = run_sweep(spec);
    const auto dir = c.dir();
    write_rate_table((dir / "rates.csv").string(), table);
    std::size_t failed = 0;
    for (const auto& cell : table.cells) {
        if (cell.failed) {
            ++failed;
            std::cerr << "cell T=" << cell.temperature << " gamma=" << cell.gamma << " failed: " << cell.error << "\n";
        }
    }
    print_kv("cells", static_cast<double>(table.cells.size()));
    print_kv("failed_cells", static_cast<double>(failed));
    double ratio = 0.0;
    for (double t : spec.temperatures)
        for (double g : spec.gammas) ratio = std::max(ratio, temperature_condition_ratio(g, t));
    return ratio;
}

struct GibbsArgs {
    double temperature = 1.0;
    std::size_t levels = 0;
    bool wigner = true;
};

double run_gibbs(const Common& c, const GibbsArgs& a)
{
    const auto p = c.params();
    const auto sys = build_quantum_system(p, c.grid(p), a.temperature, a.levels);
    const auto rho = gibbs_density_operator(sys.spectrum, a.temperature);
    const auto dir = c.dir();
    write_density_diagonal((dir / "gibbs_populations.csv").string(), rho, sys.spectrum.energies);
    if (a.wigner) write_wigner((dir / "gibbs_wigner.csv").string(), wigner_from_density(sys.spectrum, rho));
    print_kv("levels", static_cast<double>(sys.spectrum.size()));
    print_kv("x_expect", expectation(sys.ops.x, rho));
    print_kv("purity", rho.purity());
    return std::nan("");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Double-well transition and tunnelling simulations", "dwell"};
    app.set_version_flag("--version", DWELL_VERSION);
    app.set_config("--config", "", "INI file whose keys mirror the flag names; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::ignore);
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.require_subcommand(1);
    app.fallthrough();

    Common common;

    SpectrumArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and tunnel time");
    add_well(spectrum, common);
    add_grid(spectrum, common);
    spectrum->add_option("--levels", spectrum_args.levels, "eigenvalues to report")->capture_default_str();

    TunnelArgs tunnel_args;
    auto* tunnel = app.add_subcommand("tunnel", "closed dynamics from the left minimum with Wigner snapshots");
    add_well(tunnel, common);
    add_grid(tunnel, common);
    tunnel->add_option("--dt", tunnel_args.dt, "time step")->capture_default_str();
    tunnel->add_option("--t-final", tunnel_args.t_final, "duration (0: one tunnel time)")->capture_default_str();
    tunnel->add_option("--record-every", tunnel_args.record_every, "steps between records")->capture_default_str();
    tunnel->add_option("--snapshots", tunnel_args.snapshots, "Wigner snapshot times")->delimiter(',');

    LangevinArgs langevin_args;
    auto* langevin = app.add_subcommand("langevin", "classical Langevin ensemble and transition rate");
    add_well(langevin, common);
    add_stochastic(langevin, common);
    langevin->add_option("--T", langevin_args.temperature, "temperature")->capture_default_str();
    langevin->add_option("--gamma", langevin_args.gamma, "friction")->capture_default_str();
    langevin->add_option("--dt", langevin_args.dt, "time step")->capture_default_str();
    langevin->add_option("--t-max", langevin_args.t_max, "censoring time (0: preset default)")->capture_default_str();
    langevin->add_option("--n", langevin_args.n, "trajectories")->capture_default_str();
    langevin->add_option("--path-stride", langevin_args.path_stride, "steps between path samples of trajectory 0 (0: none)")
        ->capture_default_str();

    QuantumArgs sse_q;
    SSEArgs sse_args;
    auto* sse = app.add_subcommand("sse", "stochastic Schroedinger trajectories");
    add_well(sse, common);
    add_grid(sse, common);
    add_stochastic(sse, common);
    add_quantum(sse, sse_q);
    sse->add_option("--dt", sse_args.dt, "time step")->capture_default_str();
    sse->add_option("--t-final", sse_args.t_final, "duration")->capture_default_str();
    sse->add_option("--n", sse_args.n, "trajectories")->capture_default_str();
    sse->add_option("--write-trajectories", sse_args.write_trajectories, "individual trajectories written")
        ->capture_default_str();
    sse->add_option("--record-stride", sse_args.record_stride, "steps between records")->capture_default_str();
    sse->add_option("--noise-refinement", sse_args.noise_refinement, "substeps per noise increment")
        ->capture_default_str();

    QuantumArgs lindblad_q;
    LindbladArgs lindblad_args;
    auto* lindblad = app.add_subcommand("lindblad", "density-matrix run with fidelity to the Gibbs state");
    add_well(lindblad, common);
    add_grid(lindblad, common);
    add_quantum(lindblad, lindblad_q);
    lindblad->add_option("--dt", lindblad_args.dt, "time step (0: automatic)")->capture_default_str();
    lindblad->add_option("--t-final", lindblad_args.t_final, "duration")->capture_default_str();
    lindblad->add_option("--record-interval", lindblad_args.record_interval, "time between records")
        ->capture_default_str();
    lindblad->add_option("--levels", lindblad_args.levels, "eigenbasis truncation (0: preset default)")
        ->capture_default_str();
    lindblad->add_flag("--wigner", lindblad_args.wigner, "write the Wigner function of the final state");

    WignerArgs wigner_args;
    auto* wigner = app.add_subcommand("wigner", "Wigner transform of a saved state");
    wigner->add_option("--state", wigner_args.state, "CSV with columns x, re_psi, im_psi")->required();
    wigner->add_option("--out", common.out, "output directory")->capture_default_str();

    GaussianArgs gaussian_args;
    auto* gaussian = app.add_subcommand("gaussian-check", "covariance-flow lattice report");
    gaussian->add_option("--out", common.out, "output directory")->capture_default_str();
    gaussian->add_option("--T-min", gaussian_args.t_lo, "lowest temperature")->capture_default_str();
    gaussian->add_option("--T-max", gaussian_args.t_hi, "highest temperature")->capture_default_str();
    gaussian->add_option("--gamma-min", gaussian_args.g_lo, "lowest coupling")->capture_default_str();
    gaussian->add_option("--gamma-max", gaussian_args.g_hi, "highest coupling")->capture_default_str();
    gaussian->add_option("--n-T", gaussian_args.n_t, "temperatures (geometric)")->capture_default_str();
    gaussian->add_option("--n-gamma", gaussian_args.n_g, "couplings (geometric)")->capture_default_str();
    gaussian->add_option("--omegas", gaussian_args.omegas, "frequencies")->delimiter(',')->capture_default_str();

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "transition-rate table over (T, gamma)");
    add_well(sweep, common);
    add_stochastic(sweep, common);
    sweep->add_option("--model", sweep_args.model, "langevin, sse_minimal, sse_harmonic or closed")
        ->capture_default_str();
    sweep->add_option("--grid", sweep_args.grid, "lattice size, temperatures x couplings")->capture_default_str();
    sweep->add_option("--temperatures", sweep_args.temperatures, "explicit temperature list")->delimiter(',');
    sweep->add_option("--gammas", sweep_args.gammas, "explicit coupling list")->delimiter(',');
    sweep->add_option("--n", sweep_args.n, "trajectories per cell (0: 1000 langevin, 100 quantum)")
        ->capture_default_str();
    sweep->add_option("--t-max", sweep_args.t_max, "censoring time (0: model default)")->capture_default_str();
    sweep->add_option("--dt", sweep_args.dt, "time step (0: 1e-3)")->capture_default_str();
    sweep->add_option("--record-interval", sweep_args.record_interval, "quantum <X> sampling interval")
        ->capture_default_str();
    sweep->add_option("--omega-e", sweep_args.omega_e, "effective frequency convention")->capture_default_str();
    sweep->add_option("--p-sign", sweep_args.p_sign, "sign of the iP coefficient for sse_harmonic")
        ->capture_default_str();
    sweep->add_option("--checkpoint-dir", sweep_args.checkpoint_dir, "per-cell checkpoint directory")
        ->capture_default_str();

    GibbsArgs gibbs_args;
    auto* gibbs = app.add_subcommand("gibbs", "truncated thermal state export");
    add_well(gibbs, common);
    add_grid(gibbs, common);
    gibbs->add_option("--T", gibbs_args.temperature, "temperature")->capture_default_str();
    gibbs->add_option("--levels", gibbs_args.levels, "eigenbasis truncation (0: preset default)")
        ->capture_default_str();
    gibbs->add_option("--wigner", gibbs_args.wigner, "also write the Wigner function")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        double ratio = std::nan("");
        if (chosen == spectrum) ratio = run_spectrum(common, spectrum_args);
        else if (chosen == tunnel) ratio = run_tunnel(common, tunnel_args);
        else if (chosen == langevin) ratio = run_langevin(common, langevin_args);
        else if (chosen == sse) ratio = run_sse(common, sse_q, sse_args);
        else if (chosen == lindblad) ratio = run_lindblad(common, lindblad_q, lindblad_args);
        else if (chosen == wigner) ratio = run_wigner(common, wigner_args);
        else if (chosen == gaussian) ratio = run_gaussian(common, gaussian_args);
        else if (chosen == sweep) ratio = run_sweep_cmd(common, sweep_args);
        else if (chosen == gibbs) ratio = run_gibbs(common, gibbs_args);
        write_sidecar(app, chosen, common.dir(), ratio);
    } catch (const Error& e) {
        std::cerr << "dwell " << chosen->get_name() << ": " << e.what() << "\n";
        return is_config_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "dwell " << chosen->get_name() << ": " << e.what() << "\n";
        return 3;
    }
    return 0;
}
