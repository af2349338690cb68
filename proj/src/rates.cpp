#include "dwell/rates.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwell/error.hpp"
#include "dwell/gaussian.hpp"
#include "dwell/parallel.hpp"

namespace dwell {

namespace {

class Fnv1a {
public:
    void bytes(const void* p, std::size_t n)
    {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= b[i];
            h_ *= 0x100000001B3ULL;
        }
    }
    void add(double v) { bytes(&v, sizeof v); }
    void add(std::uint64_t v) { bytes(&v, sizeof v); }
    void add(std::string_view s)
    {
        add(static_cast<std::uint64_t>(s.size()));
        bytes(s.data(), s.size());
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

std::filesystem::path checkpoint_path(const SweepSpec& spec, std::size_t index)
{
    char name[64];
    std::snprintf(name, sizeof name, "cell_%016" PRIx64 "_%zu.ckpt", spec.hash(), index);
    return std::filesystem::path(spec.checkpoint_dir) / name;
}

void save_checkpoint(const std::filesystem::path& path, const RateCell& c)
{
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        require(static_cast<bool>(out), ErrorCode::Io, "cannot write checkpoint " + tmp);
        char line[512];
        const auto& e = c.estimate;
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %zu %d %d\n", c.temperature,
                      c.gamma, e.rate, e.rate_sem, e.mean_time, e.time_sem, e.crossing_fraction, e.n,
                      e.censoring_flag ? 1 : 0, c.failed ? 1 : 0);
        out << line << c.error << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::optional<RateCell> load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) return std::nullopt;
    RateCell c;
    int censored = 0, failed = 0;
    auto& e = c.estimate;
    std::string first;
    if (!std::getline(in, first)) return std::nullopt;
    std::istringstream ss(first);
    // strtod round-trips the %.17g text exactly
    std::string tok[7];
    for (auto& t : tok) ss >> t;
    ss >> e.n >> censored >> failed;
    if (!ss) return std::nullopt;
    double* dst[7] = {&c.temperature, &c.gamma, &e.rate, &e.rate_sem, &e.mean_time, &e.time_sem, &e.crossing_fraction};
    for (int i = 0; i < 7; ++i) *dst[i] = std::strtod(tok[i].c_str(), nullptr);
    e.censoring_flag = censored != 0;
    c.failed = failed != 0;
    std::getline(in, c.error);
    return c;
}

GridState left_coherent_state(const PotentialParams& p)
{
    const WellGeometry geo = well_geometry(p);
    return coherent_state(default_grid(p), geo.x_left, 0.0, 1.0, p.mass);
}

} // namespace

std::optional<DynamicsModel> parse_dynamics_model(std::string_view name)
{
    if (name == "langevin") return DynamicsModel::langevin;
    if (name == "sse_minimal") return DynamicsModel::sse_minimal;
    if (name == "sse_harmonic") return DynamicsModel::sse_harmonic;
    if (name == "closed") return DynamicsModel::closed;
    return std::nullopt;
}

std::string_view to_string(DynamicsModel m)
{
    switch (m) {
    case DynamicsModel::langevin: return "langevin";
    case DynamicsModel::sse_minimal: return "sse_minimal";
    case DynamicsModel::sse_harmonic: return "sse_harmonic";
    case DynamicsModel::closed: return "closed";
    }
    return "unknown";
}

CrossingRecord quantum_first_crossing(std::span<const double> times, std::span<const double> x, double x_star,
                                      double t_max)
{
    require(times.size() == x.size(), ErrorCode::InvalidArgument, "time and <X> series lengths differ");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < x_star) continue;
        if (i == 0) return {true, times[0]};
        const double f = (x_star - x[i - 1]) / (x[i] - x[i - 1]);
        return {true, times[i - 1] + f * (times[i] - times[i - 1])};
    }
    return {false, t_max};
}

void SweepSpec::validate() const
{
    require(!temperatures.empty() && !gammas.empty(), ErrorCode::InvalidArgument, "sweep lists must be nonempty");
    require(ensemble_size >= 1, ErrorCode::InvalidArgument, "ensemble size must be at least 1");
    require(t_max >= 0.0 && dt >= 0.0 && record_interval > 0.0, ErrorCode::InvalidArgument, "bad sweep time settings");
    for (double t : temperatures) require(t >= 0.0, ErrorCode::InvalidArgument, "temperatures must be non-negative");
    for (double g : gammas) require(g >= 0.0, ErrorCode::InvalidArgument, "gammas must be non-negative");
    params.validate_double_well();
}

std::uint64_t SweepSpec::hash() const
{
    Fnv1a h;
    h.add(to_string(model));
    h.add(preset);
    h.add(params.amplitude);
    h.add(params.width);
    h.add(params.mass);
    h.add(params.omega);
    h.add(static_cast<std::uint64_t>(temperatures.size()));
    for (double t : temperatures) h.add(t);
    h.add(static_cast<std::uint64_t>(gammas.size()));
    for (double g : gammas) h.add(g);
    h.add(static_cast<std::uint64_t>(ensemble_size));
    h.add(t_max);
    h.add(dt);
    h.add(seed);
    h.add(record_interval);
    h.add(to_string(omega_e_convention));
    h.add(static_cast<std::uint64_t>(p_sign + 1));
    return h.value();
}

double default_t_max(DynamicsModel model, const PotentialParams& p)
{
    if (model == DynamicsModel::langevin) return default_grid(p).size() == 256 ? 500.0 : 5000.0;
    const Grid g = default_grid(p);
    const SpectrumResult s = eigensolve(build_hamiltonian(g, p), g, 2);
    return 5.0 * tunnel_time(s.energies(0), s.energies(1));
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t index)
{
    std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (static_cast<std::uint64_t>(index) + 1));
    return detail::splitmix64(s);
}

std::vector<CrossingRecord> quantum_crossing_ensemble(const PotentialParams& p, const ModelCoefficients& c,
                                                      double dt, double t_max, double record_interval,
                                                      std::uint64_t seed, std::size_t n, unsigned threads)
{
    const GridState psi0 = left_coherent_state(p);
    SSEConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_max;
    cfg.seed = seed;
    cfg.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(record_interval / dt)));
    cfg.stop_at_crossing = true;
    cfg.x_star = well_geometry(p).dividing_coordinate;

    std::vector<CrossingRecord> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const SSETrajectory tr = propagate_sse(psi0, p, c, cfg, i);
        std::vector<double> ts, xs;
        ts.reserve(tr.samples.size());
        xs.reserve(tr.samples.size());
        for (const auto& s : tr.samples) {
            ts.push_back(s.t);
            xs.push_back(s.x_expect);
        }
        out[i] = quantum_first_crossing(ts, xs, cfg.x_star, t_max);
    });
    return out;
}

CrossingRecord closed_first_crossing(const PotentialParams& p, double dt, double t_max, double record_interval)
{
    return quantum_crossing_ensemble(p, ModelCoefficients{}, dt, t_max, record_interval, 0, 1).front();
}

RateCell run_cell(const SweepSpec& spec, std::size_t index)
{
    const std::size_t ng = spec.gammas.size();
    RateCell cell;
    cell.temperature = spec.temperatures[index / ng];
    cell.gamma = spec.gammas[index % ng];
    const double dt = spec.dt > 0.0 ? spec.dt : 1e-3;
    const std::uint64_t seed = cell_seed(spec.seed, index);
    try {
        const double t_max = spec.t_max > 0.0 ? spec.t_max : default_t_max(spec.model, spec.params);
        std::vector<CrossingRecord> records;
        if (spec.model == DynamicsModel::langevin) {
            LangevinConfig cfg;
            cfg.gamma = cell.gamma;
            cfg.temperature = cell.temperature;
            cfg.dt = dt;
            cfg.t_max = t_max;
            cfg.seed = seed;
            cfg.ensemble_size = spec.ensemble_size;
            records = run_langevin_ensemble(spec.params, cfg, spec.threads);
        } else {
            ModelCoefficients c;
            if (spec.model != DynamicsModel::closed) {
                const auto kind = spec.model == DynamicsModel::sse_minimal ? ModelKind::minimally_invasive
                                                                           : ModelKind::harmonic_approximation;
                c = coefficients_for(kind, spec.params, cell.gamma, cell.temperature, spec.omega_e_convention,
                                     spec.p_sign);
            }
            records = quantum_crossing_ensemble(spec.params, c, dt, t_max, spec.record_interval, seed,
                                                spec.ensemble_size, spec.threads);
        }
        cell.estimate = transition_rate(records);
    } catch (const Error& e) {
        cell.failed = true;
        cell.error = e.what();
        cell.estimate = RateEstimate{};
        cell.estimate.rate = std::nan("");
        cell.estimate.rate_sem = std::nan("");
    }
    return cell;
}

RateTable run_sweep(const SweepSpec& spec)
{
    spec.validate();
    if (!spec.checkpoint_dir.empty()) std::filesystem::create_directories(spec.checkpoint_dir);
    RateTable table;
    table.model = spec.model;
    table.preset = spec.preset;
    const std::size_t n_cells = spec.temperatures.size() * spec.gammas.size();
    for (std::size_t i = 0; i < n_cells; ++i) {
        if (!spec.checkpoint_dir.empty()) {
            const auto path = checkpoint_path(spec, i);
            if (auto c = load_checkpoint(path)) {
                table.cells.push_back(*c);
                continue;
            }
            table.cells.push_back(run_cell(spec, i));
            save_checkpoint(path, table.cells.back());
        } else {
            table.cells.push_back(run_cell(spec, i));
        }
    }
    return table;
}

SweepLattice default_sweep_lattice(std::size_t n_temperatures, std::size_t n_gammas)
{
    require(n_temperatures >= 1 && n_gammas >= 1, ErrorCode::InvalidArgument, "lattice dimensions must be positive");
    SweepLattice l;
    if (n_temperatures == 1)
        l.temperatures = {1.0};
    else
        l.temperatures = geometric_points(0.05, 3.0, n_temperatures);
    if (n_gammas == 1) {
        l.gammas = {0.25};
    } else {
        for (std::size_t i = 0; i < n_gammas; ++i)
            l.gammas.push_back(0.7 * static_cast<double>(i) / static_cast<double>(n_gammas - 1));
    }
    return l;
}

} // namespace dwell
