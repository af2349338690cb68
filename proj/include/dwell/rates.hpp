#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dwell/classical.hpp"
#include "dwell/coefficients.hpp"
#include "dwell/openquantum.hpp"
#include "dwell/potential.hpp"

namespace dwell {

enum class DynamicsModel { langevin, sse_minimal, sse_harmonic, closed };

std::optional<DynamicsModel> parse_dynamics_model(std::string_view name);
std::string_view to_string(DynamicsModel m);

/// First t with x(t) >= x_star, linearly interpolated between samples;
/// censored at t_max when no sample reaches x_star.
CrossingRecord quantum_first_crossing(std::span<const double> times, std::span<const double> x_expect,
                                      double x_star, double t_max);

struct SweepSpec {
    DynamicsModel model = DynamicsModel::langevin;
    std::string preset = "shallow";
    PotentialParams params = PotentialParams::shallow();
    std::vector<double> temperatures;
    std::vector<double> gammas;
    std::size_t ensemble_size = 100;
    /// 0 selects the default: 500/5000 (Langevin, shallow/deep) or 5 t_tunnel.
    double t_max = 0.0;
    /// 0 selects 1e-3.
    double dt = 0.0;
    std::uint64_t seed = 0;
    /// Sampling interval of <X> for quantum crossing detection.
    double record_interval = 0.01;
    OmegaEConvention omega_e_convention = OmegaEConvention::curvature;
    int p_sign = 1;
    /// Directory for per-cell checkpoints; empty disables them.
    std::string checkpoint_dir;
    /// Worker hint; never affects results.
    unsigned threads = 1;

    void validate() const;
    /// FNV-1a hash of every result-determining field.
    std::uint64_t hash() const;
};

struct RateCell {
    double temperature = 0.0;
    double gamma = 0.0;
    RateEstimate estimate;
    bool failed = false;
    std::string error;
};

struct RateTable {
    DynamicsModel model = DynamicsModel::langevin;
    std::string preset;
    std::vector<RateCell> cells; // temperature-major order
};

/// Default t_max for a model on a potential.
double default_t_max(DynamicsModel model, const PotentialParams& p);

/// Seed of cell `index` derived from the sweep seed.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t index);

/// Crossing records of an SSE (or closed) ensemble started from the coherent
/// state at the left minimum.
std::vector<CrossingRecord> quantum_crossing_ensemble(const PotentialParams& p, const ModelCoefficients& c,
                                                      double dt, double t_max, double record_interval,
                                                      std::uint64_t seed, std::size_t n, unsigned threads = 1);

/// First crossing of the deterministic closed evolution (gamma = 0).
CrossingRecord closed_first_crossing(const PotentialParams& p, double dt, double t_max, double record_interval);

/// One (T, gamma) cell; errors are caught and recorded.
RateCell run_cell(const SweepSpec& spec, std::size_t index);

/// All cells in temperature-major order, resuming from checkpoints.
RateTable run_sweep(const SweepSpec& spec);

struct SweepLattice {
    std::vector<double> temperatures;
    std::vector<double> gammas;
};

/// Desk-scale lattice: T geometric over [0.05, 3], gamma evenly spaced over
/// [0, 0.7] (a single gamma column is placed at 0.25).
SweepLattice default_sweep_lattice(std::size_t n_temperatures, std::size_t n_gammas);

} // namespace dwell
