#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dwell/potential.hpp"

namespace dwell {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;
};

struct LangevinConfig {
    double gamma = 0.2;
    double temperature = 1.0;
    double dt = 1e-3;
    double t_max = 500.0;
    std::uint64_t seed = 0;
    std::size_t ensemble_size = 1;
    /// Steps between stored path samples; 0 stores no path.
    std::size_t path_stride = 0;
    /// Stop integrating at the first crossing of the dividing coordinate.
    bool stop_at_crossing = true;

    void validate() const;
};

struct CrossingRecord {
    bool crossed = false;
    double t_cross = 0.0; // t_max when censored
};

struct ClassicalPath {
    std::vector<PhasePoint> samples;
};

struct ClassicalTrajectory {
    ClassicalPath path;
    CrossingRecord crossing;
    PhasePoint final_state;
};

/// One Euler-Maruyama step of
///   dx = p/m dt,   dp = (-V'(x) - 2 gamma p) dt + 2 sqrt(gamma m k_B T) dW
/// with dW ~ Normal(0, dt) supplied by the caller.
PhasePoint langevin_step(const PhasePoint& s, const PotentialParams& params,
                         const LangevinConfig& cfg, double dW);

/// Integrates from `init` until the first time x >= x_star (when
/// cfg.stop_at_crossing) or t_max. The noise stream is the substream
/// (cfg.seed, trajectory_index).
ClassicalTrajectory simulate_trajectory(const PhasePoint& init, const PotentialParams& params,
                                        const LangevinConfig& cfg, double x_star,
                                        std::uint64_t trajectory_index = 0);

/// cfg.ensemble_size trajectories from the left minimum at rest; records are
/// returned in trajectory-index order regardless of `threads`.
std::vector<CrossingRecord> run_langevin_ensemble(const PotentialParams& params,
                                                  const LangevinConfig& cfg,
                                                  unsigned threads = 1);

struct RateEstimate {
    double rate = 0.0;
    double rate_sem = 0.0;
    double mean_time = 0.0;
    double time_sem = 0.0;
    double crossing_fraction = 0.0;
    std::size_t n = 0;
    /// Set when fewer than half of the trajectories crossed.
    bool censoring_flag = false;
};

/// k = 1 / mean(t_cross); censored records enter with their t_cross (= t_max).
/// rate_sem propagates the standard error of the mean time to first order.
RateEstimate transition_rate(std::span<const CrossingRecord> records);

struct ArrheniusFit {
    double prefactor = 0.0;
    double residual_norm = 0.0;
};

/// Single-parameter least squares of k_i ~ c exp(-V_B / k_B T_i).
ArrheniusFit arrhenius_fit(std::span<const double> temperatures, std::span<const double> rates,
                           double barrier_height);

struct PhaseBox {
    double x_min = -6.0;
    double x_max = 6.0;
    double p_min = -6.0;
    double p_max = 6.0;
};

/// Classical Gibbs density exp(-H/k_B T)/Z with Z from a tensor trapezoid rule
/// on `box`.
class ClassicalGibbs {
public:
    ClassicalGibbs(const PotentialParams& params, double temperature, PhaseBox box = {},
                   std::size_t quadrature_points = 1201);

    double density(double x, double p) const;
    double energy(double x, double p) const;
    double partition_function() const { return z_; }
    double temperature() const { return temperature_; }
    const PotentialParams& params() const { return params_; }

    /// Probability mass in [x0,x1]x[p0,p1], by composite Simpson.
    double mass(double x0, double x1, double p0, double p1, std::size_t sub = 16) const;

private:
    PotentialParams params_;
    double temperature_;
    double z_;
};

/// Rectangular (x, p) histogram with an overflow bin for samples outside.
class PhaseHistogram {
public:
    PhaseHistogram(PhaseBox box, std::size_t nx, std::size_t np);

    void add(double x, double p);
    void merge(const PhaseHistogram& other);

    std::size_t nx() const { return nx_; }
    std::size_t np() const { return np_; }
    const PhaseBox& box() const { return box_; }
    double count(std::size_t i, std::size_t j) const { return counts_[i * np_ + j]; }
    double overflow() const { return overflow_; }
    double total() const { return total_; }

    /// Total-variation distance to the Gibbs distribution, counting the
    /// overflow bin against the Gibbs mass outside the box.
    double total_variation(const ClassicalGibbs& gibbs) const;

private:
    PhaseBox box_;
    std::size_t nx_, np_;
    std::vector<double> counts_;
    double overflow_ = 0.0;
    double total_ = 0.0;
};

struct StationarySampling {
    double burn_in = 50.0;
    double sample_interval = 0.1;
};

/// Runs cfg.ensemble_size uncensored trajectories for cfg.t_max each from the
/// left minimum and histograms (x, p) after the burn-in.
PhaseHistogram sample_phase_histogram(const PotentialParams& params, const LangevinConfig& cfg,
                                      PhaseBox box, std::size_t nx, std::size_t np,
                                      StationarySampling sampling = {}, unsigned threads = 1);

} // namespace dwell
