#include "dwell/classical.hpp"

#include <cmath>
#include <random>

#include "dwell/error.hpp"
#include "dwell/parallel.hpp"
#include "dwell/units.hpp"

namespace dwell {

void LangevinConfig::validate() const
{
    require(gamma >= 0.0, ErrorCode::InvalidArgument, "gamma must be non-negative");
    require(temperature >= 0.0, ErrorCode::InvalidArgument, "temperature must be non-negative");
    require(dt > 0.0, ErrorCode::InvalidArgument, "dt must be positive");
    require(t_max >= dt, ErrorCode::InvalidArgument, "t_max must be at least dt");
}

PhasePoint langevin_step(const PhasePoint& s, const PotentialParams& params,
                         const LangevinConfig& cfg, double dW)
{
    const double force = eval_derivatives(s.x, params).force;
    const double noise = 2.0 * std::sqrt(cfg.gamma * params.mass * units::k_B * cfg.temperature);
    return {s.x + s.p / params.mass * cfg.dt,
            s.p + (-force - 2.0 * cfg.gamma * s.p) * cfg.dt + noise * dW,
            s.t + cfg.dt};
}

ClassicalTrajectory simulate_trajectory(const PhasePoint& init, const PotentialParams& params,
                                        const LangevinConfig& cfg, double x_star,
                                        std::uint64_t trajectory_index)
{
    cfg.validate();
    auto rng = substream(cfg.seed, trajectory_index);
    std::normal_distribution<double> normal(0.0, std::sqrt(cfg.dt));

    ClassicalTrajectory out;
    PhasePoint s = init;
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
    if (cfg.path_stride > 0) out.path.samples.push_back(s);

    out.crossing = {false, cfg.t_max};
    for (std::size_t step = 1; step <= n_steps; ++step) {
        s = langevin_step(s, params, cfg, normal(rng));
        s.t = static_cast<double>(step) * cfg.dt; // avoid accumulated rounding in t
        if (cfg.path_stride > 0 && step % cfg.path_stride == 0) out.path.samples.push_back(s);
        if (!out.crossing.crossed && s.x >= x_star) {
            out.crossing = {true, s.t};
            if (cfg.stop_at_crossing) break;
        }
    }
    if (cfg.path_stride > 0 && out.path.samples.back().t != s.t) out.path.samples.push_back(s);
    out.final_state = s;
    return out;
}

std::vector<CrossingRecord> run_langevin_ensemble(const PotentialParams& params,
                                                  const LangevinConfig& cfg, unsigned threads)
{
    cfg.validate();
    const WellGeometry geo = well_geometry(params);
    LangevinConfig run = cfg;
    run.path_stride = 0;
    run.stop_at_crossing = true;

    std::vector<CrossingRecord> records(cfg.ensemble_size);
    parallel_for(cfg.ensemble_size, threads, [&](std::size_t i) {
        records[i] = simulate_trajectory({geo.x_left, 0.0, 0.0}, params, run,
                                         geo.dividing_coordinate, i)
                         .crossing;
    });
    return records;
}

RateEstimate transition_rate(std::span<const CrossingRecord> records)
{
    require(!records.empty(), ErrorCode::EmptyEnsemble, "no crossing records");
    const auto n = records.size();
    double sum = 0.0;
    std::size_t crossed = 0;
    for (const auto& r : records) {
        sum += r.t_cross;
        if (r.crossed) ++crossed;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : records) ss += (r.t_cross - mean) * (r.t_cross - mean);
    const double sem = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))
                             : 0.0;

    RateEstimate est;
    est.n = n;
    est.mean_time = mean;
    est.time_sem = sem;
    est.rate = 1.0 / mean;
    est.rate_sem = sem / (mean * mean);
    est.crossing_fraction = static_cast<double>(crossed) / static_cast<double>(n);
    est.censoring_flag = est.crossing_fraction < 0.5;
    return est;
}

ArrheniusFit arrhenius_fit(std::span<const double> temperatures, std::span<const double> rates,
                           double barrier_height)
{
    require(temperatures.size() == rates.size() && !temperatures.empty(),
            ErrorCode::InvalidArgument, "temperature and rate lists must match and be nonempty");
    double kf = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        require(temperatures[i] > 0.0, ErrorCode::InvalidArgument, "temperatures must be positive");
        const double f = std::exp(-barrier_height / (units::k_B * temperatures[i]));
        kf += rates[i] * f;
        ff += f * f;
    }
    require(ff > 0.0 && std::isfinite(ff), ErrorCode::DegenerateFit,
            "Arrhenius factors underflow at these temperatures");
    ArrheniusFit fit;
    fit.prefactor = kf / ff;
    double res = 0.0;
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        const double r = rates[i] - fit.prefactor * std::exp(-barrier_height / (units::k_B * temperatures[i]));
        res += r * r;
    }
    fit.residual_norm = std::sqrt(res);
    return fit;
}

ClassicalGibbs::ClassicalGibbs(const PotentialParams& params, double temperature, PhaseBox box,
                               std::size_t quadrature_points)
    : params_(params)
    , temperature_(temperature)
    , z_(1.0)
{
    require(temperature > 0.0, ErrorCode::InvalidArgument, "Gibbs density needs T > 0");
    require(quadrature_points >= 3, ErrorCode::InvalidArgument, "too few quadrature points");
    const std::size_t n = quadrature_points;
    const double hx = (box.x_max - box.x_min) / static_cast<double>(n - 1);
    const double hp = (box.p_max - box.p_min) / static_cast<double>(n - 1);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = box.x_min + static_cast<double>(i) * hx;
        const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = box.p_min + static_cast<double>(j) * hp;
            const double wp = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            z += wx * wp * std::exp(-energy(x, p) / (units::k_B * temperature_));
        }
    }
    z_ = z * hx * hp;
}

double ClassicalGibbs::energy(double x, double p) const
{
    return p * p / (2.0 * params_.mass) + eval_potential(x, params_);
}

double ClassicalGibbs::density(double x, double p) const
{
    return std::exp(-energy(x, p) / (units::k_B * temperature_)) / z_;
}

double ClassicalGibbs::mass(double x0, double x1, double p0, double p1, std::size_t sub) const
{
    if (sub % 2 == 1) ++sub;
    const double hx = (x1 - x0) / static_cast<double>(sub);
    const double hp = (p1 - p0) / static_cast<double>(sub);
    auto w = [sub](std::size_t i) { return (i == 0 || i == sub) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    double acc = 0.0;
    for (std::size_t i = 0; i <= sub; ++i)
        for (std::size_t j = 0; j <= sub; ++j)
            acc += w(i) * w(j) * density(x0 + static_cast<double>(i) * hx, p0 + static_cast<double>(j) * hp);
    return acc * hx * hp / 9.0;
}

PhaseHistogram::PhaseHistogram(PhaseBox box, std::size_t nx, std::size_t np)
    : box_(box)
    , nx_(nx)
    , np_(np)
    , counts_(nx * np, 0.0)
{
    require(nx > 0 && np > 0 && box.x_max > box.x_min && box.p_max > box.p_min,
            ErrorCode::InvalidArgument, "bad histogram geometry");
}

void PhaseHistogram::add(double x, double p)
{
    total_ += 1.0;
    if (x < box_.x_min || x >= box_.x_max || p < box_.p_min || p >= box_.p_max) {
        overflow_ += 1.0;
        return;
    }
    const auto i = static_cast<std::size_t>((x - box_.x_min) / (box_.x_max - box_.x_min) * static_cast<double>(nx_));
    const auto j = static_cast<std::size_t>((p - box_.p_min) / (box_.p_max - box_.p_min) * static_cast<double>(np_));
    counts_[std::min(i, nx_ - 1) * np_ + std::min(j, np_ - 1)] += 1.0;
}

void PhaseHistogram::merge(const PhaseHistogram& other)
{
    require(other.nx_ == nx_ && other.np_ == np_, ErrorCode::InvalidArgument, "histogram shape mismatch");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    overflow_ += other.overflow_;
    total_ += other.total_;
}

double PhaseHistogram::total_variation(const ClassicalGibbs& gibbs) const
{
    require(total_ > 0.0, ErrorCode::EmptyEnsemble, "empty histogram");
    const double dx = (box_.x_max - box_.x_min) / static_cast<double>(nx_);
    const double dp = (box_.p_max - box_.p_min) / static_cast<double>(np_);
    double tv = 0.0, inside = 0.0;
    for (std::size_t i = 0; i < nx_; ++i) {
        for (std::size_t j = 0; j < np_; ++j) {
            const double x0 = box_.x_min + static_cast<double>(i) * dx;
            const double p0 = box_.p_min + static_cast<double>(j) * dp;
            const double q = gibbs.mass(x0, x0 + dx, p0, p0 + dp);
            inside += q;
            tv += std::abs(count(i, j) / total_ - q);
        }
    }
    tv += std::abs(overflow_ / total_ - std::max(0.0, 1.0 - inside));
    return 0.5 * tv;
}

PhaseHistogram sample_phase_histogram(const PotentialParams& params, const LangevinConfig& cfg,
                                      PhaseBox box, std::size_t nx, std::size_t np,
                                      StationarySampling sampling, unsigned threads)
{
    cfg.validate();
    const WellGeometry geo = well_geometry(params);
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sampling.sample_interval / cfg.dt)));
    const auto burn = static_cast<std::size_t>(std::llround(sampling.burn_in / cfg.dt));
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));

    std::vector<PhaseHistogram> parts(cfg.ensemble_size, PhaseHistogram(box, nx, np));
    parallel_for(cfg.ensemble_size, threads, [&](std::size_t k) {
        auto rng = substream(cfg.seed, k);
        std::normal_distribution<double> normal(0.0, std::sqrt(cfg.dt));
        PhasePoint s{geo.x_left, 0.0, 0.0};
        for (std::size_t step = 1; step <= n_steps; ++step) {
            s = langevin_step(s, params, cfg, normal(rng));
            if (step > burn && step % stride == 0) parts[k].add(s.x, s.p);
        }
    });
    PhaseHistogram out(box, nx, np);
    for (const auto& h : parts) out.merge(h);
    return out;
}

} // namespace dwell
