#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "dwell/classical.hpp"
#include "dwell/error.hpp"

using namespace dwell;

namespace {

double energy(const PhasePoint& s, const PotentialParams& p) { return 0.5 * s.p * s.p / p.mass + eval_potential(s.x, p); }

} // namespace

TEST_CASE("langevin_step without friction ignores the noise")
{
    const auto p = PotentialParams::shallow();
    LangevinConfig cfg;
    cfg.gamma = 0.0;
    cfg.temperature = 2.0;
    cfg.dt = 1e-3;
    const PhasePoint s{0.4, -0.3, 0.0};
    const auto a = langevin_step(s, p, cfg, 0.7);
    const auto b = langevin_step(s, p, cfg, -1.3);
    CHECK(a.x == b.x);
    CHECK(a.p == b.p);
    CHECK(a.x == doctest::Approx(0.4 - 0.3e-3).epsilon(1e-15));
    CHECK(a.p == doctest::Approx(-0.3 - eval_derivatives(0.4, p).force * 1e-3).epsilon(1e-15));
}

TEST_CASE("the right minimum is a fixed point at T = 0")
{
    const auto p = PotentialParams::shallow();
    LangevinConfig cfg;
    cfg.gamma = 0.2;
    cfg.temperature = 0.0;
    const double xr = well_geometry(p).x_right;
    PhasePoint s{xr, 0.0, 0.0};
    for (int i = 0; i < 1000; ++i) s = langevin_step(s, p, cfg, 0.5);
    CHECK(std::abs(s.x - xr) < 1e-12);
    CHECK(std::abs(s.p) < 1e-12);
}

TEST_CASE("energy drift of the frictionless integrator")
{
    const auto p = PotentialParams::shallow();
    const double xr = well_geometry(p).x_right;
    auto run = [&](double dt) {
        LangevinConfig cfg;
        cfg.gamma = 0.0;
        cfg.temperature = 0.0;
        cfg.dt = dt;
        PhasePoint s{xr + 0.1, 0.0, 0.0};
        const auto n = static_cast<int>(std::lround(10.0 / dt));
        for (int i = 0; i < n; ++i) s = langevin_step(s, p, cfg, 0.0);
        return s;
    };
    const double e0 = energy({xr + 0.1, 0.0, 0.0}, p);
    const double drift = energy(run(1e-3), p) - e0;
    const double drift_half = energy(run(5e-4), p) - e0;
    CHECK(std::abs(drift) < 1e-3);
    // first-order scheme: halving dt roughly halves the drift
    CHECK(std::abs(drift_half) < 0.6 * std::abs(drift));
}

TEST_CASE("zero temperature never crosses")
{
    const auto p = PotentialParams::shallow();
    const auto g = well_geometry(p);
    LangevinConfig cfg;
    cfg.gamma = 0.2;
    cfg.temperature = 0.0;
    cfg.t_max = 100.0;
    const auto tr = simulate_trajectory({g.x_left, 0.0, 0.0}, p, cfg, g.dividing_coordinate);
    CHECK_FALSE(tr.crossing.crossed);
    CHECK(tr.crossing.t_cross == cfg.t_max);
}

TEST_CASE("high temperature crosses within t_max = 200")
{
    const auto p = PotentialParams::shallow();
    LangevinConfig cfg;
    cfg.gamma = 0.2;
    cfg.temperature = 3.0;
    cfg.t_max = 200.0;
    cfg.seed = 11;
    cfg.ensemble_size = 40;
    const auto rec = run_langevin_ensemble(p, cfg);
    const auto est = transition_rate(rec);
    CHECK(est.crossing_fraction > 0.95);
}

TEST_CASE("trajectories are reproducible and independent of threading")
{
    const auto p = PotentialParams::shallow();
    const auto g = well_geometry(p);
    LangevinConfig cfg;
    cfg.gamma = 0.25;
    cfg.temperature = 1.0;
    cfg.t_max = 50.0;
    cfg.seed = 2024;
    cfg.path_stride = 100;
    cfg.stop_at_crossing = false;
    const auto a = simulate_trajectory({g.x_left, 0.0, 0.0}, p, cfg, g.dividing_coordinate, 3);
    const auto b = simulate_trajectory({g.x_left, 0.0, 0.0}, p, cfg, g.dividing_coordinate, 3);
    REQUIRE(a.path.samples.size() == b.path.samples.size());
    REQUIRE(a.path.samples.size() > 100);
    bool identical = true;
    for (std::size_t i = 0; i < a.path.samples.size(); ++i)
        identical = identical && a.path.samples[i].x == b.path.samples[i].x && a.path.samples[i].p == b.path.samples[i].p;
    CHECK(identical);
    const auto c = simulate_trajectory({g.x_left, 0.0, 0.0}, p, cfg, g.dividing_coordinate, 4);
    CHECK(c.final_state.x != a.final_state.x);

    cfg.path_stride = 0;
    cfg.stop_at_crossing = true;
    cfg.ensemble_size = 24;
    const auto serial = run_langevin_ensemble(p, cfg, 1);
    const auto threaded = run_langevin_ensemble(p, cfg, 4);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].crossed == threaded[i].crossed);
        CHECK(serial[i].t_cross == threaded[i].t_cross);
    }
}

TEST_CASE("transition_rate conventions")
{
    std::vector<CrossingRecord> r{{true, 10.0}, {true, 10.0}, {true, 10.0}};
    auto est = transition_rate(r);
    CHECK(est.rate == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(est.crossing_fraction == 1.0);
    CHECK(est.rate_sem == 0.0);

    std::vector<CrossingRecord> censored(5, CrossingRecord{false, 500.0});
    est = transition_rate(censored);
    CHECK(est.rate == doctest::Approx(0.002).epsilon(1e-15));
    CHECK(est.crossing_fraction == 0.0);
    CHECK(est.censoring_flag);

    std::vector<CrossingRecord> none;
    CHECK_THROWS_AS(transition_rate(none), Error);
}

TEST_CASE("Arrhenius fit")
{
    const double vb = 1.604;
    std::vector<double> ts{0.2, 0.3, 0.5, 0.8};
    std::vector<double> ks;
    for (double t : ts) ks.push_back(2.5 * std::exp(-vb / t));
    CHECK(arrhenius_fit(ts, ks, vb).prefactor == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(arrhenius_fit(ts, ks, vb).residual_norm < 1e-14);

    std::vector<double> t1{0.4}, k1{0.03};
    CHECK(arrhenius_fit(t1, k1, vb).prefactor == doctest::Approx(0.03 * std::exp(vb / 0.4)).epsilon(1e-13));

    std::vector<double> cold{1e-5}, kc{1.0};
    CHECK_THROWS_AS(arrhenius_fit(cold, kc, 100.0), Error);
}

TEST_CASE("classical Gibbs density")
{
    const auto p = PotentialParams::shallow();
    const ClassicalGibbs gibbs(p, 1.0);
    const double h1 = gibbs.energy(0.3, -0.4), h2 = gibbs.energy(-1.1, 0.9);
    CHECK(gibbs.density(0.3, -0.4) / gibbs.density(-1.1, 0.9) == doctest::Approx(std::exp(-(h1 - h2))).epsilon(1e-12));
    CHECK(gibbs.mass(-6, 6, -6, 6, 600) == doctest::Approx(1.0).epsilon(1e-8));

    // momentum marginal: Normal(0, m k_B T)
    const double pm = gibbs.mass(-6, 6, -1, 1, 600);
    CHECK(pm == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-6));

    // position marginal maxima at the minima
    double best = 0.0, arg = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double x0 = 0.01 * i;
        const double m = gibbs.mass(x0, x0 + 0.01, -6, 6, 64);
        if (m > best) {
            best = m;
            arg = x0 + 0.005;
        }
    }
    CHECK(std::abs(arg - well_geometry(p).x_right) < 0.01);
    CHECK(gibbs.mass(-1.4, -1.3, -6, 6) == doctest::Approx(gibbs.mass(1.3, 1.4, -6, 6)).epsilon(1e-10));
    CHECK(gibbs.mass(-6, 0, -6, 6, 600) == doctest::Approx(0.5).epsilon(1e-8));
}
