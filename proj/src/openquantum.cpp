#include "dwell/openquantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>

#include "dwell/error.hpp"
#include "dwell/parallel.hpp"
#include "dwell/units.hpp"

namespace dwell {

namespace {
std::span<cplx> view(Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Tag separating SSE noise streams from Langevin ones under the same seed.
constexpr std::uint64_t sse_stream_tag = 1;
} // namespace

std::size_t default_truncation(const PotentialParams& p)
{
    return default_grid(p).size() == 256 ? 64 : 96;
}

QuantumSystem build_quantum_system(const PotentialParams& p, double max_temperature, std::size_t base_m)
{
    return build_quantum_system(p, default_grid(p), max_temperature, base_m);
}

QuantumSystem build_quantum_system(const PotentialParams& p, const Grid& g, double max_temperature,
                                   std::size_t base_m)
{
    p.validate_double_well();
    if (base_m == 0) base_m = default_truncation(p);
    const SpectrumResult full = eigensolve(build_hamiltonian(g, p), g, g.size());
    const std::size_t m = truncation_for_temperature(full, max_temperature, base_m);
    const auto mi = static_cast<Eigen::Index>(m);
    QuantumSystem sys{p, SpectrumResult{g, full.energies.head(mi), full.vectors.leftCols(mi), full.all_energies}, {}};
    sys.ops = eigenbasis_operators(sys.spectrum);
    return sys;
}

double effective_frequency(const PotentialParams& p, OmegaEConvention conv)
{
    return well_geometry(p, conv).effective_frequency;
}

ModelCoefficients coefficients_for(ModelKind kind, const PotentialParams& p, double gamma, double temperature,
                                   OmegaEConvention conv, int p_sign)
{
    return model_coefficients(kind, gamma, temperature, effective_frequency(p, conv), p.mass, p_sign);
}

Eigen::MatrixXcd build_effective_hamiltonian(const Eigen::MatrixXd& h0, const Grid& g, const ModelCoefficients& c)
{
    Eigen::MatrixXcd h = h0.cast<cplx>();
    if (c.c_xp == 0.0) return h;
    const Eigen::MatrixXcd p = momentum_matrix(g);
    const Eigen::VectorXcd x = g.positions().cast<cplx>();
    h += c.c_xp * (x.asDiagonal() * p + p * x.asDiagonal());
    return h;
}

LindbladPropagator::LindbladPropagator(const QuantumSystem& sys, const ModelCoefficients& c)
{
    const auto& ops = sys.ops;
    h_ = ops.h0 + c.c_xp * ops.xp_sym;
    h_ = 0.5 * (h_ + h_.adjoint()).eval();
    l_ = c.c_x * ops.x + cplx(0.0, c.c_p) * ops.p;
    const Eigen::MatrixXcd ldl = l_.adjoint() * l_;
    k_ = cplx(0.0, -1.0 / units::hbar) * h_ - (0.5 / units::hbar) * ldl;
}

Eigen::MatrixXcd LindbladPropagator::rhs(const Eigen::MatrixXcd& rho) const
{
    // exactly Hermitian output; valid for Hermitian rho only
    const Eigen::MatrixXcd kr = k_ * rho;
    const Eigen::MatrixXcd jump = (l_ * rho) * l_.adjoint();
    return kr + kr.adjoint() + (0.5 / units::hbar) * (jump + jump.adjoint());
}

void LindbladPropagator::step(Eigen::MatrixXcd& rho, double dt) const
{
    const Eigen::MatrixXcd k1 = rhs(rho);
    const Eigen::MatrixXcd k2 = rhs(rho + 0.5 * dt * k1);
    const Eigen::MatrixXcd k3 = rhs(rho + 0.5 * dt * k2);
    const Eigen::MatrixXcd k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double LindbladPropagator::spectral_radius_estimate(int iterations) const
{
    const auto m = h_.rows();
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd v(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) v(i, j) = cplx(normal(rng), normal(rng));
    v = (v + v.adjoint()).eval();
    v /= v.norm();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::MatrixXcd w = rhs(v);
        const double n = w.norm();
        if (n == 0.0) return 0.0;
        lambda = std::max(lambda, n);
        v = w / n;
    }
    return lambda;
}

double LindbladPropagator::stable_dt() const
{
    // RK4 is stable to |z| ~ 2.8 along both axes; keep a margin.
    const double lambda = spectral_radius_estimate();
    return lambda > 0.0 ? 2.0 / lambda : std::numeric_limits<double>::infinity();
}

DensityMatrix projected_coherent_state(const QuantumSystem& sys, double x0, double omega_loc)
{
    const GridState psi = coherent_state(sys.grid(), x0, 0.0, omega_loc, sys.params.mass);
    Eigen::VectorXcd c = to_eigenbasis(sys.spectrum, psi);
    c /= c.norm();
    return pure_density(c);
}

LindbladRun propagate_lindblad(const DensityMatrix& rho0, const QuantumSystem& sys, const ModelCoefficients& c,
                               const LindbladConfig& cfg, const DensityMatrix* gibbs)
{
    require(rho0.size() == sys.spectrum.size(), ErrorCode::InvalidArgument, "initial state size differs from truncation");
    require(cfg.t_final >= 0.0 && cfg.record_interval > 0.0, ErrorCode::InvalidArgument, "bad Lindblad time grid");
    rho0.validate();

    const LindbladPropagator prop(sys, c);
    double dt = prop.stable_dt();
    if (cfg.dt > 0.0) dt = std::min(dt, cfg.dt);
    const auto per_record = static_cast<std::size_t>(std::ceil(cfg.record_interval / std::min(dt, cfg.record_interval)));
    dt = cfg.record_interval / static_cast<double>(per_record);
    const auto n_records = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.record_interval));

    LindbladRun run;
    run.dt = dt;
    run.temperature_condition_ratio = temperature_condition_ratio(c.gamma, c.temperature);
    const auto top = static_cast<Eigen::Index>(rho0.size() - 1);
    const auto& ops = sys.ops;

    DensityMatrix rho = rho0;
    rho.rho = (0.5 * (rho0.rho + rho0.rho.adjoint())).eval();
    auto record = [&](double t) {
        const double tr = rho.trace();
        const double leak = rho.rho(top, top).real();
        require(leak <= cfg.leak_tolerance, ErrorCode::TruncationLeak,
                "top level population " + std::to_string(leak) + " at t=" + std::to_string(t));
        require(std::abs(tr - 1.0) <= cfg.trace_tolerance, ErrorCode::ConvergenceFailure,
                "trace drift " + std::to_string(tr - 1.0) + " at t=" + std::to_string(t));
        LindbladSample s{};
        s.t = t;
        s.x_expect = expectation(ops.x, rho, 1e-8);
        s.var_x = expectation(ops.x2, rho, 1e-8) - s.x_expect * s.x_expect;
        s.p_expect = expectation(ops.p, rho, 1e-8);
        s.trace_residual = tr - 1.0;
        s.min_eig = rho.min_eigenvalue();
        s.purity = rho.purity();
        s.fidelity_gibbs = (gibbs && cfg.record_fidelity) ? fidelity(rho, *gibbs) : std::nan("");
        run.samples.push_back(s);
    };

    record(0.0);
    for (std::size_t r = 1; r <= n_records; ++r) {
        for (std::size_t k = 0; k < per_record; ++k) prop.step(rho.rho, dt);
        // keep rounding from accumulating an anti-Hermitian part
        rho.rho = 0.5 * (rho.rho + rho.rho.adjoint()).eval();
        record(static_cast<double>(r) * cfg.record_interval);
    }
    run.final_rate = prop.rhs(rho.rho).norm();
    run.final_state = std::move(rho);
    return run;
}

void SSEConfig::validate() const
{
    require(dt > 0.0 && t_final >= 0.0, ErrorCode::InvalidArgument, "SSE needs dt > 0 and t_final >= 0");
    require(renormalize_every >= 1 && record_stride >= 1 && noise_refinement >= 1, ErrorCode::InvalidArgument,
            "SSE strides must be at least 1");
}

SSEPropagator::SSEPropagator(const Grid& g, const PotentialParams& p, const ModelCoefficients& c, double dt)
    : grid_(g)
    , c_(c)
    , dt_(dt)
{
    require(dt > 0.0, ErrorCode::InvalidArgument, "dt must be positive");
    const auto n = static_cast<Eigen::Index>(g.size());
    const double hb = units::hbar;
    const Eigen::VectorXd v = potential_on_grid(g, p);
    const Eigen::VectorXd k = g.wavenumbers();
    xs_ = g.positions().cast<cplx>();
    psym_ = hb * k;
    psym_(n / 2) = 0.0;
    x_half_.resize(n);
    k_full_.resize(n);
    const double a = c.c_x, b = c.c_p;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = g.x(static_cast<std::size_t>(j));
        // -L^+L/2 = -(a^2 X^2 + b^2 P^2)/2 + a b hbar/2
        const cplx gx(-0.5 * a * a * x * x / hb + 0.5 * a * b, -v(j) / hb);
        x_half_(j) = std::exp(0.5 * dt * gx);
        const double kk = k(j) * k(j);
        const cplx gk(-0.5 * b * b * hb * kk, -hb * kk / (2.0 * p.mass));
        k_full_(j) = std::exp(dt * gk) / static_cast<double>(n);
    }
    buf_.resize(n);
    pp_.resize(n);
    xp_.resize(n);
    pxp_.resize(n);
}

double SSEPropagator::step(GridState& s, cplx dz, bool renormalize)
{
    const double dx = grid_.dx();
    const double inv_n = 1.0 / static_cast<double>(grid_.size());
    auto& psi = s.psi;

    psi.array() *= x_half_.array();
    grid_.fft().forward(view(psi), view(buf_));
    buf_.array() *= k_full_.array();
    grid_.fft().backward(view(buf_), view(psi));
    psi.array() *= x_half_.array();

    if (!c_.is_closed()) {
        const double hb = units::hbar;
        grid_.fft().forward(view(psi), view(buf_));
        buf_.array() *= psym_.array().cast<cplx>() * inv_n;
        grid_.fft().backward(view(buf_), view(pp_));
        xp_ = xs_.cwiseProduct(psi);
        grid_.fft().forward(view(xp_), view(buf_));
        buf_.array() *= psym_.array().cast<cplx>() * inv_n;
        grid_.fft().backward(view(buf_), view(pxp_));

        const double n2 = psi.squaredNorm();
        const double ex = psi.dot(xp_).real() / n2;
        const double ep = psi.dot(pp_).real() / n2;
        const cplx el(c_.c_x * ex, c_.c_p * ep);
        // buf_ <- L psi
        buf_ = c_.c_x * xp_ + cplx(0.0, c_.c_p) * pp_;
        const cplx noise = dz / std::sqrt(2.0 * hb);
        const double dt = dt_;
        psi += (dt / hb) * (cplx(0.0, -c_.c_xp) * (xs_.cwiseProduct(pp_) + pxp_) + std::conj(el) * buf_ -
                            0.5 * std::norm(el) * psi) +
               noise * (buf_ - el * psi);
    }

    const double norm = std::sqrt(psi.squaredNorm() * dx);
    if (!(norm >= 0.5 && norm <= 2.0))
        throw Error(ErrorCode::BlowUp, "SSE norm " + std::to_string(norm) + " before renormalization; reduce dt");
    if (renormalize) psi /= norm;
    return norm;
}

SSETrajectory propagate_sse(const GridState& psi0, const PotentialParams& p, const ModelCoefficients& c,
                            const SSEConfig& cfg, std::uint64_t trajectory_index)
{
    cfg.validate();
    SSEPropagator prop(psi0.grid, p, c, cfg.dt);
    auto rng = substream(cfg.seed, trajectory_index, sse_stream_tag);
    std::normal_distribution<double> normal;
    const double sub_sd = std::sqrt(cfg.dt / static_cast<double>(cfg.noise_refinement));
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));

    std::vector<std::size_t> snap_steps;
    for (double ts : cfg.snapshot_times) snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / cfg.dt)));

    SSETrajectory out{{}, {}, {}, psi0};
    GridState s = psi0;
    s.normalize();
    double last_norm = 1.0;
    const double dx = s.grid.dx();
    const Eigen::VectorXd xs = s.grid.positions();
    auto record = [&](std::size_t step) {
        const double t = static_cast<double>(step) * cfg.dt;
        const Eigen::VectorXd prob = s.psi.cwiseAbs2();
        const double n2 = prob.sum() * dx;
        const double ex = prob.dot(xs) * dx / n2;
        const double ex2 = prob.dot(xs.cwiseProduct(xs)) * dx / n2;
        const double ep = expect_momentum(s) / n2;
        out.samples.push_back({t, ex, ep, ex2, std::abs(last_norm - 1.0)});
    };
    auto maybe_snapshot = [&](std::size_t step) {
        for (std::size_t k : snap_steps) {
            if (k == step) {
                GridState copy = s;
                copy.normalize();
                out.snapshots.push_back(std::move(copy));
                out.snapshot_times.push_back(static_cast<double>(step) * cfg.dt);
            }
        }
    };

    record(0);
    maybe_snapshot(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        double r = 0.0, im = 0.0;
        for (unsigned k = 0; k < cfg.noise_refinement; ++k) {
            r += sub_sd * normal(rng);
            im += sub_sd * normal(rng);
        }
        const bool renorm = step % cfg.renormalize_every == 0 || step == n_steps;
        last_norm = prop.step(s, cplx(r, im), renorm);
        maybe_snapshot(step);
        if (step % cfg.record_stride == 0 || step == n_steps) {
            record(step);
            if (cfg.stop_at_crossing && out.samples.back().x_expect >= cfg.x_star) break;
        }
    }
    s.normalize();
    out.final_state = std::move(s);
    return out;
}

SSEEnsembleSummary run_sse_ensemble(const GridState& psi0, const PotentialParams& p, const ModelCoefficients& c,
                                    const SSEConfig& cfg, std::size_t n_trajectories, unsigned threads)
{
    require(n_trajectories >= 1, ErrorCode::EmptyEnsemble, "SSE ensemble needs at least one trajectory");
    SSEConfig run = cfg;
    run.stop_at_crossing = false;
    run.snapshot_times.clear();

    std::vector<std::vector<SSESample>> all(n_trajectories);
    parallel_for(n_trajectories, threads, [&](std::size_t i) { all[i] = propagate_sse(psi0, p, c, run, i).samples; });

    SSEEnsembleSummary out;
    out.n = n_trajectories;
    const std::size_t n_t = all.front().size();
    const double n = static_cast<double>(n_trajectories);
    auto reduce = [&](auto field, std::vector<double>& mean, std::vector<double>& sem) {
        mean.assign(n_t, 0.0);
        sem.assign(n_t, 0.0);
        for (std::size_t t = 0; t < n_t; ++t) {
            double s = 0.0;
            for (const auto& traj : all) s += field(traj[t]);
            const double mu = s / n;
            double ss = 0.0;
            for (const auto& traj : all) ss += (field(traj[t]) - mu) * (field(traj[t]) - mu);
            mean[t] = mu;
            sem[t] = n_trajectories > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        }
    };
    for (const auto& s : all.front()) out.times.push_back(s.t);
    reduce([](const SSESample& s) { return s.x_expect; }, out.mean_x, out.sem_x);
    reduce([](const SSESample& s) { return s.p_expect; }, out.mean_p, out.sem_p);
    reduce([](const SSESample& s) { return s.x2_expect; }, out.mean_x2, out.sem_x2);
    return out;
}

} // namespace dwell
