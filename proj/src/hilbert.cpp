#include "dwell/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Eigenvalues>

#include "dwell/error.hpp"
#include "dwell/units.hpp"

namespace dwell {

namespace {

std::span<const cplx> view(const Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<cplx> view(Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// F^-1 diag(mult) F psi
Eigen::VectorXcd spectral_apply(const Grid& g, const Eigen::VectorXcd& psi, const Eigen::VectorXd& mult)
{
    Eigen::VectorXcd buf(psi.size());
    g.fft().forward(view(psi), view(buf));
    buf.array() *= mult.array().cast<cplx>() / static_cast<double>(g.size());
    g.fft().backward(view(buf), view(buf));
    return buf;
}

Eigen::VectorXd momentum_symbol(const Grid& g)
{
    Eigen::VectorXd k = units::hbar * g.wavenumbers();
    k(static_cast<Eigen::Index>(g.size() / 2)) = 0.0;
    return k;
}

Eigen::VectorXd kinetic_symbol(const Grid& g, double mass)
{
    const Eigen::VectorXd k = g.wavenumbers();
    return (units::hbar * units::hbar / (2.0 * mass)) * k.array().square();
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid(double half_width, std::size_t n_points)
    : half_width_(half_width)
    , n_(n_points)
{
    require(half_width > 0.0, ErrorCode::InvalidArgument, "grid half width must be positive");
    require(n_points >= 64 && is_power_of_two(n_points), ErrorCode::InvalidArgument,
            "grid size must be a power of two and at least 64");
    fft_ = std::make_shared<const Fft>(n_points);
}

Eigen::VectorXd Grid::positions() const
{
    Eigen::VectorXd xs(static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j) xs(static_cast<Eigen::Index>(j)) = x(j);
    return xs;
}

Eigen::VectorXd Grid::wavenumbers() const
{
    Eigen::VectorXd k(static_cast<Eigen::Index>(n_));
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx());
    for (std::size_t m = 0; m < n_; ++m) {
        const auto signed_m = m < n_ / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n_);
        k(static_cast<Eigen::Index>(m)) = base * signed_m;
    }
    return k;
}

Grid default_grid(const PotentialParams& p)
{
    const auto s = PotentialParams::shallow();
    const bool shallow = p.amplitude == s.amplitude && p.width == s.width && p.mass == s.mass && p.omega == s.omega;
    return Grid(10.0, shallow ? 256 : 512);
}

double GridState::norm() const { return std::sqrt(psi.squaredNorm() * grid.dx()); }

void GridState::normalize()
{
    const double n = norm();
    require(n > 0.0 && std::isfinite(n), ErrorCode::InvalidArgument, "cannot normalize a zero state");
    psi /= n;
}

Eigen::VectorXcd apply_momentum(const Grid& g, const Eigen::VectorXcd& psi)
{
    return spectral_apply(g, psi, momentum_symbol(g));
}

Eigen::VectorXcd apply_kinetic(const Grid& g, const Eigen::VectorXcd& psi, double mass)
{
    return spectral_apply(g, psi, kinetic_symbol(g, mass));
}

Eigen::MatrixXd kinetic_matrix(const Grid& g, double mass)
{
    const auto n = g.size();
    const Eigen::VectorXd k = g.wavenumbers();
    const Eigen::VectorXd sym = kinetic_symbol(g, mass);
    std::vector<double> row(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += sym(static_cast<Eigen::Index>(m)) * std::cos(k(static_cast<Eigen::Index>(m)) * static_cast<double>(d) * g.dx());
        row[d] = acc / static_cast<double>(n);
    }
    Eigen::MatrixXd t(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = row[(j + n - l) % n];
    return t;
}

Eigen::MatrixXcd momentum_matrix(const Grid& g)
{
    const auto n = g.size();
    const Eigen::VectorXd k = g.wavenumbers();
    const Eigen::VectorXd sym = momentum_symbol(g);
    std::vector<double> row(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += sym(static_cast<Eigen::Index>(m)) * std::sin(k(static_cast<Eigen::Index>(m)) * static_cast<double>(d) * g.dx());
        row[d] = acc / static_cast<double>(n);
    }
    Eigen::MatrixXcd p(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
            p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = cplx(0.0, row[(j + n - l) % n]);
    return p;
}

Eigen::VectorXd potential_on_grid(const Grid& g, const PotentialParams& p)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j) v(static_cast<Eigen::Index>(j)) = eval_potential(g.x(j), p);
    return v;
}

Eigen::MatrixXd build_hamiltonian(const Grid& g, const PotentialParams& p)
{
    Eigen::MatrixXd h = kinetic_matrix(g, p.mass);
    h.diagonal() += potential_on_grid(g, p);
    return h;
}

SpectrumResult eigensolve(const Eigen::MatrixXd& hamiltonian, const Grid& g, std::size_t m)
{
    const auto n = g.size();
    require(static_cast<std::size_t>(hamiltonian.rows()) == n && hamiltonian.rows() == hamiltonian.cols(),
            ErrorCode::InvalidArgument, "Hamiltonian does not match the grid");
    require(m >= 1 && m <= n, ErrorCode::InvalidArgument, "truncation must satisfy 1 <= M <= N");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");

    SpectrumResult out{g, solver.eigenvalues().head(static_cast<Eigen::Index>(m)),
                       solver.eigenvectors().leftCols(static_cast<Eigen::Index>(m)) / std::sqrt(g.dx()),
                       solver.eigenvalues()};
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        auto col = out.vectors.col(c);
        const double cut = 1e-3 * col.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < col.size(); ++j) {
            if (std::abs(col(j)) > cut) {
                if (col(j) < 0.0) col *= -1.0;
                break;
            }
        }
    }
    return out;
}

GridState coherent_state(const Grid& g, double x0, double p0, double omega_loc, double mass)
{
    require(omega_loc > 0.0 && mass > 0.0, ErrorCode::InvalidArgument, "coherent state needs positive frequency and mass");
    require(x0 > -g.half_width() && x0 < g.half_width(), ErrorCode::InvalidArgument, "x0 outside the grid");
    GridState s{g, Eigen::VectorXcd(static_cast<Eigen::Index>(g.size()))};
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        const double a = -mass * omega_loc * (x - x0) * (x - x0) / (2.0 * units::hbar);
        s.psi(static_cast<Eigen::Index>(j)) = std::exp(cplx(a, p0 * x / units::hbar));
    }
    s.normalize();
    return s;
}

double tunnel_time(double e0, double e1)
{
    require(e1 - e0 > 0.0, ErrorCode::DegenerateGap, "E1 - E0 must be positive");
    return std::numbers::pi * units::hbar / (e1 - e0);
}

double DensityMatrix::purity() const { return (rho * rho).trace().real(); }

double DensityMatrix::hermiticity_residual() const { return (rho - rho.adjoint()).norm(); }

double DensityMatrix::min_eigenvalue() const
{
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "eigenvalues of rho");
    return es.eigenvalues()(0);
}

void DensityMatrix::validate(double psd_tol, double trace_tol) const
{
    require(rho.rows() == rho.cols() && rho.rows() > 0, ErrorCode::InvalidArgument, "density matrix must be square");
    require(hermiticity_residual() < 1e-10 * std::max(1.0, rho.norm()) + psd_tol, ErrorCode::NotPositive,
            "density matrix is not Hermitian");
    require(std::abs(trace() - 1.0) < trace_tol, ErrorCode::NotPositive, "density matrix trace is not 1");
    require(min_eigenvalue() > -psd_tol, ErrorCode::NotPositive, "density matrix has a negative eigenvalue");
}

DensityMatrix gibbs_density_operator(const SpectrumResult& spec, double temperature)
{
    require(temperature >= 0.0, ErrorCode::InvalidArgument, "temperature must be non-negative");
    const auto m = static_cast<Eigen::Index>(spec.size());
    DensityMatrix out{Eigen::MatrixXcd::Zero(m, m)};
    if (temperature == 0.0) {
        out.rho(0, 0) = 1.0;
        return out;
    }
    const double kt = units::k_B * temperature;
    const double e0 = spec.energies(0);
    const double tail = std::exp(-(spec.energies(m - 1) - e0) / kt);
    require(tail < 1e-12, ErrorCode::TruncationTooSmall,
            "Gibbs tail weight " + std::to_string(tail) + " at M=" + std::to_string(m));
    Eigen::VectorXd w = (-(spec.energies.array() - e0) / kt).exp();
    w /= w.sum();
    out.rho.diagonal() = w.cast<cplx>();
    return out;
}

std::size_t truncation_for_temperature(const SpectrumResult& spec, double temperature, std::size_t base_m)
{
    const auto& e = spec.all_energies;
    const auto n = static_cast<std::size_t>(e.size());
    std::size_t m = std::clamp<std::size_t>(base_m, 1, n);
    if (temperature <= 0.0) return m;
    const double kt = units::k_B * temperature;
    while (m < n && std::exp(-(e(static_cast<Eigen::Index>(m - 1)) - e(0)) / kt) >= 1e-12) ++m;
    return m;
}

namespace {
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "matrix square root");
    const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}
} // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    require(rho.size() == sigma.size(), ErrorCode::InvalidArgument, "fidelity needs equal dimensions");
    // trace drift of an integrated state is tolerated up to 1e-6
    rho.validate(1e-8, 1e-6);
    sigma.validate(1e-8, 1e-6);
    const Eigen::MatrixXcd r = psd_sqrt(rho.rho / rho.trace());
    const Eigen::MatrixXcd inner = r * (sigma.rho / sigma.trace()) * r;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "fidelity eigenvalues");
    const double f = std::pow(es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum(), 2);
    require(f < 1.0 + 1e-9, ErrorCode::NotPositive, "fidelity exceeds 1");
    return std::clamp(f, 0.0, 1.0);
}

EigenbasisOperators eigenbasis_operators(const SpectrumResult& spec)
{
    const Grid& g = spec.grid;
    const Eigen::MatrixXcd v = spec.vectors.cast<cplx>();
    const Eigen::VectorXcd xs = g.positions().cast<cplx>();
    const double dx = g.dx();

    Eigen::MatrixXcd pv(v.rows(), v.cols());
    Eigen::MatrixXcd pxv(v.rows(), v.cols());
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        pv.col(c) = apply_momentum(g, v.col(c));
        pxv.col(c) = apply_momentum(g, xs.cwiseProduct(v.col(c)));
    }
    EigenbasisOperators ops;
    const Eigen::MatrixXcd vt = v.adjoint();
    ops.x = vt * xs.asDiagonal() * v * dx;
    ops.x2 = vt * xs.cwiseAbs2().cast<cplx>().asDiagonal() * v * dx;
    ops.p = vt * pv * dx;
    ops.xp_sym = vt * (xs.asDiagonal() * pv + pxv) * dx;
    ops.h0 = spec.energies.cast<cplx>().asDiagonal();
    return ops;
}

double expect_position(const GridState& s)
{
    return (s.psi.cwiseAbs2().array() * s.grid.positions().array()).sum() * s.grid.dx();
}

double expect_position_squared(const GridState& s)
{
    return (s.psi.cwiseAbs2().array() * s.grid.positions().array().square()).sum() * s.grid.dx();
}

double expect_momentum(const GridState& s)
{
    return s.psi.dot(apply_momentum(s.grid, s.psi)).real() * s.grid.dx();
}

double expect_momentum_squared(const GridState& s)
{
    // <P^2> with the kinetic symbol, so that <P^2>/2m is the kinetic energy.
    return 2.0 * s.psi.dot(apply_kinetic(s.grid, s.psi, 1.0)).real() * s.grid.dx();
}

double expect_energy(const GridState& s, const PotentialParams& p)
{
    const double kin = s.psi.dot(apply_kinetic(s.grid, s.psi, p.mass)).real();
    const double pot = (s.psi.cwiseAbs2().array() * potential_on_grid(s.grid, p).array()).sum();
    return (kin + pot) * s.grid.dx();
}

double expect_region(const GridState& s, double a, double b)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < s.grid.size(); ++j) {
        const double x = s.grid.x(j);
        if (x >= a && x < b) acc += std::norm(s.psi(static_cast<Eigen::Index>(j)));
    }
    return acc * s.grid.dx();
}

double expectation(const Eigen::MatrixXcd& op, const DensityMatrix& rho, double tol)
{
    require(op.rows() == rho.rho.rows() && op.cols() == rho.rho.cols(), ErrorCode::InvalidArgument,
            "operator and density matrix dimensions differ");
    const cplx v = (rho.rho * op).trace();
    require(std::abs(v.imag()) <= tol * std::max(1.0, std::abs(v.real())), ErrorCode::InvalidArgument,
            "expectation value has an imaginary part; operator not Hermitian?");
    return v.real();
}

Eigen::VectorXcd to_eigenbasis(const SpectrumResult& spec, const GridState& s)
{
    require(s.grid == spec.grid, ErrorCode::InvalidArgument, "state and spectrum grids differ");
    return spec.vectors.transpose().cast<cplx>() * s.psi * spec.grid.dx();
}

GridState from_eigenbasis(const SpectrumResult& spec, const Eigen::VectorXcd& coeffs)
{
    require(static_cast<std::size_t>(coeffs.size()) == spec.size(), ErrorCode::InvalidArgument,
            "coefficient count differs from the truncation");
    return {spec.grid, spec.vectors.cast<cplx>() * coeffs};
}

DensityMatrix pure_density(const Eigen::VectorXcd& coeffs)
{
    return {coeffs * coeffs.adjoint()};
}

Eigen::MatrixXcd density_on_grid(const SpectrumResult& spec, const DensityMatrix& rho)
{
    require(rho.size() == spec.size(), ErrorCode::InvalidArgument, "density matrix and spectrum sizes differ");
    const Eigen::MatrixXcd v = spec.vectors.cast<cplx>();
    return v * rho.rho * v.transpose();
}

SplitOperatorPropagator::SplitOperatorPropagator(const Grid& g, const PotentialParams& p, double dt)
    : grid_(g)
    , dt_(dt)
    , half_kick_(static_cast<Eigen::Index>(g.size()))
    , kinetic_phase_(static_cast<Eigen::Index>(g.size()))
    , scratch_(static_cast<Eigen::Index>(g.size()))
{
    require(dt > 0.0, ErrorCode::InvalidArgument, "dt must be positive");
    const Eigen::VectorXd v = potential_on_grid(g, p);
    const Eigen::VectorXd t = kinetic_symbol(g, p.mass);
    const double n = static_cast<double>(g.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        half_kick_(j) = std::exp(cplx(0.0, -0.5 * v(j) * dt / units::hbar));
        // the 1/N of the inverse FFT is folded in here
        kinetic_phase_(j) = std::exp(cplx(0.0, -t(j) * dt / units::hbar)) / n;
    }
}

void SplitOperatorPropagator::step(GridState& s)
{
    require(s.grid == grid_, ErrorCode::InvalidArgument, "state grid differs from propagator grid");
    s.psi.array() *= half_kick_.array();
    grid_.fft().forward(view(s.psi), view(scratch_));
    scratch_.array() *= kinetic_phase_.array();
    grid_.fft().backward(view(scratch_), view(s.psi));
    s.psi.array() *= half_kick_.array();
}

ClosedRun propagate_closed(const GridState& psi0, const PotentialParams& p, double dt, double t_final,
                           std::size_t record_every, const std::vector<double>& snapshot_times)
{
    require(t_final >= 0.0, ErrorCode::InvalidArgument, "t_final must be non-negative");
    record_every = std::max<std::size_t>(record_every, 1);
    SplitOperatorPropagator prop(psi0.grid, p, dt);
    const auto n_steps = static_cast<std::size_t>(std::llround(t_final / dt));

    std::vector<std::size_t> snap_steps;
    for (double ts : snapshot_times) {
        require(ts >= 0.0 && ts <= t_final + 0.5 * dt, ErrorCode::InvalidArgument, "snapshot time outside the run");
        snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / dt)));
    }

    ClosedRun run;
    GridState s = psi0;
    auto record = [&](std::size_t step) {
        const double t = static_cast<double>(step) * dt;
        if (step % record_every == 0 || step == n_steps)
            run.samples.push_back({t, expect_position(s), expect_momentum(s), expect_momentum_squared(s),
                                   expect_energy(s, p), s.norm()});
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (snap_steps[k] == step) {
                run.snapshots.push_back(s);
                run.snapshot_times.push_back(t);
            }
        }
    };
    record(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        prop.step(s);
        record(step);
    }
    return run;
}

} // namespace dwell
