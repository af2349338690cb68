#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dwell/fft.hpp"
#include "dwell/potential.hpp"

namespace dwell {

using cplx = std::complex<double>;

/// Uniform periodic position grid x_j = -L + j dx, dx = 2L/N, N a power of two.
class Grid {
public:
    Grid(double half_width, std::size_t n_points);

    double half_width() const { return half_width_; }
    std::size_t size() const { return n_; }
    double dx() const { return 2.0 * half_width_ / static_cast<double>(n_); }
    double x(std::size_t j) const { return -half_width_ + static_cast<double>(j) * dx(); }

    Eigen::VectorXd positions() const;
    /// FFT-ordered wavenumbers 2 pi m / (N dx); the Nyquist entry is -pi/dx.
    Eigen::VectorXd wavenumbers() const;
    const Fft& fft() const { return *fft_; }

    /// Index of the parity partner of x_j on the periodic grid.
    std::size_t mirror(std::size_t j) const { return (n_ - j) % n_; }

    bool operator==(const Grid& o) const { return half_width_ == o.half_width_ && n_ == o.n_; }

private:
    double half_width_;
    std::size_t n_;
    std::shared_ptr<const Fft> fft_;
};

/// Default grid for a preset: L = 10 with N = 256 (shallow) or 512 (deep).
Grid default_grid(const PotentialParams& p);

/// Wavefunction amplitudes with sum |psi_j|^2 dx = 1.
struct GridState {
    Grid grid;
    Eigen::VectorXcd psi;

    double norm() const;
    void normalize();
};

// Spectral operators on the grid. P drops the Nyquist component so it is
// Hermitian; the kinetic energy keeps it.
Eigen::VectorXcd apply_momentum(const Grid& g, const Eigen::VectorXcd& psi);
Eigen::VectorXcd apply_kinetic(const Grid& g, const Eigen::VectorXcd& psi, double mass);

Eigen::MatrixXd kinetic_matrix(const Grid& g, double mass);
Eigen::MatrixXcd momentum_matrix(const Grid& g);
Eigen::VectorXd potential_on_grid(const Grid& g, const PotentialParams& p);

/// Dense H = P^2/2m + V(X) on the grid.
Eigen::MatrixXd build_hamiltonian(const Grid& g, const PotentialParams& p);

struct SpectrumResult {
    Grid grid;
    Eigen::VectorXd energies;     // lowest M, ascending
    Eigen::MatrixXd vectors;      // N x M, columns normalized with the dx weight
    Eigen::VectorXd all_energies; // full grid spectrum, for truncation choices

    std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

/// Lowest M eigenpairs of a dense grid Hamiltonian. Eigenvector signs are
/// fixed so the first non-negligible amplitude is positive.
SpectrumResult eigensolve(const Eigen::MatrixXd& hamiltonian, const Grid& g, std::size_t m);

/// Normalized Gaussian exp(-m w (x - x0)^2 / 2 hbar + i p0 x / hbar).
GridState coherent_state(const Grid& g, double x0, double p0, double omega_loc, double mass = 1.0);

/// pi hbar / (E1 - E0).
double tunnel_time(double e0, double e1);

struct DensityMatrix {
    Eigen::MatrixXcd rho;

    std::size_t size() const { return static_cast<std::size_t>(rho.rows()); }
    double trace() const { return rho.trace().real(); }
    double purity() const;
    double hermiticity_residual() const;
    double min_eigenvalue() const;
    /// Throws NotPositive when Hermiticity, unit trace, or positivity fail
    /// beyond the given tolerances.
    void validate(double psd_tol = 1e-8, double trace_tol = 1e-8) const;
};

/// Thermal state exp(-H/k_B T)/Z in the eigenbasis of `spec`; T = 0 gives the
/// ground-state projector. Throws TruncationTooSmall when
/// exp(-(E_{M-1} - E_0)/k_B T) >= 1e-12.
DensityMatrix gibbs_density_operator(const SpectrumResult& spec, double temperature);

/// Smallest M >= base_m (capped at the grid size) meeting the Gibbs tail
/// criterion at temperature T.
std::size_t truncation_for_temperature(const SpectrumResult& spec, double temperature,
                                       std::size_t base_m);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Matrix elements of grid operators in a truncated eigenbasis.
struct EigenbasisOperators {
    Eigen::MatrixXcd x;
    Eigen::MatrixXcd x2;
    Eigen::MatrixXcd p;
    Eigen::MatrixXcd h0;  // diag(E_n)
    Eigen::MatrixXcd xp_sym; // XP + PX evaluated on the grid, then projected
};

EigenbasisOperators eigenbasis_operators(const SpectrumResult& spec);

double expect_position(const GridState& s);
double expect_position_squared(const GridState& s);
double expect_momentum(const GridState& s);
double expect_momentum_squared(const GridState& s);
double expect_energy(const GridState& s, const PotentialParams& p);
/// Probability of finding the particle in [a, b).
double expect_region(const GridState& s, double a, double b);

/// Re Tr(rho A); throws InvalidArgument if the imaginary residue exceeds tol.
double expectation(const Eigen::MatrixXcd& op, const DensityMatrix& rho, double tol = 1e-10);

Eigen::VectorXcd to_eigenbasis(const SpectrumResult& spec, const GridState& s);
GridState from_eigenbasis(const SpectrumResult& spec, const Eigen::VectorXcd& coeffs);
DensityMatrix pure_density(const Eigen::VectorXcd& coeffs);
/// rho(x_i, x_j) = sum_mn v_m(x_i) rho_mn v_n(x_j).
Eigen::MatrixXcd density_on_grid(const SpectrumResult& spec, const DensityMatrix& rho);

/// Strang splitting: half potential kick, full kinetic step in Fourier space,
/// half kick. Unitary for any dt. Holds scratch space, so one instance per
/// thread.
class SplitOperatorPropagator {
public:
    SplitOperatorPropagator(const Grid& g, const PotentialParams& p, double dt);

    void step(GridState& s);
    double dt() const { return dt_; }

private:
    Grid grid_;
    double dt_;
    Eigen::VectorXcd half_kick_;
    Eigen::VectorXcd kinetic_phase_;
    Eigen::VectorXcd scratch_;
};

struct ClosedSample {
    double t;
    double x_expect;
    double p_expect;
    double p2_expect;
    double energy;
    double norm;
};

struct ClosedRun {
    std::vector<ClosedSample> samples;
    std::vector<GridState> snapshots;
    std::vector<double> snapshot_times;
};

/// Closed (gamma = 0) evolution from psi0 recording every `record_every`
/// steps, plus state snapshots at the requested times (rounded to steps).
ClosedRun propagate_closed(const GridState& psi0, const PotentialParams& p, double dt,
                           double t_final, std::size_t record_every,
                           const std::vector<double>& snapshot_times = {});

} // namespace dwell
