#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dwell/coefficients.hpp"
#include "dwell/hilbert.hpp"
#include "dwell/potential.hpp"

namespace dwell {

/// Default eigenbasis truncation: 64 for the shallow preset, 96 otherwise.
std::size_t default_truncation(const PotentialParams& p);

/// Grid, truncated spectrum and eigenbasis operators of one potential.
struct QuantumSystem {
    PotentialParams params;
    SpectrumResult spectrum;
    EigenbasisOperators ops;

    const Grid& grid() const { return spectrum.grid; }
};

/// Truncation is max(base_m, smallest M meeting the Gibbs tail criterion at
/// max_temperature). base_m = 0 selects default_truncation.
QuantumSystem build_quantum_system(const PotentialParams& p, double max_temperature, std::size_t base_m = 0);
QuantumSystem build_quantum_system(const PotentialParams& p, const Grid& g, double max_temperature,
                                   std::size_t base_m = 0);

/// Effective frequency for the harmonic-approximation model from the well
/// curvature in the chosen convention.
double effective_frequency(const PotentialParams& p, OmegaEConvention conv = OmegaEConvention::curvature);

/// Coefficients for a model on a given potential (w_e from the well geometry).
ModelCoefficients coefficients_for(ModelKind kind, const PotentialParams& p, double gamma, double temperature,
                                   OmegaEConvention conv = OmegaEConvention::curvature, int p_sign = 1);

/// H0 + c_xp (XP + PX) as a dense grid matrix, with XP + PX assembled from the
/// diagonal X and the spectral P so that it is Hermitian.
Eigen::MatrixXcd build_effective_hamiltonian(const Eigen::MatrixXd& h0, const Grid& g, const ModelCoefficients& c);

/// Lindblad generator in a truncated eigenbasis,
///   d rho/dt = -(i/hbar)[H, rho] + (1/hbar)(L rho L^+ - {L^+ L, rho}/2),
/// H = diag(E) + c_xp (XP+PX), L = c_x X + i c_p P. L^+ L is the product of the
/// truncated matrices, so the truncated generator is itself of Lindblad form.
class LindbladPropagator {
public:
    LindbladPropagator(const QuantumSystem& sys, const ModelCoefficients& c);

    Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const;
    /// One classical RK4 step.
    void step(Eigen::MatrixXcd& rho, double dt) const;
    /// Power-iteration estimate of the generator's spectral radius.
    double spectral_radius_estimate(int iterations = 60) const;
    /// Largest dt inside the RK4 stability region with a safety margin.
    double stable_dt() const;

    const Eigen::MatrixXcd& hamiltonian() const { return h_; }
    const Eigen::MatrixXcd& lindblad_operator() const { return l_; }

private:
    Eigen::MatrixXcd h_;
    Eigen::MatrixXcd l_;
    Eigen::MatrixXcd k_; // -iH/hbar - L^+L/2hbar
};

struct LindbladConfig {
    double t_final = 10.0;
    /// 0 selects the stability-limited step.
    double dt = 0.0;
    double record_interval = 0.1;
    double trace_tolerance = 1e-6;
    double leak_tolerance = 1e-4;
    bool record_fidelity = true;
};

struct LindbladSample {
    double t;
    double x_expect;
    double var_x;
    double p_expect;
    double fidelity_gibbs;
    double trace_residual;
    double min_eig;
    double purity;
};

struct LindbladRun {
    std::vector<LindbladSample> samples;
    DensityMatrix final_state;
    double dt = 0.0;
    /// Frobenius norm of d rho/dt at the end of the run.
    double final_rate = 0.0;
    double temperature_condition_ratio = 0.0;
};

/// RK4 integration from rho0 (no renormalization). Throws TruncationLeak when
/// the top level's population exceeds cfg.leak_tolerance and ConvergenceFailure
/// when the trace drifts beyond cfg.trace_tolerance. `gibbs` may be null.
LindbladRun propagate_lindblad(const DensityMatrix& rho0, const QuantumSystem& sys, const ModelCoefficients& c,
                               const LindbladConfig& cfg, const DensityMatrix* gibbs = nullptr);

/// Coherent state of frequency omega_loc at x0 projected onto the truncated
/// basis and renormalized.
DensityMatrix projected_coherent_state(const QuantumSystem& sys, double x0, double omega_loc = 1.0);

struct SSEConfig {
    double dt = 1e-3;
    double t_final = 10.0;
    std::uint64_t seed = 0;
    std::size_t renormalize_every = 1;
    std::size_t record_stride = 100;
    /// Number of independent Gaussian sub-increments summed per step. A run
    /// with (dt, 2) consumes the same numbers as a run with (dt/2, 1).
    unsigned noise_refinement = 1;
    /// Stop once a recorded <X> reaches x_star.
    bool stop_at_crossing = false;
    double x_star = 0.0;
    std::vector<double> snapshot_times;

    void validate() const;
};

struct SSESample {
    double t;
    double x_expect;
    double p_expect;
    double x2_expect;
    /// |norm - 1| before the most recent renormalization.
    double norm_residual;
};

struct SSETrajectory {
    std::vector<SSESample> samples;
    std::vector<GridState> snapshots;
    std::vector<double> snapshot_times;
    GridState final_state;
};

/// Nonlinear norm-preserving SSE on the grid,
///   d psi = (1/hbar)(-iH - L^+L/2 + <L^+>L - |<L>|^2/2) psi dt
///         + (L - <L>) psi (dxi_R + i dxi_I)/sqrt(2 hbar).
/// The linear part exp(dt(-iH0 - L^+L/2)/hbar) is applied by a Strang split
/// (exact in X and in Fourier space); the XP+PX term and the nonlinear and
/// noise terms are added by an Euler-Maruyama step.
class SSEPropagator {
public:
    SSEPropagator(const Grid& g, const PotentialParams& p, const ModelCoefficients& c, double dt);

    /// Advances one step with complex increment dz = dxi_R + i dxi_I and
    /// returns the norm before renormalization. Throws BlowUp when that norm
    /// leaves [0.5, 2].
    double step(GridState& s, cplx dz, bool renormalize = true);
    double dt() const { return dt_; }

private:
    Grid grid_;
    ModelCoefficients c_;
    double dt_;
    Eigen::VectorXcd x_half_;
    Eigen::VectorXcd k_full_;
    Eigen::VectorXcd xs_;
    Eigen::VectorXd psym_;
    Eigen::VectorXcd buf_, pp_, xp_, pxp_;
};

/// One trajectory; the noise stream is substream(cfg.seed, index, 1).
SSETrajectory propagate_sse(const GridState& psi0, const PotentialParams& p, const ModelCoefficients& c,
                            const SSEConfig& cfg, std::uint64_t trajectory_index = 0);

struct SSEEnsembleSummary {
    std::vector<double> times;
    std::vector<double> mean_x, sem_x;
    std::vector<double> mean_p, sem_p;
    std::vector<double> mean_x2, sem_x2;
    std::size_t n = 0;
};

/// Runs n_trajectories (stop_at_crossing is ignored) and reduces the recorded
/// expectations in trajectory-index order.
SSEEnsembleSummary run_sse_ensemble(const GridState& psi0, const PotentialParams& p, const ModelCoefficients& c,
                                    const SSEConfig& cfg, std::size_t n_trajectories, unsigned threads = 1);

} // namespace dwell
