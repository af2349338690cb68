#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dwell/hilbert.hpp"

namespace dwell {

/// W(x_i, p_j) on the position grid times the discrete momentum dual
/// p_j = j pi hbar / (N dx), j = -N/2 .. N/2-1 (ascending).
struct WignerField {
    Eigen::VectorXd x;
    Eigen::VectorXd p;
    Eigen::MatrixXd w; // rows: x, columns: p
    double dx = 0.0;
    double dp = 0.0;

    double integral() const { return w.sum() * dx * dp; }
    /// sum_j W(x_i, p_j) dp
    Eigen::VectorXd position_marginal() const { return w.rowwise().sum() * dp; }
    Eigen::VectorXd momentum_marginal() const { return w.colwise().sum().transpose() * dx; }
    /// 2 pi hbar sum W^2 dx dp, equal to Tr rho^2.
    double purity() const;
};

/// Momentum grid dual to g for the Wigner transform.
Eigen::VectorXd wigner_momenta(const Grid& g);

/// W(x,p) = (1/pi hbar) int psi*(x+y) psi(x-y) exp(2ipy/hbar) dy with y on
/// the grid spacing, one FFT per x. Throws BoundaryLeak if |psi| at the box
/// edge exceeds 1e-6.
WignerField wigner_from_state(const GridState& psi);

/// Same transform for rho(x, x') given on the grid (trace normalized with dx).
WignerField wigner_from_grid_density(const Grid& g, const Eigen::MatrixXcd& rho_grid);

/// Convenience: density matrix in the truncated eigenbasis of `spec`.
WignerField wigner_from_density(const SpectrumResult& spec, const DensityMatrix& rho);

/// Total negative mass int (|W| - W)/2 dx dp.
double negativity(const WignerField& w);

/// (1/hbar pi) tanh(hbar w/2kT) exp(-(1/hbar w) tanh(hbar w/2kT)(p^2/m + m w^2 x^2))
/// on the Wigner grid of g.
WignerField thermal_wigner_harmonic(const Grid& g, double temperature, double omega, double mass = 1.0);

/// sqrt(det G)/(pi hbar) exp(-z.Gz/hbar) on the Wigner grid of g.
WignerField gaussian_wigner(const Grid& g, const Eigen::Matrix2d& cov);

struct NegativitySample {
    double t;
    double x_expect;
    double negativity;
};

/// Closed split-operator run recording <X> and the Wigner negativity every
/// `record_every` steps.
std::vector<NegativitySample> closed_negativity_series(const GridState& psi0, const PotentialParams& p, double dt,
                                                       double t_final, std::size_t record_every);

} // namespace dwell
