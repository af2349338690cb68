#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dwell/coefficients.hpp"

namespace dwell {

/// G in W(z) = sqrt(det G)/(pi hbar) exp(-z.Gz/hbar), z = (x, p).
using CovarianceMatrix = Eigen::Matrix2d;

/// Weyl-symbol data of a quadratic Hamiltonian and one linear Lindblad operator.
struct QuadraticModel {
    Eigen::Matrix2d hessian;   // H''
    Eigen::Vector2cd grad_l;   // gradient of the Lindblad symbol, including the 1/sqrt(hbar) of the dissipator
};

Eigen::Matrix2d symplectic_form();

/// H = P^2/2m + m w^2 X^2/2 + c_xp (XP + PX) with L = c_x X + i c_p P.
QuadraticModel quadratic_model(const ModelCoefficients& c, double omega, double mass = 1.0);

/// dG/dt = (H'' + Im B) Om G - G Om (H'' - Im B) + 2 G Om Re B Om G,  B = grad L grad conj(L)^T.
/// Throws InvalidArgument when G is not symmetric; the result is checked to be
/// symmetric to 1e-12 relative.
Eigen::Matrix2d covariance_flow(const CovarianceMatrix& g, const QuadraticModel& q);

/// tanh(hbar w / 2 k_B T) diag(m w, 1/w).
CovarianceMatrix thermal_covariance(double temperature, double omega, double mass = 1.0);

/// Closed-form fixed point of the minimally invasive model on the harmonic
/// oscillator: f(T) M with
///   M = [[hbar m w^2/8kT + 2 m kT/hbar, hbar g/4kT],
///        [hbar g/4kT, (hbar^2 (4g^2 + w^2) + 16 (kT)^2)/(8 hbar m w^2 kT)]]
///   f = 64 hbar^2 w^2 (kT)^2 / (hbar^4 w^4 + 32 hbar^2 (kT)^2 (2g^2 + w^2) + 256 (kT)^4)
CovarianceMatrix stationary_covariance_minimal(double temperature, double gamma, double omega,
                                               double mass = 1.0);

struct RiccatiOptions {
    double tolerance = 1e-14;
    int max_iterations = 200;
};

/// Nontrivial root of covariance_flow = 0 by damped Newton with the exact
/// Jacobian, started from `guess`. Throws NoConvergence.
CovarianceMatrix riccati_root(const QuadraticModel& q, const CovarianceMatrix& guess,
                              RiccatiOptions opt = {});

/// Fixed point obtained from the linear equation satisfied by G^-1 under the
/// same flow; used to seed Newton when G_T is too far from the root.
CovarianceMatrix inverse_flow_fixed_point(const QuadraticModel& q);

struct MinimalStationaryCheck {
    CovarianceMatrix closed_form;
    CovarianceMatrix numeric;
    double max_abs_difference;
    double closed_form_residual;
};

/// Closed form against the Newton root started from G_T (or, if that fails,
/// from inverse_flow_fixed_point).
MinimalStationaryCheck check_minimal_stationary(double temperature, double gamma, double omega,
                                                double mass = 1.0);

struct ConstraintBranch {
    double l_p;
    double h_xp;
};

struct ConstraintSolutions {
    ConstraintBranch former;
    ConstraintBranch latter;
    /// 0 for former, 1 for latter: the branch whose l_p and h_xp vanish as
    /// T grows, decided numerically.
    int physical;

    const ConstraintBranch& physical_branch() const { return physical == 0 ? former : latter; }
};

/// The two closed-form (l_p, h_xp) solution sets of the thermal-state
/// constraint, with L = c_x X + i (sqrt(g hbar/4 m kT) + l_p) P and
/// H = H_QHO + (g + h_xp)/2 (XP + PX).
ConstraintSolutions solve_constraints(double temperature, double gamma, double omega, double mass = 1.0);

/// Sign of the iP coefficient of the harmonic-approximation model that makes
/// G_T stationary under covariance_flow (the one with the smaller residual).
int stationary_p_sign(double temperature, double gamma, double omega, double mass = 1.0);

struct LatticeRow {
    double temperature;
    double gamma;
    double omega;
    const char* branch;
    double l_p;
    double h_xp;
    double residual_gt;  // harmonic-approximation flow at G_T
    double residual_gf;  // minimally invasive flow at G_F
};

/// Both branches at every (T, gamma, w) combination.
std::vector<LatticeRow> gaussian_lattice_report(const std::vector<double>& temperatures,
                                                const std::vector<double>& gammas,
                                                const std::vector<double>& omegas, double mass = 1.0);

/// Geometric lattice of n points from lo to hi.
std::vector<double> geometric_points(double lo, double hi, std::size_t n);

} // namespace dwell
