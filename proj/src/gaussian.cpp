#include "dwell/gaussian.hpp"

#include <cmath>

#include "dwell/error.hpp"
#include "dwell/units.hpp"

namespace dwell {

namespace {

struct FlowParts {
    Eigen::Matrix2d re;
    Eigen::Matrix2d im;
};

FlowParts split_b(const QuadraticModel& q)
{
    const Eigen::Matrix2cd b = q.grad_l * q.grad_l.conjugate().transpose();
    return {b.real(), b.imag()};
}

Eigen::Vector3d pack(const Eigen::Matrix2d& m) { return {m(0, 0), m(0, 1), m(1, 1)}; }

Eigen::Matrix2d unpack(const Eigen::Vector3d& v)
{
    Eigen::Matrix2d m;
    m << v(0), v(1), v(1), v(2);
    return m;
}

double csch(double x) { return 1.0 / std::sinh(x); }

ConstraintSolutions constraint_branches(double temperature, double gamma, double omega, double mass)
{
    const double hb = units::hbar;
    const double kt = units::k_B * temperature;
    const double y = hb * omega / kt;
    const double lp_base = -0.5 * std::sqrt(hb * gamma / (mass * kt));
    const double lp_scale = 2.0 * std::sqrt(kt * gamma / (hb * mass * omega * omega));

    ConstraintSolutions s{};
    s.former.l_p = lp_base - lp_scale / std::tanh(0.25 * y);
    s.former.h_xp = -gamma * (hb * omega + 4.0 * kt * csch(0.5 * y) + 8.0 * kt * csch(y)) / (hb * omega);
    s.latter.l_p = lp_base - lp_scale * std::tanh(0.25 * y);
    s.latter.h_xp = -gamma * (hb * omega - 4.0 * kt * csch(0.5 * y) + 8.0 * kt * csch(y)) / (hb * omega);
    return s;
}

// The printed branch solutions use the opposite orientation of Im(B) to
// covariance_flow, which amounts to flipping the sign of the iP coefficient.
QuadraticModel branch_model(const ConstraintBranch& b, double temperature, double gamma, double omega,
                            double mass)
{
    const double kt = units::k_B * temperature;
    ModelCoefficients c;
    c.c_x = std::sqrt(4.0 * gamma * mass * kt / units::hbar);
    c.c_p = -(std::sqrt(gamma * units::hbar / (4.0 * mass * kt)) + b.l_p);
    c.c_xp = 0.5 * (gamma + b.h_xp);
    return quadratic_model(c, omega, mass);
}

} // namespace

Eigen::Matrix2d symplectic_form()
{
    Eigen::Matrix2d om;
    om << 0.0, 1.0, -1.0, 0.0;
    return om;
}

QuadraticModel quadratic_model(const ModelCoefficients& c, double omega, double mass)
{
    require(mass > 0.0, ErrorCode::InvalidArgument, "mass must be positive");
    QuadraticModel q;
    q.hessian << mass * omega * omega, 2.0 * c.c_xp, 2.0 * c.c_xp, 1.0 / mass;
    const double s = 1.0 / std::sqrt(units::hbar);
    q.grad_l << std::complex<double>(c.c_x * s, 0.0), std::complex<double>(0.0, c.c_p * s);
    return q;
}

Eigen::Matrix2d covariance_flow(const CovarianceMatrix& g, const QuadraticModel& q)
{
    require(std::abs(g(0, 1) - g(1, 0)) <= 1e-14 * std::max(1.0, g.norm()), ErrorCode::InvalidArgument,
            "covariance matrix must be symmetric");
    const Eigen::Matrix2d om = symplectic_form();
    const FlowParts b = split_b(q);
    const Eigen::Matrix2d d = (q.hessian + b.im) * om * g - g * om * (q.hessian - b.im) + 2.0 * g * om * b.re * om * g;
    if (std::abs(d(0, 1) - d(1, 0)) > 1e-12 * std::max(1.0, d.norm()))
        throw Error(ErrorCode::ConvergenceFailure, "covariance flow lost symmetry");
    return d;
}

CovarianceMatrix thermal_covariance(double temperature, double omega, double mass)
{
    require(temperature > 0.0 && omega > 0.0 && mass > 0.0, ErrorCode::InvalidArgument,
            "thermal covariance needs positive T, w, m");
    const double t = std::tanh(units::hbar * omega / (2.0 * units::k_B * temperature));
    CovarianceMatrix g;
    g << t * mass * omega, 0.0, 0.0, t / omega;
    return g;
}

CovarianceMatrix stationary_covariance_minimal(double temperature, double gamma, double omega, double mass)
{
    require(temperature > 0.0 && omega > 0.0 && mass > 0.0 && gamma >= 0.0, ErrorCode::InvalidArgument,
            "stationary covariance needs T, w, m > 0 and gamma >= 0");
    const double hb = units::hbar;
    const double kt = units::k_B * temperature;
    const double w2 = omega * omega;
    CovarianceMatrix m;
    m(0, 0) = hb * mass * w2 / (8.0 * kt) + 2.0 * mass * kt / hb;
    m(0, 1) = m(1, 0) = hb * gamma / (4.0 * kt);
    m(1, 1) = (hb * hb * (4.0 * gamma * gamma + w2) + 16.0 * kt * kt) / (8.0 * hb * mass * w2 * kt);
    const double f = 64.0 * hb * hb * w2 * kt * kt /
                     (std::pow(hb * omega, 4) + 32.0 * hb * hb * kt * kt * (2.0 * gamma * gamma + w2) + 256.0 * std::pow(kt, 4));
    return f * m;
}

CovarianceMatrix riccati_root(const QuadraticModel& q, const CovarianceMatrix& guess, RiccatiOptions opt)
{
    const Eigen::Matrix2d om = symplectic_form();
    const FlowParts b = split_b(q);
    const Eigen::Matrix2d left = q.hessian + b.im;
    const Eigen::Matrix2d right = q.hessian - b.im;
    const Eigen::Matrix2d orq = om * b.re * om;
    auto flow = [&](const Eigen::Matrix2d& g) { return Eigen::Matrix2d(left * om * g - g * om * right + 2.0 * g * orq * g); };

    Eigen::Matrix2d g = guess;
    double res = pack(flow(g)).norm();
    const Eigen::Matrix2d basis[3] = {unpack({1, 0, 0}), unpack({0, 1, 0}), unpack({0, 0, 1})};
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double scale = std::max(1.0, g.squaredNorm());
        if (res <= opt.tolerance * scale) return g;
        Eigen::Matrix3d jac;
        for (int k = 0; k < 3; ++k) {
            const Eigen::Matrix2d& e = basis[k];
            jac.col(k) = pack(left * om * e - e * om * right + 2.0 * e * orq * g + 2.0 * g * orq * e);
        }
        const Eigen::Vector3d step = jac.fullPivLu().solve(-pack(flow(g)));
        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            const Eigen::Matrix2d trial = g + lambda * unpack(step);
            const double r = pack(flow(trial)).norm();
            if (std::isfinite(r) && r < res) {
                g = trial;
                res = r;
                improved = true;
                break;
            }
        }
        if (!improved) {
            if (res <= 1e-9 * scale) return g;
            break;
        }
    }
    const double scale = std::max(1.0, g.squaredNorm());
    require(res <= std::max(opt.tolerance, 1e-9) * scale, ErrorCode::NoConvergence,
            "Riccati Newton iteration did not converge (residual " + std::to_string(res) + ")");
    return g;
}

CovarianceMatrix inverse_flow_fixed_point(const QuadraticModel& q)
{
    // S = G^-1 obeys the linear equation S' = -S (H'' + Im B) Om + Om (H'' - Im B) S - 2 Om Re B Om.
    const Eigen::Matrix2d om = symplectic_form();
    const FlowParts b = split_b(q);
    const Eigen::Matrix2d a = (q.hessian + b.im) * om;
    const Eigen::Matrix2d c = om * (q.hessian - b.im);
    const Eigen::Matrix2d d = -2.0 * om * b.re * om;
    Eigen::Matrix3d lin;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(k) = 1.0;
        const Eigen::Matrix2d ek = unpack(e);
        lin.col(k) = pack(-ek * a + c * ek);
    }
    const auto lu = lin.fullPivLu();
    require(lu.isInvertible(), ErrorCode::NoConvergence, "linear covariance equation is singular");
    const Eigen::Matrix2d s = unpack(lu.solve(-pack(d)));
    require(s.determinant() > 0.0 && s(0, 0) > 0.0, ErrorCode::NoConvergence, "stationary covariance is not positive");
    return s.inverse();
}

MinimalStationaryCheck check_minimal_stationary(double temperature, double gamma, double omega, double mass)
{
    const auto c = model_coefficients(ModelKind::minimally_invasive, gamma, temperature, 1.0, mass);
    const QuadraticModel q = quadratic_model(c, omega, mass);
    MinimalStationaryCheck out;
    out.closed_form = stationary_covariance_minimal(temperature, gamma, omega, mass);
    try {
        out.numeric = riccati_root(q, thermal_covariance(temperature, omega, mass));
        if (!(out.numeric.determinant() > 0.0 && out.numeric(0, 0) > 0.0)) throw Error(ErrorCode::NoConvergence, "");
    } catch (const Error&) {
        // far from G_T Newton can wander; restart from the inverse-flow solution
        out.numeric = riccati_root(q, inverse_flow_fixed_point(q));
    }
    require(out.numeric.determinant() > 0.0 && out.numeric(0, 0) > 0.0, ErrorCode::NoConvergence,
            "Riccati root is not positive definite");
    out.max_abs_difference = (out.closed_form - out.numeric).cwiseAbs().maxCoeff();
    out.closed_form_residual = covariance_flow(out.closed_form, q).norm();
    return out;
}

ConstraintSolutions solve_constraints(double temperature, double gamma, double omega, double mass)
{
    require(temperature > 0.0 && omega > 0.0 && mass > 0.0 && gamma >= 0.0, ErrorCode::InvalidArgument,
            "constraints need T, w, m > 0 and gamma >= 0");
    ConstraintSolutions s = constraint_branches(temperature, gamma, omega, mass);
    // Physical branch: the one whose coefficients shrink as T grows.
    const double t_hi = 1e4 * units::hbar * omega / units::k_B;
    const ConstraintSolutions hi = constraint_branches(std::max(t_hi, 1e4 * temperature), std::max(gamma, 1.0), omega, mass);
    const double size_f = std::abs(hi.former.l_p) + std::abs(hi.former.h_xp);
    const double size_l = std::abs(hi.latter.l_p) + std::abs(hi.latter.h_xp);
    s.physical = size_l < size_f ? 1 : 0;
    return s;
}

int stationary_p_sign(double temperature, double gamma, double omega, double mass)
{
    const CovarianceMatrix gt = thermal_covariance(temperature, omega, mass);
    double best = 0.0;
    int sign = 1;
    for (int s : {1, -1}) {
        const auto c = model_coefficients(ModelKind::harmonic_approximation, gamma, temperature, omega, mass, s);
        const double r = covariance_flow(gt, quadratic_model(c, omega, mass)).norm();
        if (s == 1 || r < best) {
            best = r;
            sign = s;
        }
    }
    return sign;
}

std::vector<LatticeRow> gaussian_lattice_report(const std::vector<double>& temperatures,
                                                const std::vector<double>& gammas,
                                                const std::vector<double>& omegas, double mass)
{
    std::vector<LatticeRow> rows;
    for (double w : omegas) {
        for (double t : temperatures) {
            for (double g : gammas) {
                const ConstraintSolutions s = solve_constraints(t, g, w, mass);
                const CovarianceMatrix gt = thermal_covariance(t, w, mass);
                const auto cm = model_coefficients(ModelKind::minimally_invasive, g, t, 1.0, mass);
                const double res_gf =
                    covariance_flow(stationary_covariance_minimal(t, g, w, mass), quadratic_model(cm, w, mass)).norm();
                const ConstraintBranch* br[2] = {&s.former, &s.latter};
                const char* names[2] = {"former", "latter"};
                for (int k = 0; k < 2; ++k) {
                    const double res_gt = covariance_flow(gt, branch_model(*br[k], t, g, w, mass)).norm();
                    rows.push_back({t, g, w, names[k], br[k]->l_p, br[k]->h_xp, res_gt, res_gf});
                }
            }
        }
    }
    return rows;
}

std::vector<double> geometric_points(double lo, double hi, std::size_t n)
{
    require(lo > 0.0 && hi >= lo && n >= 1, ErrorCode::InvalidArgument, "bad geometric lattice");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

} // namespace dwell
