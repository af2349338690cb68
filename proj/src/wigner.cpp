#include "dwell/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "dwell/error.hpp"
#include "dwell/units.hpp"

namespace dwell {

namespace {

WignerField empty_field(const Grid& g)
{
    WignerField f;
    f.x = g.positions();
    f.p = wigner_momenta(g);
    f.dx = g.dx();
    f.dp = std::numbers::pi * units::hbar / (static_cast<double>(g.size()) * g.dx());
    f.w.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    return f;
}

// corr(a, b) = rho(x_b, x_a) with a = i + s, b = i - s; offsets that leave
// the box are dropped instead of wrapped, otherwise a checkerboard copy of W
// appears half a box away
template <typename Corr>
WignerField transform(const Grid& g, Corr corr)
{
    const auto n = g.size();
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    WignerField f = empty_field(g);
    std::vector<cplx> in(n), out(n);
    const double scale = g.dx() / (std::numbers::pi * units::hbar);
    double worst_imag = 0.0, largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        for (std::size_t j = 0; j < n; ++j) {
            const auto sj = static_cast<std::ptrdiff_t>(j);
            const std::ptrdiff_t off = sj < half ? sj : sj - static_cast<std::ptrdiff_t>(n);
            const std::ptrdiff_t a = ii + off, b = ii - off;
            const bool inside = sj != half && a >= 0 && b >= 0 && a < static_cast<std::ptrdiff_t>(n) &&
                                b < static_cast<std::ptrdiff_t>(n);
            in[j] = inside ? corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) : cplx{};
        }
        g.fft().backward(in, out);
        // out[m] holds p = m dp (FFT order); store ascending
        for (std::ptrdiff_t m = -half; m < half; ++m) {
            const cplx v = scale * out[static_cast<std::size_t>((m + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n))];
            f.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m + half)) = v.real();
            worst_imag = std::max(worst_imag, std::abs(v.imag()));
            largest = std::max(largest, std::abs(v.real()));
        }
    }
    if (worst_imag > 1e-9 * std::max(1.0, largest))
        throw Error(ErrorCode::ConvergenceFailure, "Wigner transform has an imaginary part " + std::to_string(worst_imag));
    return f;
}

} // namespace

double WignerField::purity() const
{
    return 2.0 * std::numbers::pi * units::hbar * w.squaredNorm() * dx * dp;
}

Eigen::VectorXd wigner_momenta(const Grid& g)
{
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    const double dp = std::numbers::pi * units::hbar / (static_cast<double>(n) * g.dx());
    Eigen::VectorXd p(n);
    for (std::ptrdiff_t m = 0; m < n; ++m) p(m) = static_cast<double>(m - n / 2) * dp;
    return p;
}

WignerField wigner_from_state(const GridState& s)
{
    const auto n = s.grid.size();
    const auto& psi = s.psi;
    const double edge = std::max(std::abs(psi(0)), std::abs(psi(static_cast<Eigen::Index>(n - 1))));
    require(edge <= 1e-6, ErrorCode::BoundaryLeak, "state amplitude " + std::to_string(edge) + " at the box edge");
    return transform(s.grid, [&](Eigen::Index a, Eigen::Index b) { return std::conj(psi(a)) * psi(b); });
}

WignerField wigner_from_grid_density(const Grid& g, const Eigen::MatrixXcd& rho)
{
    const auto n = g.size();
    require(static_cast<std::size_t>(rho.rows()) == n && rho.rows() == rho.cols(), ErrorCode::InvalidArgument,
            "grid density matrix has the wrong shape");
    const auto last = static_cast<Eigen::Index>(n - 1);
    const double edge = std::max(std::abs(rho(0, 0)), std::abs(rho(last, last)));
    require(edge <= 1e-12, ErrorCode::BoundaryLeak, "density " + std::to_string(edge) + " at the box edge");
    return transform(g, [&](Eigen::Index a, Eigen::Index b) { return rho(b, a); });
}

WignerField wigner_from_density(const SpectrumResult& spec, const DensityMatrix& rho)
{
    return wigner_from_grid_density(spec.grid, density_on_grid(spec, rho));
}

double negativity(const WignerField& w)
{
    return 0.5 * (w.w.cwiseAbs() - w.w).sum() * w.dx * w.dp;
}

WignerField thermal_wigner_harmonic(const Grid& g, double temperature, double omega, double mass)
{
    require(temperature > 0.0 && omega > 0.0 && mass > 0.0, ErrorCode::InvalidArgument,
            "thermal Wigner function needs positive T, w, m");
    const double hb = units::hbar;
    const double t = std::tanh(hb * omega / (2.0 * units::k_B * temperature));
    WignerField f = empty_field(g);
    for (Eigen::Index i = 0; i < f.x.size(); ++i) {
        for (Eigen::Index j = 0; j < f.p.size(); ++j) {
            const double q = f.p(j) * f.p(j) / mass + mass * omega * omega * f.x(i) * f.x(i);
            f.w(i, j) = t / (hb * std::numbers::pi) * std::exp(-t * q / (hb * omega));
        }
    }
    return f;
}

WignerField gaussian_wigner(const Grid& g, const Eigen::Matrix2d& cov)
{
    const double det = cov.determinant();
    require(det > 0.0 && cov(0, 0) > 0.0, ErrorCode::NotPositive, "covariance matrix is not positive definite");
    const double hb = units::hbar;
    WignerField f = empty_field(g);
    for (Eigen::Index i = 0; i < f.x.size(); ++i) {
        for (Eigen::Index j = 0; j < f.p.size(); ++j) {
            const Eigen::Vector2d z(f.x(i), f.p(j));
            f.w(i, j) = std::sqrt(det) / (std::numbers::pi * hb) * std::exp(-z.dot(cov * z) / hb);
        }
    }
    return f;
}

std::vector<NegativitySample> closed_negativity_series(const GridState& psi0, const PotentialParams& p, double dt,
                                                       double t_final, std::size_t record_every)
{
    require(t_final >= 0.0, ErrorCode::InvalidArgument, "t_final must be non-negative");
    record_every = std::max<std::size_t>(record_every, 1);
    SplitOperatorPropagator prop(psi0.grid, p, dt);
    const auto n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
    std::vector<NegativitySample> out;
    GridState s = psi0;
    for (std::size_t step = 0;; ++step) {
        if (step % record_every == 0 || step == n_steps)
            out.push_back({static_cast<double>(step) * dt, expect_position(s), negativity(wigner_from_state(s))});
        if (step == n_steps) break;
        prop.step(s);
    }
    return out;
}

} // namespace dwell
