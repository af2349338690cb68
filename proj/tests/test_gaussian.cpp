#include <cmath>

#include <doctest.h>

#include "dwell/coefficients.hpp"
#include "dwell/error.hpp"
#include "dwell/gaussian.hpp"

using namespace dwell;

namespace {

// position variance of W ~ exp(-z.Gz/hbar)
double x_variance(const CovarianceMatrix& g) { return 0.5 * g.inverse()(0, 0); }

QuadraticModel harmonic_model(double t, double gamma, double w)
{
    return quadratic_model(model_coefficients(ModelKind::harmonic_approximation, gamma, t, w), w);
}

QuadraticModel minimal_model(double t, double gamma, double w)
{
    return quadratic_model(model_coefficients(ModelKind::minimally_invasive, gamma, t), w);
}

} // namespace

TEST_CASE("Hamiltonian flow preserves det G")
{
    ModelCoefficients none;
    none.c_xp = 0.3;
    const auto q = quadratic_model(none, 1.4);
    CovarianceMatrix g;
    g << 1.3, 0.2, 0.2, 0.9;
    const Eigen::Matrix2d d = covariance_flow(g, q);
    const Eigen::Matrix2d adj = g.determinant() * g.inverse();
    CHECK(std::abs((adj * d).trace()) < 1e-14);
    CHECK(d(0, 1) == d(1, 0));

    CovarianceMatrix asym = g;
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(covariance_flow(asym, q), Error);
}

TEST_CASE("thermal covariance")
{
    const auto g = thermal_covariance(1.0, 1.0);
    CHECK(g(0, 0) == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
    CHECK(g(1, 1) == doctest::Approx(0.4621).epsilon(1e-4));
    CHECK(g(0, 1) == 0.0);
    const auto cold = thermal_covariance(1e-3, 2.0);
    CHECK(cold(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cold(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("harmonic-approximation model keeps G_T stationary")
{
    double worst = 0.0;
    for (double w : {0.5, 1.0, 2.0})
        for (double t : geometric_points(0.05, 5.0, 10))
            for (double g : geometric_points(0.05, 1.0, 10))
                worst = std::max(worst, covariance_flow(thermal_covariance(t, w), harmonic_model(t, g, w)).norm());
    CHECK(worst < 1e-10);
    CHECK(stationary_p_sign(0.3, 0.25, 1.0) == 1);
    CHECK(stationary_p_sign(2.0, 0.8, 0.5) == 1);

    // the other sign is not stationary
    const auto flipped = model_coefficients(ModelKind::harmonic_approximation, 0.25, 0.5, 1.0, 1.0, -1);
    CHECK(covariance_flow(thermal_covariance(0.5, 1.0), quadratic_model(flipped, 1.0)).norm() > 1e-3);
}

TEST_CASE("minimally invasive fixed point")
{
    for (double t : {0.2, 1.0, 3.0}) {
        for (double g : {0.1, 0.25, 0.5}) {
            const auto chk = check_minimal_stationary(t, g, 1.0);
            CHECK(chk.max_abs_difference < 1e-8);
            CHECK(chk.closed_form_residual < 1e-10);
        }
    }
    const auto gf = stationary_covariance_minimal(100.0, 0.25, 1.0);
    CHECK(x_variance(gf) == doctest::Approx(100.0).epsilon(0.01));

    // off-diagonal entry present at low T and decaying like 1/T
    CHECK(std::abs(stationary_covariance_minimal(0.2, 0.25, 1.0)(0, 1)) > 1e-2);
    const double a = stationary_covariance_minimal(10.0, 0.25, 1.0)(0, 1) * 10.0;
    const double b = stationary_covariance_minimal(20.0, 0.25, 1.0)(0, 1) * 20.0;
    CHECK(a == doctest::Approx(b).epsilon(0.02));

    // G_F differs from G_T at low T, converges at high T
    const Eigen::Matrix2d lo = stationary_covariance_minimal(0.2, 0.25, 1.0) - thermal_covariance(0.2, 1.0);
    CHECK(lo.cwiseAbs().maxCoeff() > 1e-2);
    const Eigen::Matrix2d gt = thermal_covariance(100.0, 1.0);
    CHECK((stationary_covariance_minimal(100.0, 0.25, 1.0) - gt).norm() / gt.norm() < 0.01);

    // Newton from G_T lands on the fixed point of the flow
    const auto root = riccati_root(minimal_model(1.0, 0.25, 1.0), thermal_covariance(1.0, 1.0));
    CHECK(covariance_flow(root, minimal_model(1.0, 0.25, 1.0)).norm() < 1e-12);
}

TEST_CASE("constraint branches")
{
    const double g = 0.25;
    const auto hot = solve_constraints(100.0, g, 1.0);
    CHECK(std::abs(hot.latter.h_xp) < 1e-3 * g);
    CHECK(std::abs(hot.former.h_xp) == doctest::Approx(16.0 * g * 100.0 * 100.0).epsilon(0.01));
    CHECK(hot.physical == 1);
    CHECK(&hot.physical_branch() == &hot.latter);

    for (double t : {0.1, 0.7, 2.0, 5.0}) {
        for (double gm : {0.05, 0.3, 1.0}) {
            for (double w : {0.5, 1.3}) {
                const auto s = solve_constraints(t, gm, w);
                const auto c = model_coefficients(ModelKind::harmonic_approximation, gm, t, w);
                CHECK(std::abs(0.5 * (gm + s.latter.h_xp) - c.c_xp) < 1e-10);
                CHECK(std::abs(std::abs(std::sqrt(gm / (4.0 * t)) + s.latter.l_p) - std::abs(c.c_p)) < 1e-10);
            }
        }
    }
}

TEST_CASE("lattice report")
{
    const auto rows = gaussian_lattice_report({0.2, 1.0}, {0.25}, {1.0});
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.residual_gt < 1e-10);
        CHECK(r.residual_gf < 1e-10);
    }
    CHECK(std::string(rows[1].branch) == "latter");
    const auto pts = geometric_points(0.05, 5.0, 3);
    CHECK(pts[1] == doctest::Approx(0.5).epsilon(1e-14));
}
