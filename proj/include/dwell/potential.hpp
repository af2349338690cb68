#pragma once

#include <optional>
#include <string_view>

namespace dwell {

/// Quadratic confinement plus a central Gaussian bump:
///   V(x) = 1/2 m w^2 x^2 + A exp(-x^2 / 2 s^2)
struct PotentialParams {
    double amplitude = 3.0;
    double width = 0.70710678118654752440;
    double mass = 1.0;
    double omega = 1.0;

    /// A / (m w^2 s^2); the well is double when this exceeds one.
    double well_ratio() const { return amplitude / (mass * omega * omega * width * width); }
    bool is_double_well() const { return well_ratio() > 1.0; }

    /// Throws InvalidArgument for non-positive parameters and NotDoubleWell
    /// when the barrier does not split the well.
    void validate_double_well() const;

    static PotentialParams shallow();
    static PotentialParams deep();
};

/// Look up a named preset ("shallow" or "deep").
std::optional<PotentialParams> preset(std::string_view name);

/// How the harmonic frequency of a well minimum is reported.
///   curvature: w_e = V''(x_min)            (curvature, 2 ln(A/s^2) in natural units)
///   sqrt:      w_e = sqrt(V''(x_min) / m)  (the frequency of the local oscillator)
enum class OmegaEConvention { curvature, sqrt };

std::optional<OmegaEConvention> parse_omega_e_convention(std::string_view name);
std::string_view to_string(OmegaEConvention c);

struct WellGeometry {
    double x_left;
    double x_right;
    double barrier_height;
    double dividing_coordinate;
    double effective_frequency;
};

struct PotentialDerivatives {
    double force;     // V'(x)
    double curvature; // V''(x)
};

double eval_potential(double x, const PotentialParams& p);
PotentialDerivatives eval_derivatives(double x, const PotentialParams& p);

WellGeometry well_geometry(const PotentialParams& p,
                           OmegaEConvention convention = OmegaEConvention::curvature);

/// Right minimum located by bisection on V' over (0, upper]. Used to cross-check
/// the closed form.
double right_minimum_by_bisection(const PotentialParams& p, double tol = 1e-12);

} // namespace dwell
