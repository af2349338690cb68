#include "dwell/potential.hpp"

#include <cmath>
#include <string>

#include "dwell/error.hpp"

namespace dwell {

void PotentialParams::validate_double_well() const
{
    require(amplitude > 0.0 && width > 0.0 && mass > 0.0 && omega > 0.0,
            ErrorCode::InvalidArgument, "potential parameters must be positive");
    require(is_double_well(), ErrorCode::NotDoubleWell,
            "A/(m w^2 s^2) = " + std::to_string(well_ratio()) + " <= 1 gives a single minimum");
}

PotentialParams PotentialParams::shallow() { return {3.0, 1.0 / std::sqrt(2.0), 1.0, 1.0}; }
PotentialParams PotentialParams::deep() { return {8.0, 1.0, 1.0, 1.0}; }

std::optional<PotentialParams> preset(std::string_view name)
{
    if (name == "shallow") return PotentialParams::shallow();
    if (name == "deep") return PotentialParams::deep();
    return std::nullopt;
}

std::optional<OmegaEConvention> parse_omega_e_convention(std::string_view name)
{
    if (name == "curvature") return OmegaEConvention::curvature;
    if (name == "sqrt") return OmegaEConvention::sqrt;
    return std::nullopt;
}

std::string_view to_string(OmegaEConvention c)
{
    return c == OmegaEConvention::curvature ? "curvature" : "sqrt";
}

double eval_potential(double x, const PotentialParams& p)
{
    const double s2 = p.width * p.width;
    return 0.5 * p.mass * p.omega * p.omega * x * x + p.amplitude * std::exp(-x * x / (2.0 * s2));
}

PotentialDerivatives eval_derivatives(double x, const PotentialParams& p)
{
    const double s2 = p.width * p.width;
    const double k = p.mass * p.omega * p.omega;
    const double bump = p.amplitude * std::exp(-x * x / (2.0 * s2));
    return {k * x - bump * x / s2, k + bump * (x * x / (s2 * s2) - 1.0 / s2)};
}

WellGeometry well_geometry(const PotentialParams& p, OmegaEConvention convention)
{
    p.validate_double_well();
    const double k = p.mass * p.omega * p.omega;
    const double s2 = p.width * p.width;
    const double log_ratio = std::log(p.well_ratio());

    // V'(x) = 0 away from the origin  <=>  exp(-x^2/2s^2) = k s^2 / A
    const double x_min = p.width * std::sqrt(2.0 * log_ratio);
    const double barrier = p.amplitude - k * s2 * (1.0 + log_ratio);
    const double curvature = 2.0 * k * log_ratio; // V''(x_min)

    const double w_e = convention == OmegaEConvention::curvature ? curvature
                                                             : std::sqrt(curvature / p.mass);
    return {-x_min, x_min, barrier, p.width, w_e};
}

double right_minimum_by_bisection(const PotentialParams& p, double tol)
{
    p.validate_double_well();
    // V' < 0 just right of the origin (the bump dominates) and V' > 0 far out.
    double lo = 1e-9 * p.width;
    double hi = p.width;
    while (eval_derivatives(hi, p).force <= 0.0) hi *= 2.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (eval_derivatives(mid, p).force < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dwell
