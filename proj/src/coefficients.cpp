#include "dwell/coefficients.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dwell/error.hpp"
#include "dwell/units.hpp"

namespace dwell {

std::optional<ModelKind> parse_model_kind(std::string_view name)
{
    if (name == "minimal" || name == "minimally_invasive") return ModelKind::minimally_invasive;
    if (name == "harmonic" || name == "harmonic_approximation") return ModelKind::harmonic_approximation;
    return std::nullopt;
}

std::string_view to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::minimally_invasive: return "minimally_invasive";
    case ModelKind::harmonic_approximation: return "harmonic_approximation";
    }
    return "unknown";
}

ModelCoefficients model_coefficients(ModelKind kind, double gamma, double temperature, double omega_e,
                                     double mass, int p_sign)
{
    require(gamma >= 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "gamma must be non-negative");
    require(temperature >= 0.0, ErrorCode::InvalidArgument, "temperature must be non-negative");
    require(mass > 0.0, ErrorCode::InvalidArgument, "mass must be positive");
    require(p_sign == 1 || p_sign == -1, ErrorCode::InvalidArgument, "p_sign must be +1 or -1");

    ModelCoefficients c;
    c.kind = kind;
    c.gamma = gamma;
    c.temperature = temperature;
    c.omega_e = omega_e;
    c.p_sign = p_sign;

    const double hb = units::hbar;
    const double kt = units::k_B * temperature;
    if (kind == ModelKind::minimally_invasive) {
        require(temperature > 0.0, ErrorCode::SingularTemperature,
                "minimally invasive model is singular at T = 0");
        if (gamma == 0.0) return c;
        c.c_x = std::sqrt(4.0 * gamma * mass * kt / hb);
        c.c_p = p_sign * std::sqrt(gamma * hb / (4.0 * mass * kt));
        c.c_xp = 0.5 * gamma;
        return c;
    }

    require(omega_e > 0.0, ErrorCode::InvalidArgument, "effective frequency must be positive");
    if (temperature == 0.0 || gamma == 0.0) return c;
    const double y = hb * omega_e / kt;
    c.c_x = std::sqrt(4.0 * gamma * mass * kt / hb);
    c.c_p = p_sign * std::sqrt(4.0 * gamma * kt / (hb * mass * omega_e * omega_e)) * std::tanh(0.25 * y);
    // sech via exp(-y/2) keeps the large-y tail finite
    const double sech = 2.0 * std::exp(-0.5 * y) / (1.0 + std::exp(-y));
    c.c_xp = 2.0 * gamma * kt / (hb * omega_e) * sech * std::tanh(0.25 * y);
    return c;
}

double temperature_condition_ratio(double gamma, double temperature)
{
    if (temperature <= 0.0) return std::numeric_limits<double>::infinity();
    return units::hbar * gamma / (2.0 * std::numbers::pi * units::k_B * temperature);
}

} // namespace dwell
