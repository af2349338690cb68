#pragma once

#include <optional>
#include <string_view>

namespace dwell {

enum class ModelKind { minimally_invasive, harmonic_approximation };

std::optional<ModelKind> parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind k);

/// Lindblad operator L = c_x X + i c_p P and the extra Hamiltonian term
/// c_xp (XP + PX) of a quantum Brownian-motion model.
struct ModelCoefficients {
    ModelKind kind = ModelKind::minimally_invasive;
    double c_x = 0.0;
    double c_p = 0.0;
    double c_xp = 0.0;
    double gamma = 0.0;
    double temperature = 0.0;
    double omega_e = 0.0;
    /// Sign applied to the iP coefficient (+1 as printed for both models).
    int p_sign = 1;

    bool is_closed() const { return c_x == 0.0 && c_p == 0.0 && c_xp == 0.0; }
};

/// minimally_invasive:
///   c_x = sqrt(4 g m k_B T / hbar), c_p = sqrt(g hbar / 4 m k_B T), c_xp = g/2
/// harmonic_approximation (effective frequency w_e):
///   c_x  = sqrt(4 g m k_B T / hbar)
///   c_p  = sqrt(4 g k_B T / hbar m w_e^2) tanh(hbar w_e / 4 k_B T)
///   c_xp = (2 g k_B T / hbar w_e) sech(hbar w_e / 2 k_B T) tanh(hbar w_e / 4 k_B T)
/// The harmonic model at T = 0 is closed (all zero); the minimally invasive
/// one throws SingularTemperature there. gamma = 0 gives closed dynamics for
/// both.
ModelCoefficients model_coefficients(ModelKind kind, double gamma, double temperature,
                                     double omega_e = 1.0, double mass = 1.0, int p_sign = 1);

/// hbar gamma / (2 pi k_B T); the Markovian derivation assumes this is small.
double temperature_condition_ratio(double gamma, double temperature);

} // namespace dwell
