#pragma once

// Natural units. The symbols are kept in every formula so that switching to
// dimensional values is a matter of editing these constants.
namespace dwell::units {

inline constexpr double hbar = 1.0;
inline constexpr double k_B = 1.0;

} // namespace dwell::units
