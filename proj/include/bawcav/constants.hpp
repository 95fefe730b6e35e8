#pragma once

#include <numbers>

namespace bawcav::constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double two_over_sqrt_pi = std::numbers::inv_sqrtpi * 2.0;

}  // namespace bawcav::constants
