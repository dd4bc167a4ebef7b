#pragma once

#include <numbers>

namespace qcs::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
// e^γ and e^{-γ} to full double precision; never derived at runtime.
inline constexpr double exp_gamma = 1.78107241799019798523650410310717954916964521430343;
inline constexpr double exp_neg_gamma = 0.56145948356688516982414321479637980;
inline constexpr double log2 = std::numbers::ln2;

}  // namespace qcs::constants
