#pragma once

#include <complex>
#include <numbers>

namespace recoil {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// SI constants (CODATA 2018).
namespace si {
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double debye = 1e-21 / c;            // C m
inline constexpr double nanometre = 1e-9;
inline constexpr double piconewton = 1e-12;
}  // namespace si

}  // namespace recoil
