// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace iscat {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c0 = 299792458.0;        // vacuum speed of light [m/s]
inline constexpr double eps0 = 8.8541878128e-12; // vacuum permittivity [F/m]
} // namespace constants

// Time convention is e^{+j omega t}; outgoing waves carry H0^(2).

} // namespace iscat
