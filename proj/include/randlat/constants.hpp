#pragma once

namespace randlat {

/// Riemann zeta for real s > 1 via Euler–Maclaurin (absolute error < 1e-14
/// for s >= 1.01). Throws DomainError for s <= 1.
double zeta(double s);

/// Constant of the regular-lattice hole bound C_d / |A|:
/// C_2 = 16 zeta(2), C_d = 8 zeta(d-1) / zeta(d) for d >= 3.
double rogers_constant(int d);

}  // namespace randlat
