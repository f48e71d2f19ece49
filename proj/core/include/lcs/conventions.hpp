#pragma once

// Sign conventions shared by every module.
//
// alpha_0 = sum (x_j dy_j - y_j dx_j)/2 - dz, so its Reeb field is -d/dz and the
// Lee field of (-dtheta, d_{-dtheta} alpha_0) is (0, -d/dz).
//
// Time-shift T of a translated point p of phi: the Lee-flow time carrying p to
// phi(p). On the model spaces T = z(p) - z(phi(p)), so the flow of a positive
// Hamiltonian has positive time-shifts. The coordinate formulas for tau, Gamma_phi
// and the untwisting map are used verbatim; the generating function of the graph
// Lagrangian Gamma_phi therefore has critical value -T at an essential translated
// point, and spectral selectors are taken of the action-normalized function
// Fbar = kGraphActionSign * F_Gamma.

namespace lcs {

inline double time_shift(double z_p, double z_phi) { return z_p - z_phi; }

constexpr double kGraphActionSign = -1.0;

}  // namespace lcs
