#pragma once

namespace confluence {

inline constexpr double kSaturation = 40.0;

// tanh profile, saturated to +-1 beyond |z| = 40.
double omega0(double z) noexcept;
// 1 - omega0^2
double omega0_dot(double z) noexcept;
// -2 omega0 omega0_dot
double omega0_ddot(double z) noexcept;

struct ProfileEval {
    double value = 0.0;
    double d_z = 0.0;
    double d_eta = 0.0;
};

// Omega(z, eta) = 1/2 {1 + w(z) + w(-z-eta) - w(z) w(-z-eta)} with its first partials.
ProfileEval capital_omega(double z, double eta) noexcept;

// Everything the kernel integrands need at one (z, eta) point.
struct OmegaJet {
    double a = 0.0;      // omega0(z)
    double a_dot = 0.0;  // omega0'(z)
    double b = 0.0;      // omega0(-z-eta)
    double b_dot = 0.0;  // omega0'(-z-eta)
    double b_ddot = 0.0; // omega0''(-z-eta)
    double value = 0.0;
    double d_z = 0.0;
    double d_eta = 0.0;
    double d_zeta = 0.0;
    double d_etaeta = 0.0;
    // P = d_z - d_eta = a_dot (1 - b) / 2, localized at z = 0
    double p = 0.0;
    double p_eta = 0.0;
};

OmegaJet omega_jet(double z, double eta) noexcept;

// F(u) = u^4/4 - u^2/2 + 1/4
double double_well(double u) noexcept;
// F'(u) = u^3 - u
double double_well_prime(double u) noexcept;

// B(tau) = V(tau) = (1 + tanh tau) / 2
double switch_B(double tau) noexcept;
double switch_V(double tau) noexcept;
double switch_dot(double tau) noexcept;
// 2 * int_{-inf}^{tau} B = ln(1 + e^{2 tau}), overflow safe
double switch_B_integral(double tau) noexcept;
// int_0^{tau} (V - 1) = ln((1 + e^{-2 tau}) / 2) / 2
double switch_V_defect_integral(double tau) noexcept;

}  // namespace confluence
