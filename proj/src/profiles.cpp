#include "confluence/profiles.hpp"

#include <cmath>

namespace confluence {

double omega0(double z) noexcept
{
    if (z > kSaturation) return 1.0;
    if (z < -kSaturation) return -1.0;
    return std::tanh(z);
}

double omega0_dot(double z) noexcept
{
    if (std::abs(z) > kSaturation) return 0.0;
    // sech^2 directly: 1 - tanh^2 loses digits in the tails
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

double omega0_ddot(double z) noexcept
{
    return -2.0 * omega0(z) * omega0_dot(z);
}

ProfileEval capital_omega(double z, double eta) noexcept
{
    const double a = omega0(z);
    const double a_dot = omega0_dot(z);
    const double w = -z - eta;
    const double b = omega0(w);
    const double b_dot = omega0_dot(w);
    ProfileEval out;
    out.value = 1.0 - 0.5 * (1.0 - a) * (1.0 - b);
    out.d_z = 0.5 * (a_dot * (1.0 - b) - (1.0 - a) * b_dot);
    out.d_eta = -0.5 * (1.0 - a) * b_dot;
    return out;
}

OmegaJet omega_jet(double z, double eta) noexcept
{
    OmegaJet j;
    const double w = -z - eta;
    j.a = omega0(z);
    j.a_dot = omega0_dot(z);
    j.b = omega0(w);
    j.b_dot = omega0_dot(w);
    j.b_ddot = -2.0 * j.b * j.b_dot;
    const double ma = 1.0 - j.a;
    const double mb = 1.0 - j.b;
    j.value = 1.0 - 0.5 * ma * mb;
    j.p = 0.5 * j.a_dot * mb;
    j.d_eta = -0.5 * ma * j.b_dot;
    j.d_z = j.p + j.d_eta;
    j.d_zeta = 0.5 * (j.a_dot * j.b_dot + ma * j.b_ddot);
    j.d_etaeta = 0.5 * ma * j.b_ddot;
    j.p_eta = 0.5 * j.a_dot * j.b_dot;
    return j;
}

double double_well(double u) noexcept
{
    const double s = u * u - 1.0;
    return 0.25 * s * s;
}

double double_well_prime(double u) noexcept
{
    return u * u * u - u;
}

double switch_B(double tau) noexcept
{
    return 0.5 * (1.0 + omega0(tau));
}

double switch_V(double tau) noexcept
{
    return switch_B(tau);
}

double switch_dot(double tau) noexcept
{
    return 0.5 * omega0_dot(tau);
}

double switch_B_integral(double tau) noexcept
{
    // softplus(2 tau)
    const double x = 2.0 * tau;
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double switch_V_defect_integral(double tau) noexcept
{
    // 1/2 ln((1 + e^{-2tau}) / 2) = 1/2 softplus(-2 tau) - ln(2)/2
    return 0.5 * switch_B_integral(-tau) - 0.5 * std::log(2.0);
}

}  // namespace confluence
