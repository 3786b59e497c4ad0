#include "confluence/order_field.hpp"

#include "confluence/profiles.hpp"

namespace confluence {

FieldSample u_check(double x, const FrontState& f)
{
    const double eps = f.epsilon;
    const double beta = f.s.beta;
    const double z = beta * (f.phi1 - x) / eps;
    const double eta = f.s.eta;
    const ProfileEval o = capital_omega(z, eta);
    // d/dt of z and eta; the beta_t parts scale the stretched coordinates
    const double beta_t_over_beta = f.beta_t() / beta;
    const double z_t = beta * f.phi1_t / eps + beta_t_over_beta * z;
    const double eta_t = beta * (f.phi2_t - f.phi1_t) / eps + beta_t_over_beta * eta;
    FieldSample s;
    s.u = o.value;
    s.u_x = -beta / eps * o.d_z;
    s.u_t = o.d_z * z_t + o.d_eta * eta_t;
    return s;
}

std::vector<FieldSample> sample_order_field(std::span<const double> x, const FrontState& f, Execution exec)
{
    const int n = static_cast<int>(x.size());
    std::vector<FieldSample> out(n);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) out[i] = u_check(x[i], f);
    } else {
        for (int i = 0; i < n; ++i) out[i] = u_check(x[i], f);
    }
    return out;
}

std::array<DeltaTerm, 2> ut_delta_expansion(const FrontState& f)
{
    const KernelValues& k = f.s.kernels;
    const double beta = f.s.beta;
    const double stretch = f.s.beta_tau * f.psi0_t / (2.0 * beta * beta) * k.bz_dot00;
    const double a1 = 0.5 * f.phi1_t * (2.0 - k.b_dot00) - stretch;
    const double a2 = -0.5 * f.phi2_t * (2.0 - k.b_dot00) - stretch;
    return {DeltaTerm{a1, f.phi1}, DeltaTerm{a2, f.phi2}};
}

}  // namespace confluence
