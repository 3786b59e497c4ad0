#include "confluence/kernels.hpp"

#include "confluence/errors.hpp"
#include "confluence/profiles.hpp"
#include "confluence/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace confluence {

std::array<double, KernelValues::size> KernelValues::as_array() const
{
    return {c_hat, d_hat, b_omega, bz_omega, c_omega, b_tilde, b_dot00, bz_dot00, beta};
}

KernelValues KernelValues::from_array(const std::array<double, size>& a)
{
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
}

namespace {

// The integrands live near z = 0 and z = -eta; integrate over a window covering both
// plus the saturation margin on each side.
struct Window {
    double lo;
    double hi;
    std::array<double, 2> breaks;
};

Window window_for(double eta)
{
    const double centre = -0.5 * eta;
    const double half = kSaturation + 0.5 * std::abs(eta);
    return {centre - half, centre + half, {0.0, -eta}};
}

template <class F>
double kernel_integral(double eta, const F& f, double tol = 1e-12)
{
    const Window w = window_for(eta);
    QuadratureOptions opt;
    opt.abs_tol = tol;
    return integrate(f, w.lo, w.hi, opt, w.breaks);
}

}  // namespace

double c_hat(double eta)
{
    return kernel_integral(eta, [eta](double z) {
        const double oz = capital_omega(z, eta).d_z;
        return 0.25 * oz * oz;
    });
}

double d_hat(double eta)
{
    return kernel_integral(eta, [eta](double z) { return 0.5 * double_well(capital_omega(z, eta).value); });
}

double b_omega(double eta)
{
    return kernel_integral(eta, [eta](double z) {
        const ProfileEval o = capital_omega(z, eta);
        return o.d_z * (o.d_z - o.d_eta);
    });
}

double b_omega_symmetric(double eta)
{
    return kernel_integral(eta, [eta](double z) {
        const double oz = capital_omega(z, eta).d_z;
        return 0.5 * oz * oz;
    });
}

double bz_omega(double eta)
{
    return kernel_integral(eta, [eta](double z) {
        const ProfileEval o = capital_omega(z, eta);
        const double p = o.d_z - o.d_eta;
        return (z * p - (z + eta) * o.d_eta) * p;
    });
}

double c_omega(double eta)
{
    return kernel_integral(eta, [eta](double z) {
        const ProfileEval o = capital_omega(z, eta);
        return o.d_z - o.d_eta;
    });
}

double b_tilde(double eta)
{
    return kernel_integral(eta, [eta](double z) { return 1.0 - omega0(z + eta) * omega0(z); });
}

double b_tilde_closed_form(double eta)
{
    if (std::abs(eta) < 1e-4) {
        // 2 eta coth eta = 2 (1 + eta^2/3 - eta^4/45 + ...)
        const double e2 = eta * eta;
        return 2.0 * (1.0 + e2 / 3.0 - e2 * e2 / 45.0);
    }
    return 2.0 * eta / std::tanh(eta);
}

double b_dot00(double eta)
{
    return kernel_integral(eta, [eta](double z) { return omega0_dot(z) * omega0(-eta - z); });
}

double bz_dot00(double eta)
{
    return kernel_integral(eta, [eta](double z) { return z * omega0_dot(z) * omega0(-eta - z); });
}

double beta_of_eta(double eta)
{
    return std::sqrt(d_hat(eta) / c_hat(eta));
}

KernelJet evaluate_kernels(double eta, double tol)
{
    auto integrand = [eta](double z) {
        const OmegaJet j = omega_jet(z, eta);
        const double g = z * j.p - (z + eta) * j.d_eta;
        const double g_eta = z * j.p_eta - j.d_eta - (z + eta) * j.d_etaeta;
        const double shifted = omega0(z + eta);
        std::array<double, 16> v{};
        v[0] = 0.25 * j.d_z * j.d_z;
        v[1] = 0.5 * double_well(j.value);
        v[2] = j.d_z * j.p;
        v[3] = g * j.p;
        v[4] = j.p;
        v[5] = 1.0 - shifted * j.a;
        v[6] = j.a_dot * j.b;
        v[7] = z * j.a_dot * j.b;
        v[8] = 0.5 * j.d_z * j.d_zeta;
        v[9] = 0.5 * double_well_prime(j.value) * j.d_eta;
        v[10] = j.d_zeta * j.p + j.d_z * j.p_eta;
        v[11] = g_eta * j.p + g * j.p_eta;
        v[12] = j.p_eta;
        v[13] = -omega0_dot(z + eta) * j.a;
        v[14] = -j.a_dot * j.b_dot;
        v[15] = -z * j.a_dot * j.b_dot;
        return v;
    };
    const Window w = window_for(eta);
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const auto r = integrate_vector<16>(integrand, w.lo, w.hi, opt, w.breaks);

    KernelJet out;
    KernelValues& v = out.value;
    KernelValues& d = out.d_eta;
    v.c_hat = r[0];
    v.d_hat = r[1];
    v.b_omega = r[2];
    v.bz_omega = r[3];
    v.c_omega = r[4];
    v.b_tilde = r[5];
    v.b_dot00 = r[6];
    v.bz_dot00 = r[7];
    v.beta = std::sqrt(v.d_hat / v.c_hat);
    d.c_hat = r[8];
    d.d_hat = r[9];
    d.b_omega = r[10];
    d.bz_omega = r[11];
    d.c_omega = r[12];
    d.b_tilde = r[13];
    d.b_dot00 = r[14];
    d.bz_dot00 = r[15];
    d.beta = (d.d_hat * v.c_hat - v.d_hat * d.c_hat) / (2.0 * v.beta * v.c_hat * v.c_hat);
    return out;
}

KernelTable KernelTable::build(const TableOptions& opt)
{
    if (opt.eta_max < 20.0) throw std::invalid_argument("kernel table needs eta_max >= 20");
    if (opt.nodes < 200) throw std::invalid_argument("kernel table needs at least 200 nodes");
    KernelTable t;
    const int n = opt.nodes;
    t.eta_.resize(n);
    t.jets_.resize(n);
    const double s = std::sinh(opt.stretch);
    for (int i = 0; i < n; ++i) {
        t.eta_[i] = opt.eta_max * std::sinh(opt.stretch * i / (n - 1)) / s;
    }
    t.eta_.front() = 0.0;
    t.eta_.back() = opt.eta_max;

    if (opt.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int i = 0; i < n; ++i) t.jets_[i] = evaluate_kernels(t.eta_[i]);
    } else {
        for (int i = 0; i < n; ++i) t.jets_[i] = evaluate_kernels(t.eta_[i]);
    }
    for (const auto& j : t.jets_) t.beta_max_ = std::max(t.beta_max_, j.value.beta);
    return t;
}

KernelJet KernelTable::jet(double eta) const
{
    if (eta <= eta_.front()) eta = eta_.front();
    if (eta >= eta_.back()) {
        KernelJet limit = jets_.back();
        limit.d_eta = KernelValues{};
        return limit;
    }
    const auto it = std::upper_bound(eta_.begin(), eta_.end(), eta);
    const std::size_t i = static_cast<std::size_t>(it - eta_.begin()) - 1;
    const double x0 = eta_[i];
    const double h = eta_[i + 1] - x0;
    const double s = (eta - x0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    // derivatives of the basis w.r.t. s
    const double d00 = 6 * s2 - 6 * s;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = -6 * s2 + 6 * s;
    const double d11 = 3 * s2 - 2 * s;

    const auto y0 = jets_[i].value.as_array();
    const auto y1 = jets_[i + 1].value.as_array();
    const auto m0 = jets_[i].d_eta.as_array();
    const auto m1 = jets_[i + 1].d_eta.as_array();
    std::array<double, KernelValues::size> v{};
    std::array<double, KernelValues::size> d{};
    for (std::size_t k = 0; k < KernelValues::size; ++k) {
        v[k] = h00 * y0[k] + h10 * h * m0[k] + h01 * y1[k] + h11 * h * m1[k];
        d[k] = (d00 * y0[k] + d01 * y1[k]) / h + d10 * m0[k] + d11 * m1[k];
    }
    KernelJet out{KernelValues::from_array(v), KernelValues::from_array(d)};
    // beta from the interpolated ratio, so beta^2 C = D holds to rounding between nodes as well
    KernelValues& val = out.value;
    KernelValues& der = out.d_eta;
    val.beta = std::sqrt(val.d_hat / val.c_hat);
    der.beta = (der.d_hat * val.c_hat - val.d_hat * der.c_hat) / (2.0 * val.beta * val.c_hat * val.c_hat);
    return out;
}

KernelValues KernelTable::at(double eta) const
{
    return jet(eta).value;
}

double KernelTable::beta(double eta) const
{
    return jet(eta).value.beta;
}

double KernelTable::beta_prime(double eta) const
{
    return jet(eta).d_eta.beta;
}

}  // namespace confluence
