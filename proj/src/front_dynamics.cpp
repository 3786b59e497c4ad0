#include "confluence/front_dynamics.hpp"

#include "confluence/errors.hpp"
#include "confluence/profiles.hpp"
#include "confluence/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confluence {

namespace {

// Shrinks [lo, hi] around the sign change of f until the relative width is below 1e-14.
template <class F>
double bisect(const F& f, double lo, double hi)
{
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (f(mid) > 0.0) hi = mid;
        else lo = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double printed_lhs(double eta)
{
    return eta * (1.0 + std::tanh(eta));
}

}  // namespace

double solve_eta(double tau, const std::function<double(double)>& beta)
{
    const double r = switch_B_integral(tau);
    if (r == 0.0) return 0.0;
    auto f = [&](double eta) { return printed_lhs(eta) - beta(eta) * r; };
    double hi = std::max(beta(0.0) * r, std::numeric_limits<double>::min());
    int grow = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++grow > 200 || !std::isfinite(hi))
            throw BracketFailure("solve_eta: no sign change for tau = " + std::to_string(tau));
    }
    return bisect(f, 0.0, hi);
}

double solve_eta(double tau, const KernelTable& table)
{
    const double r = switch_B_integral(tau);
    if (r == 0.0) return 0.0;
    auto f = [&](double eta) { return printed_lhs(eta) - table.beta(eta) * r; };
    // eta <= beta(eta) R <= beta_max R, so the bracket is known in advance
    const double hi = table.beta_max() * r;
    if (!(f(hi) >= 0.0)) throw BracketFailure("solve_eta: table bracket lost for tau = " + std::to_string(tau));
    return bisect(f, 0.0, hi);
}

Interaction::Interaction(const KernelTable& table, ModelOptions options) : table_(&table), options_(options)
{
    if (options_.eta_equation == EtaEquation::balanced) {
        const auto& grid = table.eta_grid();
        g_.assign(grid.size(), 0.0);
        QuadratureOptions q;
        q.abs_tol = 1e-13;
        q.initial_panels = 1;
        for (std::size_t i = 1; i < grid.size(); ++i)
            g_[i] = g_[i - 1] + integrate([this](double e) { return balance_prime(e); }, grid[i - 1], grid[i], q);
    }
    if (options_.sum_kernel != SumKernel::none) {
        k_tau_lo_ = -40.0;
        k_tau_step_ = 0.01;
        const int n = 8001;
        k_tau_.resize(n);
        k_.assign(n, 0.0);
        k_prime_.resize(n);
        for (int i = 0; i < n; ++i) {
            k_tau_[i] = k_tau_lo_ + i * k_tau_step_;
            k_prime_[i] = kernel_rate(k_tau_[i]);
        }
        QuadratureOptions q;
        q.abs_tol = 1e-14;
        q.initial_panels = 1;
        const int zero = n / 2;
        k_tau_[zero] = 0.0;
        auto rate = [this](double tau) { return kernel_rate(tau); };
        for (int i = zero + 1; i < n; ++i) k_[i] = k_[i - 1] + integrate(rate, k_tau_[i - 1], k_tau_[i], q);
        for (int i = zero - 1; i >= 0; --i) k_[i] = k_[i + 1] - integrate(rate, k_tau_[i], k_tau_[i + 1], q);
    }
}

double Interaction::balance_prime(double eta) const
{
    const KernelJet j = table_->jet(eta);
    const double b = j.value.beta;
    const double bp = j.d_eta.beta;
    return j.value.c_omega * (1.0 / b - eta * bp / (b * b)) + bp * j.value.bz_dot00 / (b * b);
}

double Interaction::balance(double eta) const
{
    const auto& grid = table_->eta_grid();
    if (eta <= 0.0) return 0.0;
    if (eta >= grid.back()) return g_.back() + balance_prime(grid.back()) * (eta - grid.back());
    const auto it = std::upper_bound(grid.begin(), grid.end(), eta);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double h = grid[i + 1] - grid[i];
    const double s = (eta - grid[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g_[i] + (s3 - 2 * s2 + s) * h * balance_prime(grid[i]) +
           (-2 * s3 + 3 * s2) * g_[i + 1] + (s3 - s2) * h * balance_prime(grid[i + 1]);
}

double Interaction::solve(double tau) const
{
    if (options_.eta_equation == EtaEquation::printed) return solve_eta(tau, *table_);
    const double r = switch_B_integral(tau);
    if (r == 0.0) return 0.0;
    auto f = [&](double eta) { return balance(eta) - r; };
    double hi = r / balance_prime(0.0) + 1e-300;
    int grow = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++grow > 200) throw BracketFailure("balanced eta equation: no sign change for tau = " + std::to_string(tau));
    }
    return bisect(f, 0.0, hi);
}

namespace {

InteractionState core_state(const Interaction& in, double tau)
{
    InteractionState s;
    s.tau = tau;
    s.eta = in.solve(tau);
    const KernelJet j = in.table().jet(s.eta);
    s.kernels = j.value;
    s.beta = j.value.beta;
    const double bp = j.d_eta.beta;
    const double drive = 1.0 + std::tanh(tau);  // d/dtau ln(1 + e^{2 tau})
    if (in.options().eta_equation == EtaEquation::printed) {
        const double ch = std::cosh(std::min(s.eta, 300.0));
        const double den = 1.0 + std::tanh(s.eta) + s.eta / (ch * ch) - bp * switch_B_integral(tau);
        s.eta_tau = s.beta * drive / den;
    } else {
        s.eta_tau = drive / in.balance_prime(s.eta);
    }
    s.beta_tau = bp * s.eta_tau;
    s.rho = s.eta / s.beta;
    s.rho_tau = s.eta_tau * (s.beta - s.eta * bp) / (s.beta * s.beta);
    return s;
}

}  // namespace

double Interaction::kernel_rate(double tau) const
{
    const InteractionState s = core_state(*this, tau);
    const KernelValues& k = s.kernels;
    const double den = options_.sum_kernel == SumKernel::b_omega ? k.b_omega + k.c_omega : k.bz_omega + k.c_omega;
    return s.beta_tau / (s.beta * s.beta) * k.bz_omega / den;
}

double Interaction::cumulative_kernel(double tau) const
{
    if (tau <= k_tau_.front()) return k_.front();
    if (tau >= k_tau_.back()) return k_.back();
    const std::size_t i = std::min(k_tau_.size() - 2, static_cast<std::size_t>((tau - k_tau_lo_) / k_tau_step_));
    const double h = k_tau_[i + 1] - k_tau_[i];
    const double s = (tau - k_tau_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * k_[i] + (s3 - 2 * s2 + s) * h * k_prime_[i] + (-2 * s3 + 3 * s2) * k_[i + 1] +
           (s3 - s2) * h * k_prime_[i + 1];
}

InteractionState Interaction::at(double tau) const
{
    InteractionState s = core_state(*this, tau);
    if (options_.sum_kernel != SumKernel::none) {
        s.k_sum = cumulative_kernel(tau);
        s.k_sum_tau = std::abs(tau) < 40.0 ? kernel_rate(tau) : 0.0;
    }
    return s;
}

double phi_sum_correction(double tau, double c, const InteractionState& s)
{
    if (tau == 0.0) return c * (switch_V(0.0) - 1.0) + 2.0 * s.k_sum_tau;
    return (c * switch_V_defect_integral(tau) + 2.0 * s.k_sum) / tau;
}

double phi_diff_correction(double tau, double rho)
{
    if (tau == 0.0) throw std::invalid_argument("phi_diff_correction is singular at tau = 0");
    return rho / tau - 1.0;
}

FrontModel::FrontModel(const Scenario& scenario, const KernelTable& table, double epsilon)
    : scenario_(scenario), interaction_(table, scenario.model), epsilon_(epsilon)
{
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
}

FrontState FrontModel::at(double t) const
{
    const Scenario& sc = scenario_;
    FrontState f;
    f.t = t;
    f.epsilon = epsilon_;
    f.psi0 = sc.psi0(t);
    f.psi0_t = sc.psi0_t(t);
    const double tau = f.psi0 / epsilon_;
    f.s = interaction_.at(tau);
    const InteractionState& s = f.s;

    const double c = sc.sum_ratio(t);
    const double c_t = sc.sum_ratio_t(t);
    const double vint = switch_V_defect_integral(tau);
    const double g = c * vint + 2.0 * s.k_sum;
    // psi0 phi_i1 = eps (G -+ (rho - tau)) / 2, written with eps tau = psi0
    f.phi1 = sc.phi10(t) + 0.5 * (epsilon_ * g - epsilon_ * s.rho + f.psi0);
    f.phi2 = sc.phi20(t) + 0.5 * (epsilon_ * g + epsilon_ * s.rho - f.psi0);

    f.phi10_t = sc.phi10.d(t);
    f.phi20_t = sc.phi20.d(t);
    const double common = 0.5 * epsilon_ * c_t * vint + 0.5 * f.psi0_t * (c * (switch_V(tau) - 1.0) + 2.0 * s.k_sum_tau);
    const double split = 0.5 * f.psi0_t * (s.rho_tau - 1.0);
    f.phi1_t = f.phi10_t + common - split;
    f.phi2_t = f.phi20_t + common + split;

    f.sum_corr = phi_sum_correction(tau, c, s);
    f.diff_corr = tau == 0.0 ? std::numeric_limits<double>::quiet_NaN() : phi_diff_correction(tau, s.rho);
    return f;
}

std::vector<double> uniform_times(double t0, double t1, int n)
{
    if (n < 2) throw std::invalid_argument("uniform_times needs n >= 2");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * i / (n - 1);
    t.back() = t1;
    return t;
}

FrontTrajectory assemble_fronts(const FrontModel& model, std::span<const double> times, Execution exec)
{
    FrontTrajectory tr;
    const int n = static_cast<int>(times.size());
    tr.nodes.resize(n);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) tr.nodes[i] = model.at(times[i]);
    } else {
        for (int i = 0; i < n; ++i) tr.nodes[i] = model.at(times[i]);
    }
    for (const FrontState& f : tr.nodes) {
        const InteractionState& s = f.s;
        if (!(s.eta >= 0.0)) throw SolverError("trajectory: eta < 0 at t = " + std::to_string(f.t));
        if (std::abs(s.rho - s.eta / s.beta) > 1e-12 * (1.0 + s.rho))
            throw SolverError("trajectory: rho != eta / beta at t = " + std::to_string(f.t));
        if (std::abs(f.psi() - f.epsilon * s.rho) > 1e-10)
            throw SolverError("trajectory: phi2 - phi1 != eps rho at t = " + std::to_string(f.t));
    }
    return tr;
}

ContactEffects contact_effects(const FrontTrajectory& trajectory, const Scenario& scenario)
{
    for (const FrontState& f : trajectory.nodes) {
        if (f.s.eta < 1e-3) {
            ContactEffects c;
            c.t_contact = f.t;
            c.eta_contact = f.s.eta;
            c.velocity_sum = f.phi1_t + f.phi2_t;
            c.temperature_jump = -0.5 * (scenario.phi10.d(scenario.t_star) + scenario.phi20.d(scenario.t_star));
            return c;
        }
    }
    throw NoContact("eta never drops below 1e-3 on the trajectory");
}

}  // namespace confluence
