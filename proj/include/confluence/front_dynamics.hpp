#pragma once

#include "confluence/execution.hpp"
#include "confluence/kernels.hpp"
#include "confluence/scenario.hpp"

#include <functional>
#include <span>
#include <vector>

namespace confluence {

// eta >= 0 solving eta (1 + tanh eta) = beta(eta) ln(1 + e^{2 tau}), by bisection to 1e-12.
double solve_eta(double tau, const std::function<double(double)>& beta);
double solve_eta(double tau, const KernelTable& table);

// Everything that depends on tau alone.
struct InteractionState {
    double tau = 0.0;
    double eta = 0.0;
    double eta_tau = 0.0;
    double beta = 0.0;
    double beta_tau = 0.0;
    double rho = 0.0;
    double rho_tau = 0.0;
    // cumulative kernel K(tau) of the sum correction and its derivative
    double k_sum = 0.0;
    double k_sum_tau = 0.0;
    KernelValues kernels;
};

class Interaction {
public:
    Interaction(const KernelTable& table, ModelOptions options);

    InteractionState at(double tau) const;
    double solve(double tau) const;
    const KernelTable& table() const noexcept { return *table_; }
    const ModelOptions& options() const noexcept { return options_; }

    // Left side of the balanced relation, G(eta); G' is the summed delta weight.
    double balance(double eta) const;
    double balance_prime(double eta) const;

private:
    const KernelTable* table_;
    ModelOptions options_;
    std::vector<double> g_;         // G at the kernel nodes
    std::vector<double> k_tau_;     // uniform tau grid for K
    std::vector<double> k_;
    std::vector<double> k_prime_;
    double k_tau_lo_ = 0.0;
    double k_tau_step_ = 0.0;

    double kernel_rate(double tau) const;
    double cumulative_kernel(double tau) const;
};

// S = phi_11 + phi_21 = (c Vint(tau) + 2 K(tau)) / tau, with the tau -> 0 limit.
double phi_sum_correction(double tau, double c, const InteractionState& s);
// D = phi_21 - phi_11 = rho / tau - 1. Requires tau != 0.
double phi_diff_correction(double tau, double rho);

struct FrontState {
    double t = 0.0;
    double epsilon = 0.0;
    double psi0 = 0.0;
    double psi0_t = 0.0;
    InteractionState s;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi1_t = 0.0;
    double phi2_t = 0.0;
    double phi10_t = 0.0;
    double phi20_t = 0.0;
    // phi_11 + phi_21 and phi_21 - phi_11; the latter is NaN exactly at tau = 0
    double sum_corr = 0.0;
    double diff_corr = 0.0;

    double psi() const noexcept { return phi2 - phi1; }
    double midpoint() const noexcept { return 0.5 * (phi1 + phi2); }
    double tau() const noexcept { return s.tau; }
    double beta_t() const noexcept { return s.beta_tau * psi0_t / epsilon; }
};

// The assembled fronts phi_i(t, eps) of one scenario at one epsilon.
class FrontModel {
public:
    FrontModel(const Scenario& scenario, const KernelTable& table, double epsilon);

    FrontState at(double t) const;
    const Scenario& scenario() const noexcept { return scenario_; }
    const Interaction& interaction() const noexcept { return interaction_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    Scenario scenario_;
    Interaction interaction_;
    double epsilon_;
};

struct FrontTrajectory {
    std::vector<FrontState> nodes;
};

// Evaluates the model on a time grid and checks the trajectory invariants.
FrontTrajectory assemble_fronts(const FrontModel& model, std::span<const double> times,
                                Execution exec = Execution::parallel);
std::vector<double> uniform_times(double t0, double t1, int n);

struct ContactEffects {
    double t_contact = 0.0;
    double eta_contact = 0.0;
    double velocity_sum = 0.0;
    // -(phi10_t + phi20_t)/2 as t -> t_star from below
    double temperature_jump = 0.0;
};

// Contact is the first node where eta drops below 1e-3; throws NoContact otherwise.
ContactEffects contact_effects(const FrontTrajectory& trajectory, const Scenario& scenario);

}  // namespace confluence
