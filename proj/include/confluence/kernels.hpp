#pragma once

#include "confluence/execution.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace confluence {

// The kernel functions of eta, in CSV column order.
struct KernelValues {
    double c_hat = 0.0;
    double d_hat = 0.0;
    double b_omega = 0.0;
    double bz_omega = 0.0;
    double c_omega = 0.0;
    double b_tilde = 0.0;
    double b_dot00 = 0.0;
    double bz_dot00 = 0.0;
    double beta = 0.0;

    static constexpr std::size_t size = 9;
    static constexpr std::array<std::string_view, size> names = {
        "c_hat", "d_hat", "b_omega", "bz_omega", "c_omega", "b_tilde", "b_dot00", "bz_dot00", "beta"};
    std::array<double, size> as_array() const;
    static KernelValues from_array(const std::array<double, size>& a);
};

// Values together with their eta-derivatives.
struct KernelJet {
    KernelValues value;
    KernelValues d_eta;
};

double c_hat(double eta);
double d_hat(double eta);
double b_omega(double eta);
// B_Omega computed as (1/2) int (Omega_z)^2, the symmetric form.
double b_omega_symmetric(double eta);
double bz_omega(double eta);
double c_omega(double eta);
double b_tilde(double eta);
double b_tilde_closed_form(double eta);
double b_dot00(double eta);
double bz_dot00(double eta);
double beta_of_eta(double eta);

// All kernels and their eta-derivatives from one shared adaptive quadrature.
KernelJet evaluate_kernels(double eta, double tol = 1e-12);

struct TableOptions {
    double eta_max = 30.0;
    int nodes = 400;
    // sinh stretching; larger clusters more nodes near eta = 0
    double stretch = 4.0;
    Execution execution = Execution::parallel;
};

class KernelTable {
public:
    static KernelTable build(const TableOptions& opt = {});

    const std::vector<double>& eta_grid() const { return eta_; }
    const std::vector<KernelJet>& nodes() const { return jets_; }
    double eta_max() const { return eta_.back(); }

    // Cubic Hermite interpolation; eta beyond eta_max returns the last node (the eta -> inf limit).
    KernelValues at(double eta) const;
    KernelJet jet(double eta) const;

    double beta(double eta) const;
    double beta_prime(double eta) const;
    double beta_max() const { return beta_max_; }

private:
    std::vector<double> eta_;
    std::vector<KernelJet> jets_;
    double beta_max_ = 0.0;
};

}  // namespace confluence
