#pragma once

#include "confluence/execution.hpp"
#include "confluence/front_dynamics.hpp"

#include <array>
#include <span>
#include <vector>

namespace confluence {

struct FieldSample {
    double u = 0.0;
    double u_t = 0.0;
    double u_x = 0.0;
};

// u = Omega(beta (phi1 - x) / eps, beta rho) with its exact partials; the time
// derivative carries the beta_t = beta_tau psi0_t / eps contribution.
FieldSample u_check(double x, const FrontState& f);

std::vector<FieldSample> sample_order_field(std::span<const double> x, const FrontState& f,
                                            Execution exec = Execution::parallel);

struct DeltaTerm {
    double coefficient = 0.0;
    double location = 0.0;
};

// u_t = A1 delta(x - phi1) + A2 delta(x - phi2) + O(eps) in the weak sense.
std::array<DeltaTerm, 2> ut_delta_expansion(const FrontState& f);

}  // namespace confluence
