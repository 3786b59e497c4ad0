#pragma once

#include "confluence/execution.hpp"
#include "confluence/front_dynamics.hpp"
#include "confluence/scenario.hpp"
#include "confluence/temperature_field.hpp"

#include <span>
#include <vector>

namespace confluence {

// Finite-difference discretization of
//   u_t = u_xx + (u - u^3) / eps^2 + kappa theta / eps,   theta_t + u_t = theta_xx
// with Crank-Nicolson diffusion and explicit reaction and coupling.
struct FdGrid {
    int nx = 0;
    double dt = 0.0;
};

// dx = eps / 20 and dt = min(eps^2 / 4, eps dx), shrunk so that t_end is a whole number of steps.
FdGrid default_fd_grid(const Scenario& s, double eps);
// Throws ResolutionError when dx > eps / 8 and CflViolation when dt breaks either step bound.
void check_fd_grid(const Scenario& s, double eps, const FdGrid& grid);

struct FdOptions {
    // stored frames of the full fields, including t = 0 and t_end
    int frames = 201;
    Execution execution = Execution::parallel;
};

// Per-step diagnostics.
struct FdTraceRow {
    double t = 0.0;
    std::vector<double> fronts;
    double theta_min = 0.0;
    double theta_min_at = 0.0;
    // theta at the midpoint of the two fronts, or at the last such midpoint once they have merged
    double theta_mid = 0.0;
    double mid = 0.0;
    // int (theta + u) minus its initial value minus the time-integrated wall flux
    double balance = 0.0;
};

struct FdSolution {
    GriddedField u;
    GriddedField theta;
    std::vector<FdTraceRow> trace;
    double epsilon = 0.0;
    FdGrid grid;
};

// March from the given initial data (sampled on the nx uniform nodes of [l1, l2]).
FdSolution solve_system(const Scenario& s, double eps, std::vector<double> u0, std::vector<double> theta0,
                        const FdGrid& grid, const FdOptions& opt = {});
// March from the asymptotic fields at t = 0.
FdSolution solve_system(const TemperatureModel& tm, const FdGrid& grid, const FdOptions& opt = {});

// Zero crossings of u by linear interpolation; two crossings closer than 2 dx count as merged.
std::vector<double> track_fronts(std::span<const double> u, double x0, double dx);

struct ComparisonReport {
    double front_error = 0.0;   // max |front_fd - phi_i| over t <= t* - delta
    double t_star = 0.0;
    double t_star_fd = 0.0;     // first step with no front after two
    double x_star_fd = 0.0;     // where the fd fronts met
    bool phases_agree = false;  // two fronts before both contact times, none after both
    double dip_depth = 0.0;
    double dip_predicted = 0.0;
};

// delta is the pre-contact safety margin. Throws NoConfluence when the fd fronts never merge.
ComparisonReport compare(const FrontModel& model, const FdSolution& fd, double delta);

// Most negative excursion of the midpoint temperature within `window` of the merge time, measured
// from the straight line through its values at t_merge -+ 3 window.
double measure_dip(const FdSolution& fd, double t_merge, double window);

}  // namespace confluence
