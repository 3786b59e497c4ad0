#include "confluence/pde_reference.hpp"

#include "heat_stepper.hpp"

#include "confluence/errors.hpp"
#include "confluence/order_field.hpp"
#include "confluence/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace confluence {

FdGrid default_fd_grid(const Scenario& s, double eps)
{
    FdGrid g;
    g.nx = static_cast<int>(std::ceil(20.0 * s.length() / eps)) + 1;
    const double dx = s.length() / (g.nx - 1);
    const double bound = std::min(0.25 * eps * eps, eps * dx);
    const double steps = std::ceil(s.t_end / bound);
    g.dt = s.t_end / steps;
    return g;
}

void check_fd_grid(const Scenario& s, double eps, const FdGrid& grid)
{
    if (grid.nx < 3 || !(grid.dt > 0.0)) throw ResolutionError("pde: grid needs three nodes and a positive step");
    const double dx = s.length() / (grid.nx - 1);
    if (dx > eps / 8.0 * (1.0 + 1e-12))
        throw ResolutionError("pde: dx = " + std::to_string(dx) + " exceeds eps/8 = " + std::to_string(eps / 8.0));
    if (grid.dt > 0.5 * eps * eps * (1.0 + 1e-12))
        throw CflViolation("pde: dt = " + std::to_string(grid.dt) + " exceeds the explicit reaction bound eps^2/2");
    if (grid.dt > eps * dx * (1.0 + 1e-12))
        throw CflViolation("pde: dt = " + std::to_string(grid.dt) + " exceeds eps dx");
}

std::vector<double> track_fronts(std::span<const double> u, double x0, double dx)
{
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double a = u[j];
        const double b = u[j + 1];
        if ((a > 0.0) == (b > 0.0)) continue;
        out.push_back(x0 + dx * (j + a / (a - b)));
    }
    if (out.size() == 2 && out[1] - out[0] < 2.0 * dx) out.clear();
    return out;
}

namespace {

double trapezoid(const std::vector<double>& v, double dx)
{
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
    return s * dx;
}

}  // namespace

FdSolution solve_system(const Scenario& s, double eps, std::vector<double> u, std::vector<double> theta,
                        const FdGrid& grid, const FdOptions& opt)
{
    check_fd_grid(s, eps, grid);
    const int nx = grid.nx;
    if (static_cast<int>(u.size()) != nx || static_cast<int>(theta.size()) != nx)
        throw std::invalid_argument("pde: initial data does not match the grid");
    const double dx = s.length() / (nx - 1);
    const double dt = grid.dt;
    const long steps = std::lround(s.t_end / dt);
    const int frames = std::max(2, opt.frames);
    const long stride = std::max(1L, steps / (frames - 1));
    const int stored = static_cast<int>(steps / stride) + 1;

    FdSolution sol{GriddedField(s.l1, s.l2, nx, 0.0, stride * dt * (stored - 1), stored),
                   GriddedField(s.l1, s.l2, nx, 0.0, stride * dt * (stored - 1), stored),
                   {},
                   eps,
                   grid};
    const bool neumann = s.bc.kind == BoundaryKind::neumann;
    const std::optional<TravellingReference> ref = s.reference();
    auto walls = [&](double t) -> std::array<double, 2> {
        if (!neumann && s.bc.reference && ref) return {ref->theta(s.l1, t), ref->theta(s.l2, t)};
        return {s.bc.left(t), s.bc.right(t)};
    };
    const detail::HeatStepper u_step(nx, dx, true);
    const detail::HeatStepper th_step(nx, dx, neumann);
    const std::array<double, 2> no_flux{0.0, 0.0};
    if (!neumann) {
        const auto b = walls(0.0);
        theta.front() = b[0];
        theta.back() = b[1];
    }

    std::vector<double> reaction(nx), forcing(nx), source(nx), u_old(nx);
    auto flux = [&](const std::vector<double>& th) {
        const double left = (-3.0 * th[0] + 4.0 * th[1] - th[2]) / (2.0 * dx);
        const double right = (3.0 * th[nx - 1] - 4.0 * th[nx - 2] + th[nx - 3]) / (2.0 * dx);
        return right - left;
    };
    auto mass = [&]() {
        std::vector<double> m(nx);
        for (int j = 0; j < nx; ++j) m[j] = u[j] + theta[j];
        return trapezoid(m, dx);
    };
    const double mass0 = mass();
    double flux_integral = 0.0;
    double flux_prev = flux(theta);

    double mid = 0.5 * (s.phi10(0.0) + s.phi20(0.0));
    auto record = [&](double t) {
        FdTraceRow row;
        row.t = t;
        row.fronts = track_fronts(u, s.l1, dx);
        if (row.fronts.size() == 2) mid = 0.5 * (row.fronts[0] + row.fronts[1]);
        row.mid = mid;
        const double r = std::clamp((mid - s.l1) / dx, 0.0, nx - 1.000001);
        const auto j = static_cast<int>(r);
        row.theta_mid = theta[j] + (r - j) * (theta[j + 1] - theta[j]);
        const auto it = std::min_element(theta.begin(), theta.end());
        row.theta_min = *it;
        row.theta_min_at = s.l1 + dx * static_cast<double>(it - theta.begin());
        row.balance = mass() - mass0 - flux_integral;
        sol.trace.push_back(std::move(row));
    };
    auto store = [&](int k) {
        for (int j = 0; j < nx; ++j) {
            sol.u(k, j) = u[j];
            sol.theta(k, j) = theta[j];
        }
    };
    store(0);
    record(0.0);

    const bool par = opt.execution == Execution::parallel;
    // Crank-Nicolson diffusion with second-order Adams-Bashforth reaction once a history exists
    bool history = false;
    double h_prev = 0.0;
    auto advance = [&](double t, double h, double weight, bool extrapolate) {
        u_old = u;
#pragma omp parallel for schedule(static) if (par)
        for (int j = 0; j < nx; ++j) {
            const double r = (u[j] - u[j] * u[j] * u[j]) / (eps * eps) + s.kappa * theta[j] / eps;
            forcing[j] = extrapolate && history ? r + 0.5 * h / h_prev * (r - reaction[j]) : r;
            reaction[j] = r;
        }
        history = true;
        h_prev = h;
        u_step.step(u, forcing, h, weight, no_flux, no_flux);
#pragma omp parallel for schedule(static) if (par)
        for (int j = 0; j < nx; ++j) source[j] = -(u[j] - u_old[j]) / h;
        th_step.step(theta, source, h, weight, walls(t), walls(t + h));
        for (int j = 0; j < nx; ++j)
            if (!(std::abs(u[j]) <= 2.0))
                throw Instability("pde: |u| exceeded 2 at x = " + std::to_string(s.l1 + j * dx) +
                                  ", t = " + std::to_string(t + h));
        const double f = flux(theta);
        flux_integral += 0.5 * h * (flux_prev + f);
        flux_prev = f;
    };

    for (long n = 0; n < steps; ++n) {
        const double t = n * dt;
        if (n == 0) {
            // implicit half steps keep the kinks of the initial temperature from ringing
            advance(0.0, 0.5 * dt, 1.0, false);
            advance(0.5 * dt, 0.5 * dt, 1.0, false);
        } else {
            advance(t, dt, 0.5, true);
        }
        record(t + dt);
        if ((n + 1) % stride == 0 && (n + 1) / stride < stored) store(static_cast<int>((n + 1) / stride));
    }
    return sol;
}

FdSolution solve_system(const TemperatureModel& tm, const FdGrid& grid, const FdOptions& opt)
{
    const Scenario& s = tm.scenario();
    const double eps = tm.fronts().epsilon();
    check_fd_grid(s, eps, grid);
    const double dx = s.length() / (grid.nx - 1);
    std::vector<double> xs(grid.nx);
    for (int j = 0; j < grid.nx; ++j) xs[j] = s.l1 + j * dx;
    const FrontState f0 = tm.fronts().at(0.0);
    const auto u = sample_order_field(xs, f0, opt.execution);
    std::vector<double> u0(grid.nx), th0(grid.nx);
    for (int j = 0; j < grid.nx; ++j) {
        u0[j] = u[j].u;
        // the heat potentials and the remainder both start from zero
        th0[j] = tm.outer(xs[j], 0.0).value;
    }
    return solve_system(s, eps, std::move(u0), std::move(th0), grid, opt);
}

double measure_dip(const FdSolution& fd, double t_merge, double window)
{
    const auto& tr = fd.trace;
    auto at = [&](double t) {
        const auto it = std::lower_bound(tr.begin(), tr.end(), t,
                                         [](const FdTraceRow& r, double v) { return r.t < v; });
        if (it == tr.begin()) return tr.front().theta_mid;
        if (it == tr.end()) return tr.back().theta_mid;
        const auto& b = *it;
        const auto& a = *(it - 1);
        return a.theta_mid + (t - a.t) / (b.t - a.t) * (b.theta_mid - a.theta_mid);
    };
    const double ta = t_merge - 3.0 * window;
    const double tb = t_merge + 3.0 * window;
    if (ta < tr.front().t || tb > tr.back().t)
        throw NoConfluence("pde: the merge is too close to the ends of the run to measure the dip");
    const double ya = at(ta);
    const double yb = at(tb);
    double dip = 0.0;
    for (const FdTraceRow& r : tr) {
        if (std::abs(r.t - t_merge) > window) continue;
        dip = std::min(dip, r.theta_mid - (ya + (r.t - ta) / (tb - ta) * (yb - ya)));
    }
    return dip;
}

ComparisonReport compare(const FrontModel& model, const FdSolution& fd, double delta)
{
    const Scenario& s = model.scenario();
    ComparisonReport rep;
    rep.t_star = s.t_star;
    bool seen_two = false;
    bool merged = false;
    double last_mid = 0.0;
    for (const FdTraceRow& row : fd.trace) {
        if (row.fronts.size() == 2) {
            seen_two = true;
            last_mid = 0.5 * (row.fronts[0] + row.fronts[1]);
            if (row.t <= s.t_star - delta) {
                const FrontState f = model.at(row.t);
                rep.front_error = std::max({rep.front_error, std::abs(row.fronts[0] - f.phi1),
                                            std::abs(row.fronts[1] - f.phi2)});
            }
        } else if (row.fronts.empty() && seen_two && !merged) {
            merged = true;
            rep.t_star_fd = row.t;
            rep.x_star_fd = last_mid;
        }
    }
    if (!merged) throw NoConfluence("pde: the fronts never merged before t_end");

    // two fronts before the earlier contact, none after the later one
    const double before = std::min(rep.t_star, rep.t_star_fd);
    const double after = std::max(rep.t_star, rep.t_star_fd);
    bool ok = true;
    for (const FdTraceRow& row : fd.trace) {
        const bool fd_two = row.fronts.size() == 2;
        const bool fd_none = row.fronts.empty();
        if (row.t < before - 2.0 * fd.grid.dt) {
            const bool model_two = model.at(row.t).psi() > 0.0;
            ok = ok && fd_two && model_two;
        } else if (row.t > after + 2.0 * fd.grid.dt) {
            ok = ok && fd_none;
        }
    }
    rep.phases_agree = ok;
    rep.dip_predicted = -0.5 * (s.phi10.d(s.t_star) + s.phi20.d(s.t_star));
    const double closing = std::abs(s.psi0_t(s.t_star));
    rep.dip_depth = measure_dip(fd, rep.t_star_fd, 4.0 * fd.epsilon / std::max(closing, 1e-12));
    return rep;
}

}  // namespace confluence
