#include "confluence/errors.hpp"
#include "confluence/pde_reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace confluence;

namespace {

const KernelTable& table()
{
    static const KernelTable t = KernelTable::build();
    return t;
}

Scenario bundled(const std::string& file)
{
    return load_scenario(std::string(CONFLUENCE_SCENARIO_DIR) + "/" + file);
}

std::vector<double> nodes(const Scenario& s, int nx)
{
    std::vector<double> x(nx);
    for (int j = 0; j < nx; ++j) x[j] = s.l1 + j * s.length() / (nx - 1);
    return x;
}

// stationary box for runs that ignore the prescribed fronts
Scenario box(double t_end)
{
    Scenario s = make_linear_scenario("box", -0.5, 0.5, 0.5, -0.5, -1.0, 1.0, 2.0);
    s.t_end = t_end;
    return s;
}

// distance between the u = -1/2 and u = 1/2 crossings of an increasing profile
double width(std::span<const double> u, double x0, double dx)
{
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        for (double level : {-0.5, 0.5}) {
            const double a = u[j] - level;
            const double b = u[j + 1] - level;
            if (a < 0.0 && b >= 0.0) (level < 0.0 ? lo : hi) = x0 + dx * (j + a / (a - b));
        }
    }
    return hi - lo;
}

}  // namespace

TEST_CASE("track_fronts finds interpolated zero crossings")
{
    const double eps = 0.05;
    const int nx = 801;
    const double dx = 2.0 / (nx - 1);
    std::vector<double> u(nx);
    for (int j = 0; j < nx; ++j) u[j] = std::tanh((-1.0 + j * dx - 0.3) / eps);
    const auto one = track_fronts(u, -1.0, dx);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0] - 0.3) <= dx);

    for (int j = 0; j < nx; ++j) {
        const double x = -1.0 + j * dx;
        u[j] = 1.0 - std::exp(-(x * x) / (0.5 * eps * eps)) * 2.0;
    }
    CHECK(track_fronts(u, -1.0, dx).size() == 2);

    std::fill(u.begin(), u.end(), 1.0);
    CHECK(track_fronts(u, -1.0, dx).empty());

    // a sliver thinner than two cells counts as merged
    u[400] = -0.01;
    CHECK(track_fronts(u, -1.0, dx).empty());
}

TEST_CASE("default grid respects both step bounds and divides the run")
{
    const Scenario s = bundled("symmetric.scn");
    for (double eps : {0.1, 0.05, 0.0125}) {
        const FdGrid g = default_fd_grid(s, eps);
        const double dx = s.length() / (g.nx - 1);
        CHECK(dx <= eps / 20.0 + 1e-15);
        CHECK(g.dt <= 0.25 * eps * eps * (1.0 + 1e-12));
        CHECK(g.dt <= eps * dx * (1.0 + 1e-12));
        const double steps = s.t_end / g.dt;
        CHECK(std::abs(steps - std::round(steps)) < 1e-6);
        CHECK_NOTHROW(check_fd_grid(s, eps, g));
    }
}

TEST_CASE("grids that cannot carry the layer are refused")
{
    const Scenario s = bundled("symmetric.scn");
    const double eps = 0.05;
    FdGrid g = default_fd_grid(s, eps);
    FdGrid coarse{static_cast<int>(s.length() / (eps / 4.0)) + 1, g.dt};
    CHECK_THROWS_AS(check_fd_grid(s, eps, coarse), ResolutionError);
    FdGrid slow = g;
    slow.dt = eps * eps;
    CHECK_THROWS_AS(check_fd_grid(s, eps, slow), CflViolation);
    FdGrid lazy = g;
    lazy.dt = 2.0 * eps * s.length() / (g.nx - 1);
    CHECK_THROWS_AS(check_fd_grid(s, eps, lazy), CflViolation);
    CHECK_THROWS_AS(check_fd_grid(s, eps, FdGrid{2, g.dt}), ResolutionError);
    CHECK_THROWS_AS(solve_system(s, eps, std::vector<double>(g.nx - 1, 1.0), std::vector<double>(g.nx, 0.0), g),
                    std::invalid_argument);
}

TEST_CASE("overshooting data is reported as an instability")
{
    const Scenario s = box(0.01);
    const double eps = 0.05;
    const FdGrid g = default_fd_grid(s, eps);
    std::vector<double> u(g.nx, 1.0);
    u[g.nx / 2] = 1.9;
    std::vector<double> th(g.nx, 0.0);
    th[g.nx / 2] = 1e4;
    CHECK_THROWS_AS(solve_system(s, eps, u, th, g, {.execution = Execution::serial}), Instability);
}

TEST_CASE("the uniform equilibrium is preserved")
{
    const Scenario s = box(0.05);
    const double eps = 0.05;
    const FdGrid g = default_fd_grid(s, eps);
    const FdSolution fd = solve_system(s, eps, std::vector<double>(g.nx, 1.0), std::vector<double>(g.nx, 0.0), g);
    double worst = 0.0;
    for (int n = 0; n < fd.u.nt(); ++n)
        for (int j = 0; j < fd.u.nx(); ++j)
            worst = std::max({worst, std::abs(fd.u(n, j) - 1.0), std::abs(fd.theta(n, j))});
    CHECK(worst <= 1e-10);
    for (const FdTraceRow& row : fd.trace) CHECK(row.fronts.empty());
}

TEST_CASE("a single relaxed front has width proportional to eps")
{
    const Scenario s = box(0.05);
    std::vector<double> ratio;
    for (double eps : {0.05, 0.025, 0.0125}) {
        const FdGrid g = default_fd_grid(s, eps);
        const auto x = nodes(s, g.nx);
        std::vector<double> u(g.nx);
        // start twice too sharp and let the layer relax
        for (int j = 0; j < g.nx; ++j) u[j] = std::tanh(x[j] / eps);
        const FdSolution fd = solve_system(s, eps, u, std::vector<double>(g.nx, 0.0), g, {.frames = 2});
        const double w = width(fd.u.row(fd.u.nt() - 1), s.l1, fd.u.dx());
        ratio.push_back(w / eps);
        // exact stationary layer tanh(x / (sqrt2 eps)) crosses +-1/2 at sqrt2 eps atanh(1/2)
        CHECK(w / eps == doctest::Approx(2.0 * std::sqrt(2.0) * std::atanh(0.5)).epsilon(0.01));
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    CHECK(*hi / *lo - 1.0 <= 0.05);
}

TEST_CASE("a run from the ansatz tracks the fronts and merges once")
{
    const Scenario s = bundled("symmetric.scn");
    const double eps = 0.025;
    const FrontModel model(s, table(), eps);
    const TemperatureModel tm(model);
    const FdSolution fd = solve_system(tm, default_fd_grid(s, eps));

    // fronts before the merge and none after it
    bool merged = false;
    for (const FdTraceRow& row : fd.trace) {
        if (row.fronts.empty()) merged = true;
        CHECK(row.fronts.size() == (merged ? 0u : 2u));
    }
    CHECK(merged);

    const ComparisonReport rep = compare(model, fd, 10.0 * eps);
    CHECK(rep.front_error <= 5.0 * eps);
    CHECK(rep.t_star_fd < s.t_star);
    CHECK(std::abs(rep.x_star_fd) < 1e-9);
    CHECK(rep.phases_agree);
    CHECK(rep.dip_predicted == doctest::Approx(0.0).epsilon(1e-12));
    // the latent heat drawn at the merge leaves a negative excursion
    CHECK(rep.dip_depth < 0.0);
}

TEST_CASE("the order parameter stays near the wells")
{
    const Scenario s = bundled("asymmetric.scn");
    const double eps = 0.025;
    const FrontModel model(s, table(), eps);
    const FdSolution fd = solve_system(TemperatureModel(model), default_fd_grid(s, eps));
    double umax = 0.0;
    for (int n = 0; n < fd.u.nt(); ++n)
        for (int j = 0; j < fd.u.nx(); ++j) umax = std::max(umax, std::abs(fd.u(n, j)));
    CHECK(umax <= 1.05);
    // a hot wall lifts the well to about 1 + eps theta / 2, so the bound scales with the temperature
    double lifted = 0.0;
    for (int n = 0; n < fd.u.nt(); ++n)
        for (int j = 0; j < fd.u.nx(); ++j)
            lifted = std::max(lifted, std::abs(fd.u(n, j)) - 1.0 - 0.5 * eps * std::max(0.0, fd.theta(n, j)));
    CHECK(lifted <= 0.05);
}

TEST_CASE("total heat changes only through the walls")
{
    const Scenario s = bundled("symmetric.scn");
    std::vector<double> worst;
    for (double eps : {0.05, 0.025}) {
        const FrontModel model(s, table(), eps);
        const FdSolution fd = solve_system(TemperatureModel(model), default_fd_grid(s, eps), {.frames = 2});
        double w = 0.0;
        for (const FdTraceRow& row : fd.trace) w = std::max(w, std::abs(row.balance));
        worst.push_back(w);
    }
    CHECK(worst[0] <= 1e-3);
    // the defect is the quadrature error of the wall flux, second order in dx
    CHECK(worst[1] <= 0.3 * worst[0]);
}

TEST_CASE("halving both steps shrinks the change in the front paths fourfold")
{
    Scenario s = bundled("symmetric.scn");
    s.t_end = 0.3;
    const double eps = 0.05;
    const FrontModel model(s, table(), eps);
    const TemperatureModel tm(model);
    std::vector<std::vector<double>> paths;
    std::vector<double> change;
    for (int r = 0; r < 4; ++r) {
        const FdGrid g{400 * (1 << r) + 1, 1e-4 / (1 << r)};
        const FdSolution fd = solve_system(tm, g, {.frames = 2});
        const std::size_t stride = (fd.trace.size() - 1) / 30;
        std::vector<double> p;
        for (std::size_t k = 0; k < fd.trace.size(); k += stride) p.push_back(fd.trace[k].fronts.at(0));
        if (r > 0) {
            double d = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - paths.back()[i]));
            change.push_back(d);
        }
        paths.push_back(std::move(p));
    }
    CHECK(change[1] <= 0.25 * change[0]);
    // observed order over the finer pair
    CHECK(std::log2(change[1] / change[2]) >= 1.9);
}

TEST_CASE("serial and parallel marches agree")
{
    const Scenario s = bundled("asymmetric.scn");
    const double eps = 0.1;
    Scenario shortened = s;
    shortened.t_end = 0.1;
    const FrontModel model(shortened, table(), eps);
    const TemperatureModel tm(model);
    const FdGrid g = default_fd_grid(shortened, eps);
    const FdSolution a = solve_system(tm, g, {.frames = 3, .execution = Execution::serial});
    const FdSolution b = solve_system(tm, g, {.frames = 3, .execution = Execution::parallel});
    for (int n = 0; n < a.u.nt(); ++n)
        for (int j = 0; j < a.u.nx(); ++j) {
            CHECK(a.u(n, j) == b.u(n, j));
            CHECK(a.theta(n, j) == b.theta(n, j));
        }
}

TEST_CASE("fronts that never meet raise NoConfluence")
{
    const Scenario s = bundled("asymmetric.scn");
    const double eps = 0.05;
    const FrontModel model(s, table(), eps);
    const FdSolution fd = solve_system(TemperatureModel(model), default_fd_grid(s, eps), {.frames = 2});
    // the synthetic temperature cannot supply the latent heat the prescribed motion needs
    CHECK(fd.trace.back().fronts.size() == 2);
    CHECK_THROWS_AS(compare(model, fd, 10.0 * eps), NoConfluence);
}
