#include "confluence/temperature_field.hpp"

#include "heat_stepper.hpp"

#include "confluence/errors.hpp"
#include "confluence/profiles.hpp"
#include "confluence/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace confluence {

TemperatureCoefficients temperature_coefficients(const FrontState& f, const Scenario& s)
{
    TemperatureCoefficients c;
    const double t = f.t;
    c.t = t;
    c.phi1 = f.phi1;
    c.phi2 = f.phi2;
    c.mid = f.midpoint();
    // eps rho rather than phi2 - phi1, which loses every digit once the fronts have merged
    c.psi = f.epsilon * f.s.rho;
    const double g1p = s.gamma1_plus(t);
    const double g1m = s.gamma1_minus(t);
    const double g2p = s.gamma2_plus(t);
    const double g2m = s.gamma2_minus(t);
    c.gamma1_minus = g1m;
    c.gamma2_plus = g2p;
    const double b = switch_B(f.tau());
    c.b = b;
    // W = B gamma^- - (1 - B) gamma^, both linear in r
    c.w0 = b * 0.5 * (g1p + g2m) - (1.0 - b) * 0.5 * (g1m + g2p);
    c.c1 = -b * (g1p - g2m) + (1.0 - b) * (g1m - g2p);
    const double k = kinetic_coefficient(s.kappa);
    // linear across the whole line with an O(1) slope; a slope fitted to both traces would scale like 1/psi
    c.x_star = s.x_star();
    c.i0 = 0.5 * k * (f.phi1_t - f.phi2_t);
    c.i1 = -0.5 * k * (f.phi1_t + f.phi2_t);
    c.jump1 = b * (g1p + g1m);
    c.jump2 = b * (g2p + g2m);
    return c;
}

double i_part(double x, const TemperatureCoefficients& c)
{
    return c.i0 + c.i1 * (x - c.x_star);
}

double model_temperature(double x, const TemperatureCoefficients& c)
{
    double v;
    if (x < c.phi1) v = c.gamma1_minus * (c.phi1 - x);
    else if (x > c.phi2 || c.psi <= 0.0) v = c.gamma2_plus * (x - c.phi2);
    else {
        const double r = std::clamp((x - c.mid) / c.psi, -0.5, 0.5);
        v = (c.w0 + c.c1 * r) * c.psi * (0.25 - r * r);
    }
    return v + i_part(x, c);
}

double model_temperature_x(double x, const TemperatureCoefficients& c)
{
    double v;
    if (x < c.phi1) v = -c.gamma1_minus;
    else if (x >= c.phi2 || c.psi <= 0.0) v = c.gamma2_plus;
    else {
        const double r = std::clamp((x - c.mid) / c.psi, -0.5, 0.5);
        v = c.c1 * (0.25 - r * r) - 2.0 * r * (c.w0 + c.c1 * r);
    }
    return v + c.i1;
}

double interior_source(double x, const TemperatureCoefficients& c)
{
    if (!(x > c.phi1 && x < c.phi2) || c.psi <= 0.0) return 0.0;
    const double r = (x - c.mid) / c.psi;
    return -(2.0 * c.w0 + 6.0 * c.c1 * r) / c.psi;
}

double interior_source_integral(double a, double b, const TemperatureCoefficients& c)
{
    if (c.psi <= 1e-14 * (1.0 + std::abs(c.mid))) {
        // below rounding the interval is a point carrying the even mass
        return c.mid >= a && c.mid < b ? -2.0 * c.w0 : 0.0;
    }
    const double lo = std::max(a, c.phi1);
    const double hi = std::min(b, c.phi2);
    if (!(hi > lo)) return 0.0;
    const double ra = std::clamp((lo - c.mid) / c.psi, -0.5, 0.5);
    const double rb = std::clamp((hi - c.mid) / c.psi, -0.5, 0.5);
    return -(2.0 * c.w0 * (rb - ra) + 3.0 * c.c1 * (rb * rb - ra * ra));
}

// ---- heat potentials ----

namespace {

// Densities of the four sources on (phi1, phi2): alpha / psi (even) and beta s / psi^2 (odd).
struct SourceNode {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double mid = 0.0;
    double psi = 0.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    double sigma = 0.0;   // sqrt(t - t')
    double weight = 0.0;  // quadrature weight times the Jacobian 2 sigma
};

SourceNode source_at(const FrontModel& model, double t_prime)
{
    const FrontState f = model.at(t_prime);
    const Scenario& s = model.scenario();
    SourceNode n;
    n.phi1 = f.phi1;
    n.phi2 = f.phi2;
    n.mid = f.midpoint();
    n.psi = f.epsilon * f.s.rho;
    const double b = switch_B(f.tau());
    const double t = t_prime;
    n.alpha1 = -b * (s.gamma1_plus(t) + s.gamma2_minus(t));
    n.beta1 = 6.0 * b * (s.gamma1_plus(t) - s.gamma2_minus(t));
    n.alpha2 = (1.0 - b) * (s.gamma1_minus(t) + s.gamma2_plus(t));
    n.beta2 = -6.0 * (1.0 - b) * (s.gamma1_minus(t) - s.gamma2_plus(t));
    return n;
}

// erf(a) - erf(b) without cancellation in the tails
double erf_diff(double a, double b)
{
    if (a > 0.0 && b > 0.0) return std::erfc(b) - std::erfc(a);
    if (a < 0.0 && b < 0.0) return std::erfc(-a) - std::erfc(-b);
    return std::erf(a) - std::erf(b);
}

// Inner xi-integrals of the four densities against the heat kernel of time sigma^2.
std::array<double, 4> inner(const SourceNode& n, double x)
{
    std::array<double, 4> out{};
    const double sigma = n.sigma;
    if (n.psi <= 0.0 || sigma <= 0.0) {
        // a width-zero interval carries a point mass alpha at the merge point
        if (n.psi <= 0.0 && sigma > 0.0) {
            const double y = x - n.mid;
            const double g = std::exp(-y * y / (4.0 * sigma * sigma)) / (2.0 * std::sqrt(std::numbers::pi) * sigma);
            out[0] = n.alpha1 * g;
            out[2] = n.alpha2 * g;
        }
        return out;
    }
    const double y = x - n.mid;
    const double r = sigma * sigma;
    if (n.psi < 1e-3 * sigma) {
        // moment expansion about the midpoint
        const double g = std::exp(-y * y / (4.0 * r)) / (2.0 * std::sqrt(std::numbers::pi) * sigma);
        const double g1 = -y / (2.0 * r) * g;
        const double g2 = (y * y / (4.0 * r * r) - 1.0 / (2.0 * r)) * g;
        const double g3 = (-y * y * y / (8.0 * r * r * r) + 3.0 * y / (4.0 * r * r)) * g;
        const double p2 = n.psi * n.psi;
        const double even = g + p2 * g2 / 24.0;
        const double odd = -g1 * n.psi / 12.0 - g3 * n.psi * p2 / 480.0;
        out[0] = n.alpha1 * even;
        out[1] = n.beta1 * odd;
        out[2] = n.alpha2 * even;
        out[3] = n.beta2 * odd;
        return out;
    }
    const double two_sigma = 2.0 * sigma;
    const double e = 0.5 * erf_diff((x - n.phi1) / two_sigma, (x - n.phi2) / two_sigma);
    const double m = sigma / std::sqrt(std::numbers::pi) *
                     (std::exp(-(n.phi1 - x) * (n.phi1 - x) / (4.0 * r)) - std::exp(-(n.phi2 - x) * (n.phi2 - x) / (4.0 * r)));
    const double even = e / n.psi;
    const double odd = (y * e + m) / (n.psi * n.psi);
    out[0] = n.alpha1 * even;
    out[1] = n.beta1 * odd;
    out[2] = n.alpha2 * even;
    out[3] = n.beta2 * odd;
    return out;
}

constexpr int kGaussPerPanel = 12;
constexpr int kGrading = 36;
constexpr int kUniformPanels = 16;

}  // namespace

Duhamel::Duhamel(const FrontModel& model) : model_(&model)
{
    const Scenario& s = model.scenario();
    const double eps = model.epsilon();
    const double slope = std::abs(s.psi0_t(s.t_star));
    for (double tau : {-60.0, -30.0, -15.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 15.0, 30.0, 60.0})
        break_times_.push_back(s.t_star - tau * eps / slope);
    const GaussRule g = gauss_legendre(kGaussPerPanel);
    gauss_x_ = g.nodes;
    gauss_w_ = g.weights;
}

std::vector<double> Duhamel::sigma_breaks(double t) const
{
    const double top = std::sqrt(t);
    std::vector<double> b{0.0, top};
    for (int k = 1; k <= kGrading; ++k) b.push_back(top * std::ldexp(1.0, -k));
    for (int k = 1; k < kUniformPanels; ++k) b.push_back(top * k / kUniformPanels);
    for (double tp : break_times_)
        if (tp > 0.0 && tp < t) b.push_back(std::sqrt(t - tp));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

std::vector<DuhamelParts> Duhamel::at(std::span<const double> x, double t, Execution exec) const
{
    std::vector<DuhamelParts> out(x.size());
    if (!(t > 0.0)) return out;
    const std::vector<double> br = sigma_breaks(t);
    std::vector<SourceNode> nodes;
    nodes.reserve((br.size() - 1) * gauss_x_.size());
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        const double c = 0.5 * (br[p] + br[p + 1]);
        const double h = 0.5 * (br[p + 1] - br[p]);
        for (std::size_t q = 0; q < gauss_x_.size(); ++q) {
            const double sigma = c + h * gauss_x_[q];
            SourceNode n = source_at(*model_, t - sigma * sigma);
            n.sigma = sigma;
            n.weight = h * gauss_w_[q] * 2.0 * sigma;
            nodes.push_back(n);
        }
    }
    const int nx = static_cast<int>(x.size());
    auto one = [&](int i) {
        std::array<double, 4> acc{};
        for (const SourceNode& n : nodes) {
            const auto v = inner(n, x[i]);
            for (int k = 0; k < 4; ++k) acc[k] += n.weight * v[k];
        }
        out[i] = {acc[0], acc[1], acc[2], acc[3]};
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i) one(i);
    } else {
        for (int i = 0; i < nx; ++i) one(i);
    }
    return out;
}

DuhamelParts Duhamel::at(double x, double t) const
{
    const double xs[1] = {x};
    return at(std::span<const double>(xs, 1), t, Execution::serial)[0];
}

DuhamelParts Duhamel::adaptive(double x, double t, double tol) const
{
    if (!(t > 0.0)) return {};
    const std::vector<double> br = sigma_breaks(t);
    QuadratureOptions q;
    q.abs_tol = tol;
    q.initial_panels = static_cast<int>(br.size());
    q.max_panels = 200000;
    auto f = [&](double sigma) {
        if (sigma <= 0.0) return std::array<double, 4>{};
        SourceNode n = source_at(*model_, t - sigma * sigma);
        n.sigma = sigma;
        auto v = inner(n, x);
        for (double& e : v) e *= 2.0 * sigma;
        return v;
    };
    const auto r = integrate_vector<4>(f, 0.0, std::sqrt(t), q, br);
    return {r[0], r[1], r[2], r[3]};
}

// ---- lattice ----

GriddedField::GriddedField(double x0, double x1, int nx, double t0, double t1, int nt)
    : x0_(x0), dx_((x1 - x0) / (nx - 1)), t0_(t0), dt_((t1 - t0) / (nt - 1)), nx_(nx), nt_(nt),
      v_(static_cast<std::size_t>(nx) * nt, 0.0)
{
    if (nx < 3 || nt < 2) throw std::invalid_argument("lattice needs nx >= 3 and nt >= 2");
}

double GriddedField::interpolate(double x, double t) const
{
    const double fx = std::clamp((x - x0_) / dx_, 0.0, nx_ - 1.0);
    const double ft = std::clamp((t - t0_) / dt_, 0.0, nt_ - 1.0);
    const int j = std::min(static_cast<int>(fx), nx_ - 2);
    const int n = std::min(static_cast<int>(ft), nt_ - 2);
    const double a = fx - j;
    const double b = ft - n;
    const auto& v = *this;
    return (1 - b) * ((1 - a) * v(n, j) + a * v(n, j + 1)) + b * ((1 - a) * v(n + 1, j) + a * v(n + 1, j + 1));
}

int GriddedField::nearest_step(double t) const
{
    return std::clamp(static_cast<int>(std::lround((t - t0_) / dt_)), 0, nt_ - 1);
}

// ---- temperature model ----

TemperatureModel::TemperatureModel(const FrontModel& model)
    : fronts_(&model), cutoff_(model.scenario()), duhamel_(model), reference_(model.scenario().reference()),
      kinetic_(kinetic_coefficient(model.scenario().kappa))
{
}

TemperatureCoefficients TemperatureModel::coefficients(double t) const
{
    return temperature_coefficients(fronts_->at(t), scenario());
}

double TemperatureModel::e_model(double x, const TemperatureCoefficients& c) const
{
    return cutoff_(x) * model_temperature(x, c);
}

double TemperatureModel::q_check(double x, double t, const TemperatureCoefficients& c) const
{
    if (!reference_) return 0.0;
    return reference_->theta(x, t) - e_model(x, c);
}

TemperatureModel::Outer TemperatureModel::outer(double x, double t, double h) const
{
    Outer o;
    if (reference_) {
        o.value = reference_->theta(x, t);
        o.d_x = reference_->theta_x(x, t);
        o.d_t = reference_->theta_t(x, t);
        return o;
    }
    const TemperatureCoefficients c = coefficients(t);
    const double e = cutoff_(x);
    const double m = model_temperature(x, c);
    o.value = e * m;
    o.d_x = cutoff_.d(x) * m + e * model_temperature_x(x, c);
    o.d_t = e * (model_temperature(x, coefficients(t + h)) - model_temperature(x, coefficients(t - h))) / (2.0 * h);
    return o;
}

std::vector<double> TemperatureModel::forcing(std::span<const double> x, double dx, double t) const
{
    std::vector<double> f(x.size(), 0.0);
    const TemperatureCoefficients c = coefficients(t);
    if (reference_) {
        // the travelling solution is caloric off the fronts, so only the interior source is left
        for (std::size_t j = 0; j < x.size(); ++j)
            f[j] = -cutoff_(x[j]) * interior_source_integral(x[j] - 0.5 * dx, x[j] + 0.5 * dx, c) / dx;
        return f;
    }
    const double h = 1e-6;
    const TemperatureCoefficients cp = coefficients(t + h);
    const TemperatureCoefficients cm = coefficients(t - h);
    static const GaussRule g = gauss_legendre(3);
    for (std::size_t j = 0; j < x.size(); ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            const double xq = x[j] + 0.5 * dx * g.nodes[q];
            const double e = cutoff_(xq);
            const double m = model_temperature(xq, c);
            const double m_t = (model_temperature(xq, cp) - model_temperature(xq, cm)) / (2.0 * h);
            acc += 0.5 * g.weights[q] * (-e * m_t + cutoff_.dd(xq) * m + 2.0 * cutoff_.d(xq) * model_temperature_x(xq, c));
        }
        f[j] = acc;
    }
    return f;
}

std::array<double, 2> TemperatureModel::boundary_data(double t) const
{
    const Scenario& s = scenario();
    const std::array<double, 2> walls{s.l1, s.l2};
    std::array<double, 2> out{};
    if (s.bc.kind == BoundaryKind::neumann) {
        const double h = 1e-5 * s.length();
        const std::array<double, 4> xs{s.l1 - h, s.l1 + h, s.l2 - h, s.l2 + h};
        const auto q = duhamel_.at(xs, t, Execution::serial);
        out[0] = s.bc.left(t) - (q[1].sum() - q[0].sum()) / (2.0 * h);
        out[1] = s.bc.right(t) - (q[3].sum() - q[2].sum()) / (2.0 * h);
        if (!reference_) return out;
        out[0] -= reference_->theta_x(s.l1, t);
        out[1] -= reference_->theta_x(s.l2, t);
        return out;
    }
    const auto q = duhamel_.at(walls, t, Execution::serial);
    for (int k = 0; k < 2; ++k) {
        double target;
        if (s.bc.reference && reference_) target = reference_->theta(walls[k], t);
        else target = k == 0 ? s.bc.left(t) : s.bc.right(t);
        // e vanishes at the walls, so only q_check and q_hat need subtracting
        const double qc = reference_ ? reference_->theta(walls[k], t) : 0.0;
        out[k] = target - qc - q[k].sum();
    }
    return out;
}

// ---- heat solves ----

namespace {

using detail::HeatStepper;

template <class Forcing, class Boundary>
GriddedField march(double l1, double l2, double t_end, const GridSpec& grid, bool neumann, const Forcing& forcing,
                   const Boundary& boundary)
{
    GriddedField out(l1, l2, grid.nx, 0.0, t_end, grid.nt);
    const double dx = out.dx();
    const double dt = out.dt();
    std::vector<double> xs(grid.nx);
    for (int j = 0; j < grid.nx; ++j) xs[j] = out.x(j);
    const HeatStepper stepper(grid.nx, dx, neumann);
    std::vector<double> q(grid.nx, 0.0);
    const std::array<double, 2> b0 = boundary(0, 0.0);
    if (!neumann) {
        q[0] = b0[0];
        q[grid.nx - 1] = b0[1];
    }
    for (int j = 0; j < grid.nx; ++j) out(0, j) = q[j];
    for (int n = 0; n + 1 < grid.nt; ++n) {
        const double t = out.t(n);
        if (n == 0) {
            // two implicit half steps damp the start-up transient
            const std::array<double, 2> bh = boundary(-1, 0.5 * dt);
            const std::array<double, 2> b1 = boundary(1, dt);
            stepper.step(q, forcing(xs, dx, 0.5 * dt), 0.5 * dt, 1.0, b0, bh);
            stepper.step(q, forcing(xs, dx, dt), 0.5 * dt, 1.0, bh, b1);
        } else {
            stepper.step(q, forcing(xs, dx, t + 0.5 * dt), dt, 0.5, boundary(n, t), boundary(n + 1, t + dt));
        }
        for (int j = 0; j < grid.nx; ++j) out(n + 1, j) = q[j];
    }
    return out;
}

}  // namespace

GridSpec default_grid(const FrontModel& model, double refine)
{
    const Scenario& s = model.scenario();
    const double eps = model.epsilon();
    GridSpec g;
    g.nx = static_cast<int>(std::ceil(s.length() / (eps / (8.0 * refine)))) + 1;
    const double dx = s.length() / (g.nx - 1);
    double vmax = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const FrontState f = model.at(s.t_end * i / 2000.0);
        vmax = std::max({vmax, std::abs(f.phi1_t), std::abs(f.phi2_t)});
    }
    const double dt = 0.8 * dx / std::max(vmax, 1e-12);
    g.nt = static_cast<int>(std::ceil(s.t_end / dt)) + 1;
    return g;
}

GriddedField solve_q_smooth(const TemperatureModel& tm, const GridSpec& grid, Execution exec)
{
    const Scenario& s = tm.scenario();
    const double eps = tm.fronts().epsilon();
    if (grid.nx < 3 || grid.nt < 2) throw ResolutionError("q_smooth grid needs nx >= 3 and nt >= 2");
    const double dx = s.length() / (grid.nx - 1);
    const double dt = s.t_end / (grid.nt - 1);
    if (dx > eps / 8.0 * (1.0 + 1e-12))
        throw ResolutionError("q_smooth grid: dx = " + std::to_string(dx) + " exceeds eps / 8 = " + std::to_string(eps / 8.0));
    double vmax = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const FrontState f = tm.fronts().at(s.t_end * i / 2000.0);
        vmax = std::max({vmax, std::abs(f.phi1_t), std::abs(f.phi2_t)});
    }
    if (vmax * dt > dx * (1.0 + 1e-12))
        throw CflViolation("q_smooth grid: fronts cross " + std::to_string(vmax * dt / dx) + " cells per step");

    // wall data at every level, and once at the first half step
    std::vector<std::array<double, 2>> walls(grid.nt);
    const int nt = grid.nt;
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int n = 0; n < nt; ++n) walls[n] = tm.boundary_data(n * dt);
    } else {
        for (int n = 0; n < nt; ++n) walls[n] = tm.boundary_data(n * dt);
    }
    const std::array<double, 2> half = tm.boundary_data(0.5 * dt);
    auto boundary = [&](int n, double) { return n < 0 ? half : walls[n]; };
    auto forcing = [&](const std::vector<double>& xs, double h, double t) { return tm.forcing(xs, h, t); };
    return march(s.l1, s.l2, s.t_end, grid, s.bc.kind == BoundaryKind::neumann, forcing, boundary);
}

GriddedField solve_heat_dirichlet(double l1, double l2, double t_end, const GridSpec& grid,
                                  const std::function<double(double, double)>& forcing)
{
    auto f = [&](const std::vector<double>& xs, double, double t) {
        std::vector<double> v(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) v[j] = forcing(xs[j], t);
        return v;
    };
    auto boundary = [](int, double) { return std::array<double, 2>{0.0, 0.0}; };
    return march(l1, l2, t_end, grid, false, f, boundary);
}

// ---- assembly ----

ThetaField::ThetaField(const TemperatureModel& tm, GriddedField q_smooth) : tm_(&tm), q_(std::move(q_smooth)) {}

ThetaParts ThetaField::at(double x, double t) const
{
    const double xs[1] = {x};
    return at(std::span<const double>(xs, 1), t, Execution::serial)[0];
}

std::vector<ThetaParts> ThetaField::at(std::span<const double> x, double t, Execution exec) const
{
    const TemperatureCoefficients c = tm_->coefficients(t);
    const auto qh = tm_->duhamel().at(x, t, exec);
    std::vector<ThetaParts> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ThetaParts& p = out[i];
        const double e = tm_->cutoff()(x[i]);
        p.model_t = e * model_temperature(x[i], c);
        p.i_part = e * i_part(x[i], c);
        p.q_check = tm_->q_check(x[i], t, c);
        p.q_hat = qh[i].sum();
        p.q_smooth = q_.interpolate(x[i], t);
    }
    return out;
}

}  // namespace confluence
