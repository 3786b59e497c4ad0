#include "confluence/weak_residuals.hpp"

#include "confluence/errors.hpp"
#include "confluence/kernels.hpp"
#include "confluence/order_field.hpp"
#include "confluence/profiles.hpp"
#include "confluence/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace confluence {

// ---- test functions ----

TestFunction::TestFunction(double center, double width, Kind kind, std::string name)
    : center_(center), width_(width), kind_(kind), name_(std::move(name))
{
    if (!(width > 0.0) || !std::isfinite(center)) throw std::invalid_argument("test function needs a positive width");
}

std::array<double, 3> TestFunction::jet(double x) const noexcept
{
    const double r = (x - center_) / width_;
    if (!(std::abs(r) < 1.0)) return {0.0, 0.0, 0.0};
    const double m = 1.0 - r * r;
    // b = exp(1 + g), g = -1/m
    const double b = std::exp(1.0 - 1.0 / m);
    const double g1 = -2.0 * r / (m * m);
    const double g2 = -(2.0 + 6.0 * r * r) / (m * m * m);
    const double g3 = -24.0 * r * (1.0 + r * r) / (m * m * m * m);
    const double b1 = g1 * b;
    const double b2 = (g2 + g1 * g1) * b;
    const double b3 = (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * b;
    const double w = width_;
    if (kind_ == Kind::bump) return {b, b1 / w, b2 / (w * w)};
    return {b1, b2 / w, b3 / (w * w)};
}

std::vector<TestFunction> test_family(const Scenario& s, const FrontState& f)
{
    std::vector<TestFunction> fam;
    const double len = s.length();
    const std::array<double, 3> widths = {len / 4.0, len / 6.0, len / 10.0};
    for (std::size_t k = 0; k < widths.size(); ++k) {
        const double w = widths[k];
        const double first = s.l1 + 1.05 * w;
        const double step = (len - 2.1 * w) / 3.0;
        for (int j = 0; j < 4; ++j)
            fam.emplace_back(first + j * step, w, TestFunction::Kind::bump,
                             "tile" + std::to_string(k) + "_" + std::to_string(j));
    }
    const std::array<double, 2> fronts = {f.phi1, f.phi2};
    for (int i = 0; i < 2; ++i) {
        const double c = std::clamp(fronts[i], s.l1 + 0.05 * len, s.l2 - 0.05 * len);
        const double w = std::min(len / 8.0, 0.95 * std::min(c - s.l1, s.l2 - c));
        const std::string tag = "front" + std::to_string(i + 1);
        fam.emplace_back(c, w, TestFunction::Kind::bump, tag);
        fam.emplace_back(c, w, TestFunction::Kind::bump_derivative, tag + "_d");
    }
    return fam;
}

// ---- functionals ----

double heat_functional(std::span<const WeakSample> samples, const TestFunction& zeta)
{
    double acc = 0.0;
    for (const WeakSample& p : samples) {
        if (p.x <= zeta.lo() || p.x >= zeta.hi()) continue;
        const auto z = zeta.jet(p.x);
        acc += p.w * ((p.u_t + p.theta_t + p.source) * z[0] + p.theta_x * z[1] - p.q_smooth * z[2]);
    }
    return acc;
}

double allen_cahn_functional(std::span<const WeakSample> samples, const TestFunction& xi, double eps, double kappa)
{
    double acc = 0.0;
    for (const WeakSample& p : samples) {
        if (p.x <= xi.lo() || p.x >= xi.hi()) continue;
        const auto z = xi.jet(p.x);
        const double v = eps * p.u_t * p.u_x * z[0] + 0.5 * eps * p.u_x * p.u_x * z[1] -
                         double_well(p.u) * z[1] / eps - kappa * p.u_x * p.theta * z[0];
        acc += p.w * v;
    }
    return acc;
}

// ---- snapshot ----

namespace {

constexpr int kBasePanels = 128;
constexpr int kLayerHalfWidth = 16;  // in units of eps / beta
constexpr int kGaussNodes = 10;

std::vector<double> panel_edges(const Scenario& s, const FrontState& f)
{
    std::vector<double> e;
    for (int i = 0; i <= kBasePanels; ++i) e.push_back(s.l1 + s.length() * i / kBasePanels);
    const double scale = f.epsilon / f.s.beta;
    for (double phi : {f.phi1, f.phi2})
        for (int k = -kLayerHalfWidth; k <= kLayerHalfWidth; ++k) e.push_back(phi + k * scale);
    // kinks of the travelling solution sit on the outer fronts
    e.push_back(s.phi10(f.t));
    e.push_back(s.phi20(f.t));
    std::erase_if(e, [&](double x) { return !(x >= s.l1 && x <= s.l2); });
    std::sort(e.begin(), e.end());
    const double tiny = 1e-12 * s.length();
    e.erase(std::unique(e.begin(), e.end(), [tiny](double a, double b) { return b - a < tiny; }), e.end());
    e.back() = s.l2;
    return e;
}

}  // namespace

Snapshot::Snapshot(const ThetaField& theta, double t, Execution exec)
{
    const TemperatureModel& tm = theta.model();
    const Scenario& s = tm.scenario();
    front_ = tm.fronts().at(t);
    kappa_ = s.kappa;
    const double eps = front_.epsilon;
    const GriddedField& q = theta.q_smooth();
    if (q.dx() > eps / 8.0 * (1.0 + 1e-12))
        throw ResolutionError("weak residuals: remainder grid spacing " + std::to_string(q.dx()) +
                              " exceeds eps/8 = " + std::to_string(eps / 8.0));

    const std::vector<double> edges = panel_edges(s, front_);
    const GaussRule g = gauss_legendre(kGaussNodes);
    std::vector<double> xs;
    std::vector<double> ws;
    xs.reserve((edges.size() - 1) * kGaussNodes);
    ws.reserve(xs.capacity());
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double c = 0.5 * (edges[p] + edges[p + 1]);
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        for (int k = 0; k < kGaussNodes; ++k) {
            xs.push_back(c + h * g.nodes[k]);
            ws.push_back(h * g.weights[k]);
        }
    }

    const auto u = sample_order_field(xs, front_, exec);
    const auto th = theta.at(xs, t, exec);
    const TemperatureCoefficients c = tm.coefficients(t);
    const double dt = q.dt();
    const int n = static_cast<int>(xs.size());
    samples_.resize(n);
    auto fill = [&](int i) {
        WeakSample& p = samples_[i];
        p.x = xs[i];
        p.w = ws[i];
        p.u = u[i].u;
        p.u_t = u[i].u_t;
        p.u_x = u[i].u_x;
        p.theta = th[i].theta();
        const TemperatureModel::Outer o = tm.outer(xs[i], t);
        const double qs_t = (q.interpolate(xs[i], t + dt) - q.interpolate(xs[i], t - dt)) / (2.0 * dt);
        p.theta_t = o.d_t + qs_t;
        p.theta_x = o.d_x;
        p.source = interior_source(xs[i], c);
        p.q_smooth = th[i].q_smooth;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) fill(i);
    } else {
        for (int i = 0; i < n; ++i) fill(i);
    }
    if (c.psi <= 1e-14 * (1.0 + std::abs(c.mid))) {
        point_mass_ = interior_source_integral(s.l1, s.l2, c);
        point_at_ = c.mid;
    }
    traces_ = {theta.at(front_.phi1, t).theta(), theta.at(front_.phi2, t).theta()};
}

double Snapshot::heat(const TestFunction& zeta) const
{
    return heat_functional(samples_, zeta) + point_mass_ * zeta(point_at_);
}

double Snapshot::allen_cahn(const TestFunction& xi) const
{
    return allen_cahn_functional(samples_, xi, front_.epsilon, kappa_);
}

double residual_heat(const TestFunction& zeta, double t, const ThetaField& theta)
{
    return Snapshot(theta, t).heat(zeta);
}

double residual_allen_cahn(const TestFunction& xi, double t, const ThetaField& theta)
{
    return Snapshot(theta, t).allen_cahn(xi);
}

// ---- coefficient books ----

double stretch_weight(double eta)
{
    return integrate_line([eta](double z) {
        const OmegaJet j = omega_jet(z, eta);
        return z * j.p * j.d_z;
    });
}

double VCoefficients::predict(const FrontState& f, const TestFunction& xi) const
{
    return v1_1 * xi(f.phi1) + v1_2 * xi(f.phi2) + v2_1 * xi.d(f.phi1) + v2_2 * xi.d(f.phi2);
}

VCoefficients v_coefficients(const FrontState& f, const std::array<double, 2>& traces, double kappa)
{
    const KernelValues& k = f.s.kernels;
    const double beta = f.s.beta;
    const double stretch = f.s.beta_tau * f.psi0_t / beta * stretch_weight(f.s.eta);
    VCoefficients v;
    v.v1_1 = -beta * f.phi1_t * k.b_omega - stretch + kappa * k.c_omega * traces[0];
    v.v1_2 = -beta * f.phi2_t * k.b_omega + stretch - kappa * k.c_omega * traces[1];
    v.v2_1 = beta * k.c_hat - k.d_hat / beta;
    v.v2_2 = v.v2_1;
    return v;
}

DeltaBook delta_cancellation(const FrontState& f, const Scenario& s)
{
    const auto a = ut_delta_expansion(f);
    const double b = switch_B(f.tau());
    DeltaBook book;
    book.a1 = a[0].coefficient;
    book.a2 = a[1].coefficient;
    book.stefan1 = b * (s.gamma1_plus(f.t) + s.gamma1_minus(f.t));
    book.stefan2 = b * (s.gamma2_plus(f.t) + s.gamma2_minus(f.t));
    book.j1 = book.stefan1 - book.a1;
    book.j2 = book.stefan2 - book.a2;
    return book;
}

// ---- distributional calculus ----

StepProfile tanh_step(double steepness)
{
    return {[steepness](double z) { return 0.5 * (1.0 + std::tanh(steepness * z)); },
            [steepness](double z) {
                const double c = std::cosh(steepness * z);
                return std::isfinite(c) ? 0.5 * steepness / (c * c) : 0.0;
            }};
}

namespace {

QuadratureOptions tight()
{
    QuadratureOptions o;
    o.abs_tol = 1e-14;
    o.initial_panels = 64;
    o.max_panels = 20000;
    return o;
}

}  // namespace

double product_linearization_defect(const StepProfile& w1, const StepProfile& w2, double x1, double x2,
                                    double eps, const TestFunction& zeta)
{
    const double rho = (x2 - x1) / eps;
    const double b1 = integrate_line([&](double z) { return w1.slope(z) * w2.value(z - rho); });
    const double b2 = integrate_line([&](double z) { return w1.value(z + rho) * w2.slope(z); });
    auto integrand = [&](double x) {
        const double prod = w1.value((x - x1) / eps) * w2.value((x - x2) / eps);
        const double lin = (x > x1 ? b1 : 0.0) + (x > x2 ? b2 : 0.0);
        return (prod - lin) * zeta(x);
    };
    const std::array<double, 2> kinks = {x1, x2};
    return integrate(integrand, zeta.lo(), zeta.hi(), tight(), kinks);
}

double layer_moment_defect(const std::function<double(double)>& w, double beta, double phi, double eps,
                           const TestFunction& zeta)
{
    const double moment = integrate_line(w);
    const std::array<double, 1> at = {phi};
    const double pair = integrate([&](double x) { return w(beta * (x - phi) / eps) * zeta(x); }, zeta.lo(), zeta.hi(),
                                  tight(), at);
    return pair / eps - moment / beta * zeta(phi);
}

double layer_product_defect(const std::function<double(double)>& w, double phi, double eps,
                            const TestFunction& zeta, const std::function<double(double)>& q)
{
    const double moment = integrate_line(w);
    // the layer carries all the mass; panels of width eps / 2 over forty layer widths
    const double lo = std::max(zeta.lo(), phi - 40.0 * eps);
    const double hi = std::min(zeta.hi(), phi + 40.0 * eps);
    const GaussRule g = gauss_legendre(kGaussNodes);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.5 * eps))));
    const double h = (hi - lo) / panels;
    double pair = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = lo + (p + 0.5) * h;
        for (int k = 0; k < kGaussNodes; ++k) {
            const double x = c + 0.5 * h * g.nodes[k];
            pair += 0.5 * h * g.weights[k] * w((x - phi) / eps) * q(x) * zeta(x);
        }
    }
    return pair / eps - q(phi) * zeta(phi) * moment;
}

// ---- scaling fits ----

ScalingFit fit_scaling(std::span<const double> scale, std::span<const double> values, double floor)
{
    if (scale.size() != values.size()) throw std::invalid_argument("fit_scaling: size mismatch");
    if (scale.size() < 4) throw DegenerateFit("fit_scaling: at least four points are needed");
    std::string below;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]) || std::abs(values[i]) <= floor || !(scale[i] > 0.0))
            below += " " + std::to_string(scale[i]);
    if (!below.empty()) throw DegenerateFit("fit_scaling: value below floor at scale" + below);
    const double n = static_cast<double>(values.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        mx += std::log(scale[i]) / n;
        my += std::log(std::abs(values[i])) / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dx = std::log(scale[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(std::abs(values[i])) - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("fit_scaling: all scales coincide");
    ScalingFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = values.size();
    double ssr = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = std::log(std::abs(values[i])) - (f.intercept + f.slope * std::log(scale[i]));
        ssr += r * r;
    }
    f.confidence = values.size() > 2 ? std::sqrt(ssr / (n - 2.0)) : 0.0;
    return f;
}

ScalingFit holder_trace_fit(const Duhamel& d)
{
    const FrontModel& m = d.model();
    const Scenario& s = m.scenario();
    const double speed = std::abs(s.psi0_t(s.t_star));
    std::vector<double> gap, diff;
    // from contact on, where the merged source is switched on and the gap alone sets the scale
    for (double tau = 0.0; tau >= -4.0; tau -= 0.25) {
        const double t = s.t_star - tau * m.epsilon() / speed;
        const FrontState f = m.at(t);
        if (!(f.psi() > 1e-12)) continue;
        gap.push_back(f.psi());
        diff.push_back(std::abs(d.at(f.phi1, t).sum() - d.at(f.phi2, t).sum()));
    }
    return fit_scaling(gap, diff);
}

// ---- driver ----

ResidualReport verify(const Scenario& s, const KernelTable& table, const VerifyOptions& opt)
{
    if (opt.ladder.size() < 4) throw std::invalid_argument("verify: the ladder needs four entries");
    if (opt.samples < 2) throw std::invalid_argument("verify: at least two sample times");
    ResidualReport rep;
    rep.ladder = opt.ladder;
    const double eps_min = *std::min_element(opt.ladder.begin(), opt.ladder.end());
    const double t_lo = s.t_star / 8.0;
    const double t_hi = s.t_star - opt.margin * eps_min;
    if (!(t_hi > t_lo)) throw std::invalid_argument("verify: the pre-contact window is empty");
    rep.times = uniform_times(t_lo, t_hi, opt.samples);
    const double speed = std::abs(s.psi0_t(s.t_star));

    for (double eps : opt.ladder) {
        const FrontModel fm(s, table, eps);
        const TemperatureModel tm(fm);
        const ThetaField theta(tm, solve_q_smooth(tm, default_grid(fm), opt.execution));
        double worst5 = 0.0, worst6 = 0.0;
        for (double t : rep.times) {
            const Snapshot snap(theta, t, opt.execution);
            for (const TestFunction& fn : test_family(s, snap.fronts())) {
                const double r5 = snap.heat(fn);
                const double r6 = snap.allen_cahn(fn);
                rep.rows.push_back({"heat", fn.name(), t, eps, r5});
                rep.rows.push_back({"allen_cahn", fn.name(), t, eps, r6});
                worst5 = std::max(worst5, std::abs(r5));
                worst6 = std::max(worst6, std::abs(r6));
            }
            const VCoefficients v = v_coefficients(snap.fronts(), snap.traces(), s.kappa);
            rep.v_rows.push_back({t, eps, v, delta_cancellation(snap.fronts(), s)});
            rep.max_v2 = std::max({rep.max_v2, std::abs(v.v2_1), std::abs(v.v2_2)});
        }
        rep.max5.push_back(worst5);
        rep.max6.push_back(worst6);

        // through contact the delta weights no longer vanish; compare them with direct quadrature
        double worst_rec = 0.0;
        for (double tau : {8.0, 4.0, 2.0, 1.0}) {
            const double t = s.t_star - tau * eps / speed;
            const Snapshot snap(theta, t, opt.execution);
            const VCoefficients v = v_coefficients(snap.fronts(), snap.traces(), s.kappa);
            for (const TestFunction& fn : test_family(s, snap.fronts())) {
                const double direct = snap.allen_cahn(fn);
                const double predicted = v.predict(snap.fronts(), fn);
                rep.reconstruction.push_back({t, eps, fn.name(), direct, predicted});
                worst_rec = std::max(worst_rec, std::abs(direct - predicted));
            }
        }
        rep.max_reconstruction.push_back(worst_rec);
    }
    rep.slope5 = fit_scaling(rep.ladder, rep.max5);
    rep.slope6 = fit_scaling(rep.ladder, rep.max6);
    rep.slope_reconstruction = fit_scaling(rep.ladder, rep.max_reconstruction);
    return rep;
}

}  // namespace confluence
