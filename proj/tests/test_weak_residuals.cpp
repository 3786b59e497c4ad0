#include "confluence/errors.hpp"
#include "confluence/profiles.hpp"
#include "confluence/quadrature.hpp"
#include "confluence/weak_residuals.hpp"

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

const std::vector<double> ladder = {0.1, 0.05, 0.025, 0.0125};

}  // namespace

TEST_CASE("bump test functions are compactly supported with exact derivatives")
{
    for (auto kind : {TestFunction::Kind::bump, TestFunction::Kind::bump_derivative}) {
        const TestFunction f(0.2, 0.3, kind);
        CHECK(f(0.2 - 0.3) == 0.0);
        CHECK(f(0.5 + 1e-12) == 0.0);
        const double h = 1e-5;
        for (double x : {-0.05, 0.1, 0.2, 0.33, 0.45}) {
            const auto j = f.jet(x);
            CHECK(j[1] == doctest::Approx((f(x + h) - f(x - h)) / (2 * h)).epsilon(1e-6));
            CHECK(j[2] == doctest::Approx((f.d(x + h) - f.d(x - h)) / (2 * h)).epsilon(1e-6));
        }
    }
    CHECK(TestFunction(0.0, 1.0)(0.0) == doctest::Approx(1.0));
    CHECK(TestFunction(0.0, 1.0, TestFunction::Kind::bump_derivative)(0.0) == 0.0);
    CHECK_THROWS_AS(TestFunction(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("the test family tiles the domain and follows the fronts")
{
    const Scenario s = bundled("asymmetric.scn");
    const FrontModel m(s, table(), 0.05);
    for (double t : {0.0, 0.3, 0.6}) {
        const FrontState f = m.at(t);
        const auto fam = test_family(s, f);
        REQUIRE(fam.size() == 16);
        for (const TestFunction& fn : fam) {
            CHECK(fn.lo() > s.l1);
            CHECK(fn.hi() < s.l2);
        }
        CHECK(fam[12].center() == doctest::Approx(std::clamp(f.phi1, s.l1 + 0.05 * s.length(), s.l2)));
        CHECK(fam[13].kind() == TestFunction::Kind::bump_derivative);
    }
}

TEST_CASE("functionals vanish on equilibria")
{
    const TestFunction zeta(0.0, 0.5);
    std::vector<WeakSample> flat;
    for (int i = 0; i < 200; ++i) {
        WeakSample p;
        p.x = -0.5 + (i + 0.5) / 200.0;
        p.w = 1.0 / 200.0;
        p.u = 1.0;
        p.theta = 0.0;
        flat.push_back(p);
    }
    CHECK(heat_functional(flat, zeta) == 0.0);
    CHECK(allen_cahn_functional(flat, zeta, 0.05, 1.0) == 0.0);
    // a constant temperature alone leaves the coupling term without a gradient to act on
    for (WeakSample& p : flat) p.theta = 3.0;
    CHECK(allen_cahn_functional(flat, zeta, 0.05, 1.0) == 0.0);
}

TEST_CASE("fit_scaling recovers exponents and rejects degenerate data")
{
    std::vector<double> v;
    for (double e : ladder) v.push_back(3.0 * e);
    CHECK(fit_scaling(ladder, v).slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_scaling(ladder, v).confidence < 1e-12);
    v.clear();
    for (double e : ladder) v.push_back(0.7 * std::pow(e, 0.4));
    CHECK(fit_scaling(ladder, v).slope == doctest::Approx(0.4).epsilon(1e-12));
    v.clear();
    for (double e : ladder) v.push_back(e + e * e);
    const double mixed = fit_scaling(ladder, v).slope;
    CHECK(mixed > 0.9);
    CHECK(mixed < 1.1);
    v.back() = 0.0;
    CHECK_THROWS_AS(fit_scaling(ladder, v), DegenerateFit);
    const std::vector<double> three = {0.1, 0.05, 0.025};
    CHECK_THROWS_AS(fit_scaling(three, three), DegenerateFit);
}

TEST_CASE("delta' weights vanish wherever beta solves its relation")
{
    const Scenario s = bundled("asymmetric.scn");
    const FrontModel m(s, table(), 0.02);
    for (double t = 0.0; t <= s.t_end; t += 0.01) {
        const VCoefficients v = v_coefficients(m.at(t), {0.0, 0.0}, s.kappa);
        CHECK(std::abs(v.v2_1) < 1e-10);
        CHECK(std::abs(v.v2_2) < 1e-10);
    }
}

TEST_CASE("delta weights vanish far before contact and balance for mirrored fronts")
{
    const Scenario s = bundled("symmetric.scn");
    const double eps = 0.025;
    const FrontModel m(s, table(), eps);
    const TemperatureModel tm(m);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(m)));
    const double k = kinetic_coefficient(s.kappa);
    {
        const FrontState f = m.at(0.05);
        const VCoefficients v = v_coefficients(f, {k * f.phi1_t, -k * f.phi2_t}, s.kappa);
        CHECK(std::abs(v.v1_1) < 1e-8);
        CHECK(std::abs(v.v1_2) < 1e-8);
        const Snapshot snap(theta, 0.05);
        const VCoefficients w = v_coefficients(f, snap.traces(), s.kappa);
        CHECK(std::abs(w.v1_1) < 5e-3);
        CHECK(std::abs(w.v1_2) < 5e-3);
    }
    for (double t : {0.49, 0.5, 0.51}) {
        const Snapshot snap(theta, t);
        const VCoefficients v = v_coefficients(snap.fronts(), snap.traces(), s.kappa);
        CAPTURE(t);
        CHECK(std::abs(v.v1_1 + v.v1_2) < 1e-10);
    }
}

TEST_CASE("stretch weight is odd under the front swap")
{
    CHECK(std::abs(stretch_weight(30.0)) < 1e-10);
    // direct: int (z + eta) Omega_eta Omega_z = -int z P Omega_z
    for (double eta : {0.0, 0.4, 2.0}) {
        const double other = integrate_line([eta](double z) {
            const OmegaJet j = omega_jet(z, eta);
            return (z + eta) * j.d_eta * j.d_z;
        });
        CHECK(other == doctest::Approx(-stretch_weight(eta)).epsilon(1e-9));
    }
}

TEST_CASE("unmatched delta weights decay like 1/tau")
{
    const double eps = 1e-3;
    for (EtaEquation closure : {EtaEquation::printed, EtaEquation::balanced}) {
        Scenario s = bundled("asymmetric.scn");
        s.model.eta_equation = closure;
        const FrontModel m(s, table(), eps);
        std::vector<double> taus, j1;
        double c = 0.0;
        for (double tau : {5.0, 10.0, 20.0, 40.0, 80.0, 160.0}) {
            // psi0 is linear here; invert it for the sample time
            const double t = s.t_star - tau * eps / std::abs(s.psi0_t(s.t_star));
            const FrontState f = m.at(t);
            const DeltaBook b = delta_cancellation(f, s);
            c = std::max({c, std::abs(b.j1) * f.tau(), std::abs(b.j2) * f.tau()});
            if (std::abs(b.j1) > 1e-13) {
                taus.push_back(f.tau());
                j1.push_back(b.j1);
            }
        }
        MESSAGE("max tau |J| = " << c);
        CHECK(c < 2.0);
        // tau phi_i1 tends to a constant exponentially fast, so the tail beats 1/tau by far
        CHECK(taus.size() < 6);
        if (taus.size() >= 2) CHECK(std::abs(j1.back()) * taus.back() <= std::abs(j1.front()) * taus.front());
    }
}

TEST_CASE("frozen fronts leave the bare Stefan weights")
{
    const Scenario s = bundled("asymmetric.scn");
    const FrontModel m(s, table(), 0.05);
    FrontState f = m.at(0.2);
    f.phi1_t = 0.0;
    f.phi2_t = 0.0;
    f.s.beta_tau = 0.0;
    const DeltaBook b = delta_cancellation(f, s);
    CHECK(b.j1 == b.stefan1);
    CHECK(b.j2 == b.stefan2);
    CHECK(b.stefan1 == doctest::Approx(switch_B(f.tau()) * (s.gamma1_plus(0.2) + s.gamma1_minus(0.2))));
}

TEST_CASE("the summed delta balance closes under the balanced relation")
{
    Scenario s = bundled("asymmetric.scn");
    s.model.eta_equation = EtaEquation::balanced;
    const FrontModel m(s, table(), 0.02);
    Scenario p = bundled("asymmetric.scn");
    const FrontModel mp(p, table(), 0.02);
    double worst = 0.0, printed = 0.0;
    for (double t = 0.3; t < 0.7; t += 0.01) {
        worst = std::max(worst, std::abs(delta_cancellation(m.at(t), s).sum()));
        printed = std::max(printed, std::abs(delta_cancellation(mp.at(t), p).sum()));
    }
    MESSAGE("summed delta weight: balanced " << worst << ", printed " << printed);
    CHECK(worst < 1e-6);
    CHECK(printed > 10.0 * worst);
}

TEST_CASE("product of two steps linearizes to weighted Heavisides")
{
    const StepProfile w = tanh_step();
    const TestFunction zeta(0.1, 0.6);
    std::vector<double> d_same, d_shift;
    for (double eps : ladder) {
        d_same.push_back(std::abs(product_linearization_defect(w, w, 0.05, 0.05, eps, zeta)));
        d_shift.push_back(std::abs(product_linearization_defect(w, tanh_step(2.0), 0.05, 0.05 + 0.7 * eps, eps, zeta)));
    }
    CHECK(fit_scaling(ladder, d_same).slope >= 0.9);
    CHECK(fit_scaling(ladder, d_shift).slope >= 0.9);
    // well separated steps: the product is the later step
    CHECK(std::abs(product_linearization_defect(w, w, 0.3, -0.2, 0.005, zeta)) < 0.02);
}

TEST_CASE("a scaled layer pairs to its moment at the front")
{
    const TestFunction zeta(0.0, 0.7);
    auto w = [](double z) { return std::exp(-z * z) * (1.0 + z); };
    std::vector<double> d;
    for (double eps : ladder) d.push_back(std::abs(layer_moment_defect(w, 0.8, 0.15, eps, zeta)));
    const ScalingFit f = fit_scaling(ladder, d);
    MESSAGE("layer moment slope " << f.slope);
    CHECK(f.slope >= 0.9);
}

TEST_CASE("a layer times the heat potentials pairs to their trace")
{
    const Scenario s = bundled("asymmetric.scn");
    auto w = [](double z) { return 1.0 / (std::cosh(z) * std::cosh(z)); };
    const TestFunction zeta(s.x_star(), 0.5);
    // the potentials of a fixed model near contact, probed by ever thinner layers
    const FrontModel m(s, table(), 0.025);
    const Duhamel d(m);
    const double t = s.t_star - 0.01;
    const FrontState f = m.at(t);
    auto q = [&](double x) { return d.at(x, t).sum(); };
    std::vector<double> thin = {0.02, 0.01, 0.005, 0.0025};
    std::vector<double> err;
    for (double e : thin) err.push_back(std::abs(layer_product_defect(w, f.phi1, e, zeta, q)));
    const ScalingFit fit = fit_scaling(thin, err);
    MESSAGE("layer product slope " << fit.slope);
    CHECK(fit.slope >= 0.25);
}

TEST_CASE("potential traces are Hoelder")
{
    const Scenario s = bundled("asymmetric.scn");
    const FrontModel m(s, table(), 0.01);
    CHECK(holder_trace_fit(Duhamel(m)).slope >= 0.3);
}

TEST_CASE("snapshot guards its resolution")
{
    const Scenario s = bundled("symmetric.scn");
    const FrontModel coarse(s, table(), 0.05);
    const TemperatureModel tm(coarse);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(coarse)));
    const FrontModel fine(s, table(), 0.01);
    const TemperatureModel tf(fine);
    // a remainder grid built for a larger epsilon is too coarse for this one
    const ThetaField mismatched(tf, theta.q_smooth());
    CHECK_THROWS_AS(Snapshot(mismatched, 0.2), ResolutionError);
}

TEST_CASE("heat residual is negligible away from the layers")
{
    const Scenario s = bundled("symmetric.scn");
    const FrontModel m(s, table(), 0.025);
    const TemperatureModel tm(m);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(m)));
    const Snapshot snap(theta, 0.2);
    // fronts at -0.3 and 0.3; this bump lives in [-1.2, -0.8]
    CHECK(std::abs(snap.heat(TestFunction(-1.0, 0.2))) < 1e-6);
    CHECK(std::abs(snap.allen_cahn(TestFunction(-1.0, 0.2))) < 1e-10);
}

TEST_CASE("isolated front carries the same residual as a far separated pair")
{
    const Scenario s = bundled("symmetric.scn");
    const double eps = 0.025;
    const FrontModel m(s, table(), eps);
    const TemperatureModel tm(m);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(m)));
    const double t = 0.05;
    const Snapshot snap(theta, t);
    const FrontState& f = snap.fronts();
    const TestFunction xi(f.phi1, 0.3);
    // brute force: one tanh layer at the separated width, temperature frozen at the assembled values
    const double beta = table().at(table().eta_max()).beta;
    std::vector<WeakSample> single;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        WeakSample p;
        p.x = xi.lo() + (i + 0.5) * 0.6 / n;
        p.w = 0.6 / n;
        const double z = beta * (f.phi1 - p.x) / eps;
        p.u = omega0(z);
        p.u_x = -beta / eps * omega0_dot(z);
        p.u_t = beta / eps * omega0_dot(z) * f.phi1_t;
        p.theta = theta.at(p.x, t).theta();
        single.push_back(p);
    }
    const double one = allen_cahn_functional(single, xi, eps, s.kappa);
    const double two = snap.allen_cahn(xi);
    MESSAGE("single " << one << " pair " << two);
    CHECK(std::abs(one - two) < 1e-6);
}

TEST_CASE("verification report on the mirrored scenario")
{
    VerifyOptions o;
    o.samples = 4;
    const ResidualReport r = verify(bundled("symmetric.scn"), table(), o);
    CHECK(r.rows.size() == 4 * 4 * 16 * 2);
    CHECK(r.max_v2 < 1e-10);
    MESSAGE("slopes " << r.slope5.slope << " " << r.slope6.slope << " " << r.slope_reconstruction.slope);
    CHECK(r.slope5.slope >= 0.8);
    CHECK(r.slope6.slope >= 0.25);
    CHECK(r.slope_reconstruction.slope >= 0.25);
}
