#include "confluence/errors.hpp"
#include "confluence/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace confluence;

namespace {

std::string bundled(const std::string& file)
{
    return std::string(CONFLUENCE_SCENARIO_DIR) + "/" + file;
}

Scenario parse_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in);
}

const char* minimal =
    "l1 = -1\nl2 = 1\nt_end = 1\nt_star = 0.5\n"
    "phi10.coeffs = [-0.25, 0.5]\nphi20.coeffs = [0.25, -0.5]\n"
    "gamma1_plus.coeffs = [0]\ngamma1_minus.coeffs = [1]\n"
    "gamma2_plus.coeffs = [1]\ngamma2_minus.coeffs = [0]\n";

}  // namespace

TEST_CASE("bundled scenarios load and validate")
{
    const Scenario sym = load_scenario(bundled("symmetric.scn"));
    CHECK(sym.name == "symmetric");
    CHECK(sym.t_star == 0.5);
    CHECK(sym.psi0(sym.t_star) == 0.0);
    CHECK(sym.x_star() == 0.0);
    CHECK(sym.travelling);
    CHECK(sym.bc.reference);
    CHECK(sym.reference().has_value());

    const Scenario asym = load_scenario(bundled("asymmetric.scn"));
    CHECK(asym.t_star == doctest::Approx(0.5));
    CHECK(asym.x_star() == doctest::Approx(0.2));
    CHECK_FALSE(asym.reference().has_value());
    CHECK(asym.bc.kind == BoundaryKind::dirichlet);
}

TEST_CASE("generators reproduce the bundled files")
{
    const Scenario sym = make_travelling_scenario(0.5, 1.0, -1.25, 1.25, 1.0);
    const Scenario file = load_scenario(bundled("symmetric.scn"));
    CHECK(sym.phi10 == file.phi10);
    CHECK(sym.phi20 == file.phi20);
    CHECK(sym.gamma1_minus == file.gamma1_minus);
    CHECK(sym.gamma2_plus == file.gamma2_plus);
    CHECK(sym.bc == file.bc);

    const Scenario asym = make_linear_scenario("asymmetric", -0.5, 1.4, 0.5, -0.6, -1.25, 1.25, 1.0);
    const Scenario afile = load_scenario(bundled("asymmetric.scn"));
    CHECK(asym.phi10 == afile.phi10);
    CHECK(asym.phi20 == afile.phi20);
    CHECK(asym.gamma1_minus == afile.gamma1_minus);
    CHECK(asym.gamma2_plus == afile.gamma2_plus);
    CHECK(asym.t_star == doctest::Approx(afile.t_star).epsilon(1e-15));
}

TEST_CASE("write and parse round trip")
{
    Scenario s = make_linear_scenario("trip", -0.3, 0.7, 0.4, -0.2, -1.5, 1.5, 1.2);
    s.epsilon = 0.0375;
    s.kappa = 0.8;
    s.model.eta_equation = EtaEquation::balanced;
    s.model.sum_kernel = SumKernel::bz_omega;
    s.bc.kind = BoundaryKind::neumann;
    s.bc.left = Cubic{{0.1, 0.2, 0.0, 0.0}};
    std::stringstream io;
    write_scenario(io, s);
    const Scenario back = parse_scenario(io);
    CHECK(back.name == s.name);
    CHECK(back.l1 == s.l1);
    CHECK(back.t_star == s.t_star);
    CHECK(back.epsilon == s.epsilon);
    CHECK(back.kappa == s.kappa);
    CHECK(back.phi10 == s.phi10);
    CHECK(back.gamma2_plus == s.gamma2_plus);
    CHECK(back.bc == s.bc);
    CHECK(back.model == s.model);
}

TEST_CASE("short coefficient lists are zero padded and defaults apply")
{
    const Scenario s = parse_text(minimal);
    CHECK(s.phi10 == Cubic{{-0.25, 0.5, 0.0, 0.0}});
    CHECK(s.kappa == 1.0);
    CHECK(s.model == ModelOptions{});
    CHECK(s.bc == BoundaryCondition{});
}

TEST_CASE("malformed input raises ParseError")
{
    CHECK_THROWS_AS(parse_text(""), ParseError);
    CHECK_THROWS_AS(parse_text("# only a comment\n\n"), ParseError);
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "colour = blue\n"), ParseError);
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "l1 = -2\n"), ParseError);
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "epsilon = 0.0x5\n"), ParseError);
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "bc = robin:1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "model.sum_kernel = maybe\n"), ParseError);
    CHECK_THROWS_AS(parse_text("l1 = -1\nl2 = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_text("l1 -1\n"), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), ParseError);
}

TEST_CASE("broken invariants raise ValidationError")
{
    std::string text = minimal;
    // gamma1- no longer matches the front speed
    const auto pos = text.find("gamma1_minus.coeffs = [1]");
    text.replace(pos, 25, "gamma1_minus.coeffs = [1.1]");
    try {
        parse_text(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("gamma1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_text(std::string(minimal) + "bc = reference\n"), ValidationError);
    CHECK_THROWS_AS(make_linear_scenario("x", -0.5, 1.0, 0.5, -1.0, -1.0, 1.0, 0.4), ValidationError);
    CHECK_THROWS_AS(make_linear_scenario("x", -0.5, -1.0, 0.5, 1.0, -1.0, 1.0, 1.0), ValidationError);
    // fronts that cross the walls leave no room for the cutoff
    CHECK_THROWS_AS(make_linear_scenario("x", -0.95, 1.0, 0.95, -1.0, -1.0, 1.0, 1.5), ValidationError);
}

TEST_CASE("kinetic coefficient and travelling reference")
{
    CHECK(kinetic_coefficient(1.0) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-15));
    const Scenario s = make_travelling_scenario(0.5, 1.0, -1.25, 1.25, 1.0);
    const TravellingReference r = *s.reference();
    const double t = 0.2;
    // inner phase is isothermal
    CHECK(r.theta(0.0, t) == doctest::Approx(r.kinetic * r.speed));
    CHECK(r.theta_x(0.0, t) == 0.0);
    // Stefan jump 2v on the outer side of the right front
    const double x2 = r.phi20(t);
    CHECK(r.theta_x(x2 + 1e-12, t) == doctest::Approx(2.0 * r.speed).epsilon(1e-9));
    // the outer profile moves with the front
    const double h = 1e-6;
    const double x = x2 + 0.3;
    CHECK(r.theta_t(x, t) == doctest::Approx((r.theta(x, t + h) - r.theta(x, t - h)) / (2 * h)).epsilon(1e-7));
    CHECK(r.theta(-x, t) == doctest::Approx(r.theta(x, t)).epsilon(1e-15));
}

TEST_CASE("cutoff is one on the plateau and vanishes at the walls")
{
    const Scenario s = load_scenario(bundled("asymmetric.scn"));
    const Cutoff e(s);
    CHECK(e.plateau_lo() < s.phi10(0.0));
    CHECK(e.plateau_hi() > s.phi20(0.0));
    CHECK(e(s.l1) == 0.0);
    CHECK(e(s.l2) == 0.0);
    CHECK(e.d(s.l1) == 0.0);
    CHECK(e(s.x_star()) == 1.0);
    const double h = 1e-6;
    for (double x = s.l1 + 0.01; x < s.l2; x += 0.0371) {
        CAPTURE(x);
        CHECK(e(x) >= 0.0);
        CHECK(e(x) <= 1.0);
        CHECK(std::abs(e.d(x) - (e(x + h) - e(x - h)) / (2 * h)) < 1e-6);
        CHECK(std::abs(e.dd(x) - (e.d(x + h) - e.d(x - h)) / (2 * h)) < 1e-5);
    }
}
