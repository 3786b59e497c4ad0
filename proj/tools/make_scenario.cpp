// Writes a validated scenario file: straight fronts with Stefan-consistent jumps, or the
// symmetric pair driven by the travelling sharp-interface solution.
#include "confluence/errors.hpp"
#include "confluence/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

using namespace confluence;

int main(int argc, char** argv)
{
    CLI::App app{"scenario generator"};
    app.require_subcommand(1);
    std::string out;
    app.add_option("-o,--output", out, "target file (stdout when omitted)");

    std::string name = "linear";
    double x1 = -0.5, v1 = 1.4, x2 = 0.5, v2 = -0.6, l1 = -1.25, l2 = 1.25, t_end = 1.0;
    double epsilon = 0.05, kappa = 1.0;
    auto* linear = app.add_subcommand("linear", "fronts x_i + v_i t");
    linear->add_option("--name", name);
    linear->add_option("--x1", x1);
    linear->add_option("--v1", v1);
    linear->add_option("--x2", x2);
    linear->add_option("--v2", v2);

    double half_gap = 0.5, speed = 1.0;
    auto* travelling = app.add_subcommand("travelling", "symmetric pair closing at a common speed");
    travelling->add_option("--half-gap", half_gap);
    travelling->add_option("--speed", speed);

    for (auto* sub : {linear, travelling}) {
        sub->add_option("--l1", l1);
        sub->add_option("--l2", l2);
        sub->add_option("--t-end", t_end);
        sub->add_option("--epsilon", epsilon);
        sub->add_option("--kappa", kappa);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        Scenario s = linear->parsed() ? make_linear_scenario(name, x1, v1, x2, v2, l1, l2, t_end)
                                      : make_travelling_scenario(half_gap, speed, l1, l2, t_end);
        s.epsilon = epsilon;
        s.kappa = kappa;
        s.validate();
        if (out.empty()) {
            write_scenario(std::cout, s);
        } else {
            std::ofstream f(out);
            write_scenario(f, s);
            if (!f) throw std::runtime_error("cannot write " + out);
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
