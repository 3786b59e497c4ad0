// Command-line driver: every subcommand writes CSV artifacts plus manifest.txt into --out.
#include "confluence/errors.hpp"
#include "confluence/execution.hpp"
#include "confluence/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace confluence;

namespace {

enum Exit { ok = 0, check_failed = 2, bad_input = 3, solver_failure = 4 };

void apply_thread_cap()
{
    const char* env = std::getenv("CONFLUENCE_THREADS");
    if (!env || !*env) return;
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(env, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != std::string(env).size() || n < 1)
        throw InputError(std::string("cli: CONFLUENCE_THREADS must be a positive integer, got '") + env + "'");
    set_thread_limit(n);
}

std::vector<double> parse_ladder(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("verify: ladder entry '" + item + "' is not a number");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sharp-interface asymptotics and a finite-difference reference for colliding phase-field fronts"};
    app.require_subcommand(1);
    std::string out = ".";
    app.add_option("--out", out, "directory for the CSV artifacts and manifest.txt");

    std::string scenario_path;
    std::optional<double> epsilon;
    auto scenario_opts = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--epsilon", epsilon, "interface width (defaults to the scenario's)");
    };

    KernelDumpOptions kopt;
    auto* kernels = app.add_subcommand("kernels", "kernel functions of eta");
    kernels->require_subcommand(1);
    auto* dump = kernels->add_subcommand("dump", "tabulate the kernels on a uniform eta grid");
    dump->add_option("--eta-min", kopt.eta_min);
    dump->add_option("--eta-max", kopt.eta_max);
    dump->add_option("--nodes", kopt.nodes);

    int front_nodes = 1001;
    auto* fronts = app.add_subcommand("fronts", "assembled front trajectory");
    scenario_opts(fronts);
    fronts->add_option("--nt", front_nodes, "time nodes");

    FieldOptions fopt;
    auto* field = app.add_subcommand("field", "asymptotic fields on a lattice");
    field->require_subcommand(1);
    auto* field_u = field->add_subcommand("u", "order parameter");
    auto* field_theta = field->add_subcommand("theta", "temperature and its traces");
    for (auto* sub : {field_u, field_theta}) {
        scenario_opts(sub);
        sub->add_option("--nx", fopt.nx);
        sub->add_option("--nt", fopt.nt);
    }

    std::string ladder = "0.1,0.05,0.025,0.0125";
    VerifyOptions vopt;
    auto* verify_cmd = app.add_subcommand("verify", "weak residual scaling over an epsilon ladder");
    verify_cmd->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--ladder", ladder, "comma-separated epsilons");
    verify_cmd->add_option("--samples", vopt.samples, "sample times in the pre-contact window");

    PdeOptions popt;
    auto* pde = app.add_subcommand("pde", "finite-difference solve of the full system");
    auto* compare_cmd = app.add_subcommand("compare", "asymptotic fronts against the finite-difference solve");
    auto* jump = app.add_subcommand("jump", "predicted and measured temperature dip at confluence");
    for (auto* sub : {pde, compare_cmd, jump}) {
        scenario_opts(sub);
        sub->add_option("--nx", popt.nx, "grid nodes (default: dx = eps/20)");
        sub->add_option("--dt", popt.dt, "time step (default: min(eps^2/4, eps dx))");
    }
    pde->add_option("--frames", popt.frames, "stored time frames of the fields");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_input;
    }

    try {
        apply_thread_cap();
        RunResult result;
        RunManifest manifest;
        manifest.scenario_path = scenario_path;
        auto param = [&](const std::string& k, const std::string& v) { manifest.parameters.emplace_back(k, v); };

        if (dump->parsed()) {
            manifest.command = "kernels dump";
            param("eta_min", format_double(kopt.eta_min));
            param("eta_max", format_double(kopt.eta_max));
            param("nodes", std::to_string(kopt.nodes));
            result = run_kernels_dump(kopt);
        } else {
            const Scenario s = load_scenario(scenario_path);
            const double eps = epsilon.value_or(s.epsilon);
            if (!(eps > 0.0)) throw ValidationError("cli: --epsilon must be positive");
            const KernelTable table = KernelTable::build();
            if (fronts->parsed()) {
                manifest.command = "fronts";
                param("epsilon", format_double(eps));
                param("nt", std::to_string(front_nodes));
                result = run_fronts(s, table, eps, front_nodes);
            } else if (field_u->parsed() || field_theta->parsed()) {
                fopt.epsilon = eps;
                manifest.command = field_u->parsed() ? "field u" : "field theta";
                param("epsilon", format_double(eps));
                param("nx", std::to_string(fopt.nx));
                param("nt", std::to_string(fopt.nt));
                result = field_u->parsed() ? run_field_u(s, table, fopt) : run_field_theta(s, table, fopt);
            } else if (verify_cmd->parsed()) {
                vopt.ladder = parse_ladder(ladder);
                manifest.command = "verify";
                param("ladder", ladder);
                param("samples", std::to_string(vopt.samples));
                result = run_verify(s, table, vopt);
            } else {
                popt.epsilon = eps;
                const FdGrid g = resolve_grid(s, popt);
                param("epsilon", format_double(eps));
                param("nx", std::to_string(g.nx));
                param("dt", format_double(g.dt));
                if (pde->parsed()) {
                    manifest.command = "pde";
                    param("frames", std::to_string(popt.frames));
                    result = run_pde(s, table, popt);
                } else if (compare_cmd->parsed()) {
                    manifest.command = "compare";
                    result = run_compare(s, table, popt);
                } else {
                    manifest.command = "jump";
                    result = run_jump(s, table, popt);
                }
            }
        }
        write_artifacts(out, result, manifest);
        for (const std::string& line : result.summary) std::cout << line << '\n';
        for (const auto& [name, passed] : result.checks)
            std::cout << (passed ? "PASS " : "FAIL ") << name << '\n';
        return result.passed() ? ok : check_failed;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return solver_failure;
    }
}
