#include "confluence/runner.hpp"

#include "confluence/errors.hpp"
#include "confluence/front_dynamics.hpp"
#include "confluence/order_field.hpp"
#include "confluence/temperature_field.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace confluence {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size())
{
    row(header);
}

Csv& Csv::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) throw std::logic_error("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    return *this;
}

Csv& Csv::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    return row(cells);
}

bool RunResult::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

std::string sha256_hex(std::string_view data)
{
    const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw std::runtime_error("cli: sha256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string write_artifacts(const std::filesystem::path& dir, const RunResult& result, const RunManifest& manifest)
{
    std::filesystem::create_directories(dir);
    std::ostringstream m;
    m << "command = " << manifest.command << '\n';
    m << "scenario_path = " << manifest.scenario_path << '\n';
    m << "tool_version = " << tool_version << '\n';
    for (const auto& [k, v] : manifest.parameters) m << "parameter " << k << " = " << v << '\n';
    for (const Artifact& a : result.artifacts) {
        std::ofstream out(dir / a.name, std::ios::binary);
        out << a.content;
        if (!out) throw std::runtime_error("cli: cannot write " + (dir / a.name).string());
        m << "file " << a.name << " sha256 " << sha256_hex(a.content) << '\n';
    }
    for (const auto& [name, ok] : result.checks) m << "check " << name << " = " << (ok ? "pass" : "fail") << '\n';
    const std::string text = m.str();
    std::ofstream out(dir / "manifest.txt", std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cli: cannot write the manifest");
    return text;
}

RunResult run_kernels_dump(const KernelDumpOptions& opt)
{
    if (opt.nodes < 2 || !(opt.eta_max > opt.eta_min))
        throw ValidationError("kernels: need at least two nodes on a non-empty eta range");
    std::vector<KernelValues> v(opt.nodes);
    const double h = (opt.eta_max - opt.eta_min) / (opt.nodes - 1);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < opt.nodes; ++i) v[i] = evaluate_kernels(opt.eta_min + i * h).value;
    Csv csv({"eta", "c_hat", "d_hat", "b_omega", "bz_omega", "c_omega", "b_tilde", "b_dot00", "bz_dot00", "beta"});
    for (int i = 0; i < opt.nodes; ++i) {
        const KernelValues& k = v[i];
        csv.row(std::vector<double>{opt.eta_min + i * h, k.c_hat, k.d_hat, k.b_omega, k.bz_omega, k.c_omega,
                                    k.b_tilde, k.b_dot00, k.bz_dot00, k.beta});
    }
    RunResult r;
    r.artifacts.push_back({"kernels.csv", csv.text()});
    r.summary.push_back("kernels: " + std::to_string(opt.nodes) + " nodes on [" + format_double(opt.eta_min) +
                        ", " + format_double(opt.eta_max) + "]");
    return r;
}

RunResult run_fronts(const Scenario& s, const KernelTable& table, double eps, int nt)
{
    if (nt < 2) throw ValidationError("fronts: need at least two time nodes");
    const FrontModel model(s, table, eps);
    const FrontTrajectory tr = assemble_fronts(model, uniform_times(0.0, s.t_end, nt));
    Csv csv({"t", "tau", "eta", "beta", "rho", "phi1", "phi2", "phi1_t", "phi2_t"});
    for (const FrontState& f : tr.nodes)
        csv.row(std::vector<double>{f.t, f.tau(), f.s.eta, f.s.beta, f.s.rho, f.phi1, f.phi2, f.phi1_t, f.phi2_t});
    RunResult r;
    r.artifacts.push_back({"fronts.csv", csv.text()});
    const ContactEffects c = contact_effects(tr, s);
    r.summary.push_back("fronts: contact at t = " + format_double(c.t_contact) +
                        ", velocity sum " + format_double(c.velocity_sum));
    return r;
}

namespace {

std::vector<double> lattice(double a, double b, int n)
{
    if (n < 2) throw ValidationError("field: need at least two nodes per axis");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

RunResult run_field_u(const Scenario& s, const KernelTable& table, const FieldOptions& opt)
{
    const FrontModel model(s, table, opt.epsilon);
    const auto xs = lattice(s.l1, s.l2, opt.nx);
    Csv csv({"t", "x", "u", "u_t", "u_x"});
    for (double t : lattice(0.0, s.t_end, opt.nt)) {
        const auto u = sample_order_field(xs, model.at(t));
        for (int j = 0; j < opt.nx; ++j) csv.row(std::vector<double>{t, xs[j], u[j].u, u[j].u_t, u[j].u_x});
    }
    RunResult r;
    r.artifacts.push_back({"field_u.csv", csv.text()});
    return r;
}

RunResult run_field_theta(const Scenario& s, const KernelTable& table, const FieldOptions& opt)
{
    const FrontModel model(s, table, opt.epsilon);
    const TemperatureModel tm(model);
    const ThetaField theta(tm, solve_q_smooth(tm, default_grid(model)));
    const auto xs = lattice(s.l1, s.l2, opt.nx);
    Csv field({"t", "x", "theta", "model_T", "q_hat", "q_smooth"});
    Csv traces({"t", "theta_at_phi1", "theta_at_phi2", "theta_at_xstar"});
    const double xstar = s.x_star();
    for (double t : lattice(0.0, s.t_end, opt.nt)) {
        const auto p = theta.at(xs, t);
        for (int j = 0; j < opt.nx; ++j)
            field.row(std::vector<double>{t, xs[j], p[j].theta(), p[j].model_t, p[j].q_hat, p[j].q_smooth});
        const FrontState f = model.at(t);
        traces.row(std::vector<double>{t, theta.at(f.phi1, t).theta(), theta.at(f.phi2, t).theta(),
                                       theta.at(xstar, t).theta()});
    }
    RunResult r;
    r.artifacts.push_back({"field_theta.csv", field.text()});
    r.artifacts.push_back({"theta_traces.csv", traces.text()});
    return r;
}

RunResult run_verify(const Scenario& s, const KernelTable& table, const VerifyOptions& opt)
{
    const ResidualReport rep = verify(s, table, opt);
    Csv residuals({"functional", "test_fn", "t", "epsilon", "value"});
    for (const ResidualRow& row : rep.rows)
        residuals.row({row.functional, row.test_fn, format_double(row.t), format_double(row.epsilon),
                       format_double(row.value)});

    Csv ladder({"epsilon", "max5", "max6", "max_reconstruction"});
    bool envelope = true;
    for (std::size_t k = 0; k < rep.ladder.size(); ++k) {
        ladder.row(std::vector<double>{rep.ladder[k], rep.max5[k], rep.max6[k], rep.max_reconstruction[k]});
        envelope = envelope && rep.max_reconstruction[k] <= rep.max6[k];
    }

    Csv vcsv({"t", "epsilon", "v1_1", "v1_2", "v2_1", "v2_2", "j1", "j2"});
    for (const VRow& v : rep.v_rows)
        vcsv.row(std::vector<double>{v.t, v.epsilon, v.v.v1_1, v.v.v1_2, v.v.v2_1, v.v.v2_2, v.book.j1, v.book.j2});

    Csv recon({"t", "epsilon", "test_fn", "direct", "predicted"});
    for (const ReconstructionRow& row : rep.reconstruction)
        recon.row({format_double(row.t), format_double(row.epsilon), row.test_fn, format_double(row.direct),
                   format_double(row.predicted)});

    RunResult r;
    r.checks = {{"slope5", rep.slope5.slope >= 0.8},
                {"slope6", rep.slope6.slope >= 0.25},
                {"v2", rep.max_v2 <= 1e-10},
                {"reconstruction", envelope}};
    auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };
    Csv report({"slope5", "slope6", "mu", "max_v2", "slope_reconstruction", "verdict5", "verdict6", "verdict_v2",
                "verdict_reconstruction"});
    report.row({format_double(rep.slope5.slope), format_double(rep.slope6.slope), format_double(rep.slope6.slope),
                format_double(rep.max_v2), format_double(rep.slope_reconstruction.slope), verdict(r.checks[0].second),
                verdict(r.checks[1].second), verdict(r.checks[2].second), verdict(r.checks[3].second)});

    r.artifacts = {{"residuals.csv", residuals.text()},
                   {"report.csv", report.text()},
                   {"ladder.csv", ladder.text()},
                   {"v_coefficients.csv", vcsv.text()},
                   {"reconstruction.csv", recon.text()}};
    r.summary.push_back("verify: slope5 " + format_double(rep.slope5.slope) + ", slope6 " +
                        format_double(rep.slope6.slope) + ", max V2 " + format_double(rep.max_v2));
    return r;
}

FdGrid resolve_grid(const Scenario& s, const PdeOptions& opt)
{
    FdGrid g = default_fd_grid(s, opt.epsilon);
    if (opt.nx) g.nx = *opt.nx;
    if (opt.dt) g.dt = *opt.dt;
    check_fd_grid(s, opt.epsilon, g);
    return g;
}

namespace {

FdSolution fd_run(const FrontModel& model, const PdeOptions& opt)
{
    const TemperatureModel tm(model);
    return solve_system(tm, resolve_grid(model.scenario(), opt), {.frames = std::max(2, opt.frames)});
}

Artifact fd_fronts_csv(const FdSolution& fd)
{
    Csv csv({"t", "count", "front1", "front2", "theta_mid", "balance"});
    const double nan = std::nan("");
    for (const FdTraceRow& row : fd.trace) {
        const double a = row.fronts.empty() ? nan : row.fronts.front();
        const double b = row.fronts.size() < 2 ? nan : row.fronts.back();
        csv.row(std::vector<double>{row.t, static_cast<double>(row.fronts.size()), a, b, row.theta_mid, row.balance});
    }
    return {"fd_fronts.csv", csv.text()};
}

}  // namespace

RunResult run_pde(const Scenario& s, const KernelTable& table, const PdeOptions& opt)
{
    const FrontModel model(s, table, opt.epsilon);
    const FdSolution fd = fd_run(model, opt);
    Csv fields({"t", "x", "u", "theta"});
    for (int n = 0; n < fd.u.nt(); ++n)
        for (int j = 0; j < fd.u.nx(); ++j)
            fields.row(std::vector<double>{fd.u.t(n), fd.u.x(j), fd.u(n, j), fd.theta(n, j)});
    RunResult r;
    r.artifacts = {{"fd_fields.csv", fields.text()}, fd_fronts_csv(fd)};
    r.summary.push_back("pde: nx " + std::to_string(fd.grid.nx) + ", dt " + format_double(fd.grid.dt) + ", " +
                        std::to_string(fd.trace.size() - 1) + " steps");
    return r;
}

CompareVerdict judge_comparison(const FrontModel& model, const FdSolution& fd)
{
    CompareVerdict v;
    const double eps = fd.epsilon;
    v.report = compare(model, fd, 10.0 * eps);
    v.front_tolerance = 5.0 * eps;
    v.t_star_tolerance = 10.0 * eps * eps + 5.0 * fd.grid.dt;
    v.fronts_ok = v.report.front_error <= v.front_tolerance;
    v.t_star_ok = std::abs(v.report.t_star_fd - v.report.t_star) <= v.t_star_tolerance;
    return v;
}

RunResult run_compare(const Scenario& s, const KernelTable& table, const PdeOptions& opt)
{
    const FrontModel model(s, table, opt.epsilon);
    const FdSolution fd = fd_run(model, opt);
    const CompareVerdict v = judge_comparison(model, fd);
    const ComparisonReport& c = v.report;
    Csv csv({"epsilon", "front_error", "front_tolerance", "t_star", "t_star_fd", "t_star_error", "t_star_tolerance",
             "x_star_fd", "phases_agree", "dip_depth", "dip_predicted"});
    csv.row(std::vector<double>{opt.epsilon, c.front_error, v.front_tolerance, c.t_star, c.t_star_fd,
                                c.t_star_fd - c.t_star, v.t_star_tolerance, c.x_star_fd, c.phases_agree ? 1.0 : 0.0,
                                c.dip_depth, c.dip_predicted});
    RunResult r;
    r.artifacts = {{"comparison.csv", csv.text()}, fd_fronts_csv(fd)};
    r.checks = {{"front_paths", v.fronts_ok}, {"confluence_time", v.t_star_ok}, {"phase_count", c.phases_agree}};
    r.summary.push_back("compare: front error " + format_double(c.front_error) + " (tolerance " +
                        format_double(v.front_tolerance) + "), t*_fd - t* = " + format_double(c.t_star_fd - c.t_star) +
                        " (tolerance " + format_double(v.t_star_tolerance) + ")");
    return r;
}

RunResult run_jump(const Scenario& s, const KernelTable& table, const PdeOptions& opt)
{
    const FrontModel model(s, table, opt.epsilon);
    const ContactEffects ce = contact_effects(assemble_fronts(model, uniform_times(0.0, s.t_end, 4001)), s);
    const double predicted = ce.temperature_jump;
    double measured = std::nan("");
    std::string note = "fd fronts merged";
    try {
        measured = judge_comparison(model, fd_run(model, opt)).report.dip_depth;
    } catch (const NoConfluence& e) {
        note = e.what();
    }
    const bool negative = measured < 0.0;
    const bool within = std::abs(measured - predicted) <= 0.3 * std::abs(predicted);
    Csv csv({"epsilon", "t_contact", "velocity_sum", "predicted", "measured", "relative_error"});
    csv.row(std::vector<double>{opt.epsilon, ce.t_contact, ce.velocity_sum, predicted, measured,
                                std::abs(measured - predicted) / std::abs(predicted)});
    RunResult r;
    r.artifacts = {{"jump.csv", csv.text()}};
    r.checks = {{"dip_negative", negative}, {"dip_within_30_percent", within}};
    r.summary.push_back("jump: predicted " + format_double(predicted) + ", measured " + format_double(measured) +
                        " (" + note + ")");
    return r;
}

}  // namespace confluence
