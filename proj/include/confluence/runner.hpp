#pragma once

#include "confluence/kernels.hpp"
#include "confluence/pde_reference.hpp"
#include "confluence/scenario.hpp"
#include "confluence/weak_residuals.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace confluence {

inline constexpr std::string_view tool_version = "1.0.0";

// 17 significant digits, so every double survives a round trip through the text.
std::string format_double(double v);

// Header row plus data rows, built column-consistently.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    Csv& row(const std::vector<double>& values);
    Csv& row(const std::vector<std::string>& cells);
    const std::string& text() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

struct Artifact {
    std::string name;
    std::string content;
};

// What one subcommand produced and whether its checks held.
struct RunResult {
    std::vector<Artifact> artifacts;
    // (name, passed) for every acceptance predicate the command evaluates
    std::vector<std::pair<std::string, bool>> checks;
    // human-readable summary lines for stdout
    std::vector<std::string> summary;
    bool passed() const;
};

struct RunManifest {
    std::string command;
    std::string scenario_path;
    std::vector<std::pair<std::string, std::string>> parameters;
};

std::string sha256_hex(std::string_view data);
// Writes every artifact and manifest.txt into dir (created if missing); returns the manifest text.
std::string write_artifacts(const std::filesystem::path& dir, const RunResult& result, const RunManifest& manifest);

struct KernelDumpOptions {
    double eta_min = 0.0;
    double eta_max = 30.0;
    int nodes = 400;
};
RunResult run_kernels_dump(const KernelDumpOptions& opt);

RunResult run_fronts(const Scenario& s, const KernelTable& table, double eps, int nt = 1001);

struct FieldOptions {
    double epsilon = 0.05;
    int nx = 401;
    int nt = 101;
};
RunResult run_field_u(const Scenario& s, const KernelTable& table, const FieldOptions& opt);
RunResult run_field_theta(const Scenario& s, const KernelTable& table, const FieldOptions& opt);

RunResult run_verify(const Scenario& s, const KernelTable& table, const VerifyOptions& opt);

struct PdeOptions {
    double epsilon = 0.05;
    // defaults from default_fd_grid when unset
    std::optional<int> nx;
    std::optional<double> dt;
    int frames = 21;
};
FdGrid resolve_grid(const Scenario& s, const PdeOptions& opt);
RunResult run_pde(const Scenario& s, const KernelTable& table, const PdeOptions& opt);
RunResult run_compare(const Scenario& s, const KernelTable& table, const PdeOptions& opt);
RunResult run_jump(const Scenario& s, const KernelTable& table, const PdeOptions& opt);

// Acceptance predicates of the fd comparison, shared with the acceptance suite.
struct CompareVerdict {
    ComparisonReport report;
    double front_tolerance = 0.0;
    double t_star_tolerance = 0.0;
    bool fronts_ok = false;
    bool t_star_ok = false;
};
CompareVerdict judge_comparison(const FrontModel& model, const FdSolution& fd);

}  // namespace confluence
