#pragma once

#include "confluence/execution.hpp"
#include "confluence/front_dynamics.hpp"
#include "confluence/temperature_field.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace confluence {

// Compactly supported C-infinity bump exp(1 - 1/(1 - r^2)), r = (x - center) / width, or its
// r-derivative. Both are O(1) in size whatever the width.
class TestFunction {
public:
    enum class Kind { bump, bump_derivative };

    TestFunction(double center, double width, Kind kind = Kind::bump, std::string name = {});

    double center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    double lo() const noexcept { return center_ - width_; }
    double hi() const noexcept { return center_ + width_; }

    // value and the first two x-derivatives
    std::array<double, 3> jet(double x) const noexcept;
    double operator()(double x) const noexcept { return jet(x)[0]; }
    double d(double x) const noexcept { return jet(x)[1]; }

private:
    double center_;
    double width_;
    Kind kind_;
    std::string name_;
};

// Twelve bumps tiling the domain at three widths, then four functions riding on the fronts at f.t.
std::vector<TestFunction> test_family(const Scenario& s, const FrontState& f);

// Field values at one quadrature node. theta_t and theta_x are the parts of the temperature that
// are paired directly; the heat potentials enter through source and the grid remainder through
// q_smooth (paired with zeta'' after integrating by parts).
struct WeakSample {
    double x = 0.0;
    double w = 0.0;
    double u = 0.0;
    double u_t = 0.0;
    double u_x = 0.0;
    double theta = 0.0;
    double theta_t = 0.0;
    double theta_x = 0.0;
    double source = 0.0;
    double q_smooth = 0.0;
};

// int (u_t + theta_t) zeta + theta_x zeta'
double heat_functional(std::span<const WeakSample> samples, const TestFunction& zeta);
// eps int u_t u_x xi + eps/2 int u_x^2 xi' - 1/eps int F(u) xi' + kappa int u (theta xi)_x,
// the last term taken as -kappa int u_x theta xi.
double allen_cahn_functional(std::span<const WeakSample> samples, const TestFunction& xi, double eps,
                             double kappa);

// All fields of one epsilon at one instant, on composite Gauss panels that resolve both layers.
class Snapshot {
public:
    Snapshot(const ThetaField& theta, double t, Execution exec = Execution::parallel);

    double heat(const TestFunction& zeta) const;
    double allen_cahn(const TestFunction& xi) const;

    const FrontState& fronts() const noexcept { return front_; }
    std::span<const WeakSample> samples() const noexcept { return samples_; }
    // assembled temperature at phi1 and phi2
    const std::array<double, 2>& traces() const noexcept { return traces_; }
    double epsilon() const noexcept { return front_.epsilon; }
    double kappa() const noexcept { return kappa_; }

private:
    FrontState front_;
    double kappa_;
    std::vector<WeakSample> samples_;
    // interior source collapsed to a point once the gap is below rounding
    double point_mass_ = 0.0;
    double point_at_ = 0.0;
    std::array<double, 2> traces_{};
};

double residual_heat(const TestFunction& zeta, double t, const ThetaField& theta);
double residual_allen_cahn(const TestFunction& xi, double t, const ThetaField& theta);

// int z P Omega_z dz, the weight of the beta_t stretching term at the first front; the second
// front carries its negative.
double stretch_weight(double eta);

// Predicted delta and delta' weights of the Allen-Cahn functional:
//   F(xi) = V1_1 xi(phi1) + V1_2 xi(phi2) + V2_1 xi'(phi1) + V2_2 xi'(phi2) + small.
struct VCoefficients {
    double v1_1 = 0.0;
    double v1_2 = 0.0;
    double v2_1 = 0.0;
    double v2_2 = 0.0;
    double predict(const FrontState& f, const TestFunction& xi) const;
};

VCoefficients v_coefficients(const FrontState& f, const std::array<double, 2>& traces, double kappa);

// J_i = B (gamma_i+ + gamma_i-) - A_i, the unmatched delta weights of the heat equation.
struct DeltaBook {
    double a1 = 0.0;
    double a2 = 0.0;
    double stefan1 = 0.0;  // B (gamma1+ + gamma1-)
    double stefan2 = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double sum() const noexcept { return j1 + j2; }
};

DeltaBook delta_cancellation(const FrontState& f, const Scenario& s);

// A smooth step from 0 to 1 and its derivative.
struct StepProfile {
    std::function<double(double)> value;
    std::function<double(double)> slope;
};
StepProfile tanh_step(double steepness = 1.0);

// <w1((x-x1)/eps) w2((x-x2)/eps) - B1 H(x-x1) - B2 H(x-x2), zeta> with the exact B1, B2.
double product_linearization_defect(const StepProfile& w1, const StepProfile& w2, double x1, double x2,
                                    double eps, const TestFunction& zeta);
// eps^-1 <w(beta (x - phi) / eps), zeta> - beta^-1 (int w) zeta(phi)
double layer_moment_defect(const std::function<double(double)>& w, double beta, double phi, double eps,
                           const TestFunction& zeta);
// eps^-1 <w((x - phi) / eps) q, zeta> - q(phi) zeta(phi) int w, with q sampled on the given nodes
double layer_product_defect(const std::function<double(double)>& w, double phi, double eps,
                            const TestFunction& zeta, const std::function<double(double)>& q);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    // residual standard error of the log-log regression
    double confidence = 0.0;
    std::size_t points = 0;
};

// Least squares of ln|value| on ln(scale). Needs four points; a value at or below the floor
// (or not finite) raises DegenerateFit.
ScalingFit fit_scaling(std::span<const double> scale, std::span<const double> values, double floor = 1e-300);

// Exponent mu of |q(phi1) - q(phi2)| ~ psi^mu from the heat potentials while the gap closes after contact.
ScalingFit holder_trace_fit(const Duhamel& d);

struct VerifyOptions {
    std::vector<double> ladder{0.1, 0.05, 0.025, 0.0125};
    int samples = 16;
    // sampled window is [t_star / 8, t_star - margin * min(ladder)]
    double margin = 10.0;
    Execution execution = Execution::parallel;
};

struct ResidualRow {
    std::string functional;
    std::string test_fn;
    double t = 0.0;
    double epsilon = 0.0;
    double value = 0.0;
};

struct VRow {
    double t = 0.0;
    double epsilon = 0.0;
    VCoefficients v;
    DeltaBook book;
};

struct ReconstructionRow {
    double t = 0.0;
    double epsilon = 0.0;
    std::string test_fn;
    double direct = 0.0;
    double predicted = 0.0;
};

struct ResidualReport {
    std::vector<double> ladder;
    std::vector<double> times;
    std::vector<ResidualRow> rows;
    std::vector<double> max5;  // per ladder entry, worst over family and times
    std::vector<double> max6;
    ScalingFit slope5;
    ScalingFit slope6;
    std::vector<VRow> v_rows;
    double max_v2 = 0.0;
    std::vector<ReconstructionRow> reconstruction;
    std::vector<double> max_reconstruction;  // per ladder entry
    ScalingFit slope_reconstruction;
};

ResidualReport verify(const Scenario& s, const KernelTable& table, const VerifyOptions& opt = {});

}  // namespace confluence
