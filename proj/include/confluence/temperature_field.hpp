#pragma once

#include "confluence/execution.hpp"
#include "confluence/front_dynamics.hpp"
#include "confluence/scenario.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace confluence {

// Coefficients of the model temperature at one instant. With s = x - mid and r = s / psi:
//   outer:    gamma1- (phi1 - x) on x < phi1, gamma2+ (x - phi2) on x > phi2
//   interior: (w0 + c1 r) psi (1/4 - r^2) on (phi1, phi2)
//   I:        i0 + i1 (x - x*) everywhere
struct TemperatureCoefficients {
    double t = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double mid = 0.0;
    double x_star = 0.0;
    double psi = 0.0;
    double gamma1_minus = 0.0;
    double gamma2_plus = 0.0;
    double w0 = 0.0;
    double c1 = 0.0;
    double i0 = 0.0;
    double i1 = 0.0;
    // switch B(tau) and the derivative jumps it produces at the fronts
    double b = 0.0;
    double jump1 = 0.0;
    double jump2 = 0.0;
};

TemperatureCoefficients temperature_coefficients(const FrontState& f, const Scenario& s);

// Model temperature and its x-derivative (one-sided limits are taken from the right at the fronts).
double model_temperature(double x, const TemperatureCoefficients& c);
double model_temperature_x(double x, const TemperatureCoefficients& c);
double i_part(double x, const TemperatureCoefficients& c);
// Second x-derivative of the interior quadratic, the singular source the heat potentials absorb.
// Zero outside (phi1, phi2).
double interior_source(double x, const TemperatureCoefficients& c);
// Integral of interior_source over [a, b], exact.
double interior_source_integral(double a, double b, const TemperatureCoefficients& c);

// The four heat potentials, split by which half of the switch and which parity they carry.
struct DuhamelParts {
    double q1 = 0.0;       // B, even in x - mid
    double q1_odd = 0.0;   // B, odd
    double q2 = 0.0;       // 1 - B, even
    double q2_odd = 0.0;   // 1 - B, odd
    double sum() const noexcept { return q1 + q1_odd + q2 + q2_odd; }
};

// Heat potentials with L q = interior_source, zero at t = 0, on the whole line.
class Duhamel {
public:
    explicit Duhamel(const FrontModel& model);

    // Fixed composite Gauss rule in s = sqrt(t - t'), refined at the contact window and at s = 0.
    // The source history is computed once per call and shared by all x.
    std::vector<DuhamelParts> at(std::span<const double> x, double t, Execution exec = Execution::parallel) const;
    DuhamelParts at(double x, double t) const;
    // Adaptive reference evaluation of the same integral, absolute tolerance tol.
    DuhamelParts adaptive(double x, double t, double tol = 1e-9) const;

    const FrontModel& model() const noexcept { return *model_; }

private:
    const FrontModel* model_;
    std::vector<double> break_times_;
    std::vector<double> gauss_x_;
    std::vector<double> gauss_w_;

    std::vector<double> sigma_breaks(double t) const;
};

struct GridSpec {
    int nx = 0;
    int nt = 0;
};

// Values on a uniform (t, x) lattice, row-major in t.
class GriddedField {
public:
    GriddedField(double x0, double x1, int nx, double t0, double t1, int nt);

    int nx() const noexcept { return nx_; }
    int nt() const noexcept { return nt_; }
    double dx() const noexcept { return dx_; }
    double dt() const noexcept { return dt_; }
    double x(int j) const noexcept { return x0_ + j * dx_; }
    double t(int n) const noexcept { return t0_ + n * dt_; }
    double& operator()(int n, int j) noexcept { return v_[static_cast<std::size_t>(n) * nx_ + j]; }
    double operator()(int n, int j) const noexcept { return v_[static_cast<std::size_t>(n) * nx_ + j]; }
    std::span<const double> row(int n) const
    {
        return {v_.data() + static_cast<std::size_t>(n) * nx_, static_cast<std::size_t>(nx_)};
    }
    // bilinear, clamped to the lattice
    double interpolate(double x, double t) const;
    int nearest_step(double t) const;

private:
    double x0_, dx_, t0_, dt_;
    int nx_, nt_;
    std::vector<double> v_;
};

// Everything needed to assemble the temperature of one scenario at one epsilon.
// "outer" is e T + q_check: e T alone in synthetic mode, the travelling solution otherwise.
class TemperatureModel {
public:
    explicit TemperatureModel(const FrontModel& model);

    const FrontModel& fronts() const noexcept { return *fronts_; }
    const Scenario& scenario() const noexcept { return fronts_->scenario(); }
    const Cutoff& cutoff() const noexcept { return cutoff_; }
    const Duhamel& duhamel() const noexcept { return duhamel_; }
    const std::optional<TravellingReference>& reference() const noexcept { return reference_; }
    double kinetic() const noexcept { return kinetic_; }

    TemperatureCoefficients coefficients(double t) const;
    double e_model(double x, const TemperatureCoefficients& c) const;
    double q_check(double x, double t, const TemperatureCoefficients& c) const;

    struct Outer {
        double value = 0.0;
        double d_x = 0.0;
        double d_t = 0.0;
    };
    // e T + q_check with its derivatives; the model part is differenced in t with step h
    Outer outer(double x, double t, double h = 1e-6) const;

    // Cell averages over [x_j - dx/2, x_j + dx/2] of the bounded forcing of q_smooth,
    // -L(e T + q_check) taken pointwise plus the interior source it contains.
    std::vector<double> forcing(std::span<const double> x, double dx, double t) const;
    // Dirichlet values (or Neumann slopes) for q_smooth at the two walls.
    std::array<double, 2> boundary_data(double t) const;

private:
    const FrontModel* fronts_;
    Cutoff cutoff_;
    Duhamel duhamel_;
    std::optional<TravellingReference> reference_;
    double kinetic_;
};

// Crank-Nicolson heat solve for the remainder q with zero initial data, started with two
// implicit half steps. Throws ResolutionError when dx > eps / 8 and CflViolation when a
// front crosses more than one cell per step.
GriddedField solve_q_smooth(const TemperatureModel& tm, const GridSpec& grid,
                            Execution exec = Execution::parallel);

// Same scheme for q_t - q_xx = f with homogeneous Dirichlet data.
GriddedField solve_heat_dirichlet(double l1, double l2, double t_end, const GridSpec& grid,
                                  const std::function<double(double, double)>& forcing);

struct ThetaParts {
    double model_t = 0.0;  // e T
    double i_part = 0.0;   // e I, already inside model_t
    double q_check = 0.0;
    double q_hat = 0.0;
    double q_smooth = 0.0;
    double theta() const noexcept { return model_t + q_check + q_hat + q_smooth; }
};

class ThetaField {
public:
    ThetaField(const TemperatureModel& tm, GriddedField q_smooth);

    ThetaParts at(double x, double t) const;
    std::vector<ThetaParts> at(std::span<const double> x, double t, Execution exec = Execution::parallel) const;
    const GriddedField& q_smooth() const noexcept { return q_; }
    const TemperatureModel& model() const noexcept { return *tm_; }

private:
    const TemperatureModel* tm_;
    GriddedField q_;
};

// Grid that satisfies the resolution and Courant bounds for this model.
GridSpec default_grid(const FrontModel& model, double refine = 1.0);

}  // namespace confluence
