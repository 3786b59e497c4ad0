#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

namespace confluence {

// a0 + a1 t + a2 t^2 + a3 t^3
struct Cubic {
    std::array<double, 4> c{};

    double operator()(double t) const noexcept { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); }
    double d(double t) const noexcept { return c[1] + t * (2.0 * c[2] + 3.0 * t * c[3]); }
    double dd(double t) const noexcept { return 2.0 * c[2] + 6.0 * t * c[3]; }

    static Cubic constant(double v) { return {{v, 0.0, 0.0, 0.0}}; }
    friend bool operator==(const Cubic&, const Cubic&) = default;
};

enum class BoundaryKind { dirichlet, neumann };

// Temperature data at x = l1 and x = l2. With `reference` set the Dirichlet values are
// taken from the reference Stefan solution instead of the cubics.
struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::dirichlet;
    Cubic left;
    Cubic right;
    bool reference = false;
    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

// Which scalar relation closes the interaction variable eta(tau).
enum class EtaEquation {
    // eta (1 + tanh eta) = beta ln(1 + e^{2 tau})
    printed,
    // G(eta) = ln(1 + e^{2 tau}) with G' making the summed delta balance exact
    balanced,
};

// Kernel in the cumulative part of phi_11 + phi_21.
enum class SumKernel {
    // the two front contributions cancel, K = 0
    none,
    // K' = beta_tau / beta^2 * Bz / (B_Omega + C_Omega)
    b_omega,
    // K' = beta_tau / beta^2 * Bz / (Bz + C_Omega)
    bz_omega,
};

struct ModelOptions {
    EtaEquation eta_equation = EtaEquation::printed;
    SumKernel sum_kernel = SumKernel::none;
    friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

// Explicit travelling solution of the sharp-interface problem: two fronts closing at
// speed v, constant temperature between them and an exponential profile outside.
struct TravellingReference {
    double speed = 0.0;
    double kinetic = 0.0;
    double phi10_0 = 0.0;
    double phi20_0 = 0.0;

    double phi10(double t) const noexcept { return phi10_0 + speed * t; }
    double phi20(double t) const noexcept { return phi20_0 - speed * t; }
    double theta(double x, double t) const noexcept;
    double theta_x(double x, double t) const noexcept;
    double theta_t(double x, double t) const noexcept;
};

struct Scenario {
    std::string name = "scenario";
    double l1 = -1.0;
    double l2 = 1.0;
    double t_end = 1.0;
    double t_star = 0.5;
    double epsilon = 0.05;
    double kappa = 1.0;
    Cubic phi10;
    Cubic phi20;
    Cubic gamma1_plus;
    Cubic gamma1_minus;
    Cubic gamma2_plus;
    Cubic gamma2_minus;
    BoundaryCondition bc;
    bool travelling = false;
    ModelOptions model;

    double psi0(double t) const noexcept { return phi20(t) - phi10(t); }
    double psi0_t(double t) const noexcept { return phi20.d(t) - phi10.d(t); }
    double length() const noexcept { return l2 - l1; }
    double x_star() const noexcept { return 0.5 * (phi10(t_star) + phi20(t_star)); }
    // velocity sum over velocity difference, (phi10_t + phi20_t) / psi0_t
    double sum_ratio(double t) const noexcept;
    double sum_ratio_t(double t) const noexcept;

    // Travelling reference, present only when the scenario requests it.
    std::optional<TravellingReference> reference() const;

    // Throws ValidationError naming the first violated condition.
    void validate() const;
};

// theta |_{phi_i} = (-1)^{i+1} k phi_it for a travelling front of the Allen-Cahn layer.
double kinetic_coefficient(double kappa) noexcept;

// Smooth cutoff: 1 on the plateau covering the fronts up to contact, quintic rolloff to 0 at the walls.
class Cutoff {
public:
    explicit Cutoff(const Scenario& s);
    double operator()(double x) const noexcept;
    double d(double x) const noexcept;
    double dd(double x) const noexcept;
    double plateau_lo() const noexcept { return a_; }
    double plateau_hi() const noexcept { return b_; }

private:
    double l1_, l2_, a_, b_;
};

// Straight fronts phi10 = x1 + v1 t, phi20 = x2 + v2 t. The Stefan jumps sit on the outer
// side of each front: gamma1- = 2 v1, gamma2+ = -2 v2, inner slopes zero.
Scenario make_linear_scenario(const std::string& name, double x1, double v1, double x2, double v2, double l1,
                              double l2, double t_end);
// Symmetric pair closing at speed v from +-half_gap, driven by the travelling reference.
Scenario make_travelling_scenario(double half_gap, double speed, double l1, double l2, double t_end);

// Key-value text format.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& s);

}  // namespace confluence
