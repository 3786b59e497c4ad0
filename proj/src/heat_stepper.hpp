#pragma once

#include <array>
#include <vector>

// Shared by the remainder solve and the finite-difference reference; not installed.
namespace confluence::detail {

// Thomas algorithm for a constant tridiagonal matrix (sub = sup = -a, diag = d) with
// modified first/last rows for Neumann closure.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    std::vector<double> solve(std::vector<double> rhs) const
    {
        const std::size_t n = diag.size();
        std::vector<double> c(n), d(n);
        c[0] = upper[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * c[i - 1];
            c[i] = i + 1 < n ? upper[i] / m : 0.0;
            d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
        }
        for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
        return d;
    }
};

// One theta-scheme step of q_t = q_xx + f on a uniform grid.
class HeatStepper {
public:
    HeatStepper(int nx, double dx, bool neumann) : nx_(nx), dx_(dx), neumann_(neumann) {}

    // q: values at all nodes; f: forcing at all nodes (time-centred for the step);
    // bc_old/bc_new: Dirichlet values or Neumann slopes.
    void step(std::vector<double>& q, const std::vector<double>& f, double dt, double theta,
              std::array<double, 2> bc_old, std::array<double, 2> bc_new) const
    {
        const double lam = dt / (dx_ * dx_);
        if (!neumann_) {
            const int m = nx_ - 2;
            Tridiagonal a;
            a.lower.assign(m, -theta * lam);
            a.upper.assign(m, -theta * lam);
            a.diag.assign(m, 1.0 + 2.0 * theta * lam);
            std::vector<double> rhs(m);
            for (int i = 0; i < m; ++i) {
                const int j = i + 1;
                const double lap = q[j - 1] - 2.0 * q[j] + q[j + 1];
                rhs[i] = q[j] + (1.0 - theta) * lam * lap + dt * f[j];
            }
            rhs[0] += theta * lam * bc_new[0];
            rhs[m - 1] += theta * lam * bc_new[1];
            const auto sol = a.solve(std::move(rhs));
            q[0] = bc_new[0];
            q[nx_ - 1] = bc_new[1];
            for (int i = 0; i < m; ++i) q[i + 1] = sol[i];
            return;
        }
        // ghost nodes q[-1] = q[1] - 2 dx g0 and q[n] = q[n-2] + 2 dx g1
        const int n = nx_;
        Tridiagonal a;
        a.lower.assign(n, -theta * lam);
        a.upper.assign(n, -theta * lam);
        a.diag.assign(n, 1.0 + 2.0 * theta * lam);
        a.upper[0] = -2.0 * theta * lam;
        a.lower[n - 1] = -2.0 * theta * lam;
        std::vector<double> rhs(n);
        auto lap = [&](int j) {
            if (j == 0) return 2.0 * (q[1] - q[0]) - 2.0 * dx_ * bc_old[0];
            if (j == n - 1) return 2.0 * (q[n - 2] - q[n - 1]) + 2.0 * dx_ * bc_old[1];
            return q[j - 1] - 2.0 * q[j] + q[j + 1];
        };
        for (int j = 0; j < n; ++j) rhs[j] = q[j] + (1.0 - theta) * lam * lap(j) + dt * f[j];
        rhs[0] -= theta * lam * 2.0 * dx_ * bc_new[0];
        rhs[n - 1] += theta * lam * 2.0 * dx_ * bc_new[1];
        q = a.solve(std::move(rhs));
    }

private:
    int nx_;
    double dx_;
    bool neumann_;
};

}  // namespace confluence::detail
