#pragma once

#include "confluence/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace confluence {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    int initial_panels = 32;
    int max_panels = 4000;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1]; the Gauss nodes are the odd Kronrod indices.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::array<double, N> value{};
    double error = 0.0;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::size_t N, class F>
Panel<N> gk15(const F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, N> kron{};
    std::array<double, N> gauss{};
    auto accumulate = [&](const std::array<double, N>& v, double wk, double wg) {
        for (std::size_t k = 0; k < N; ++k) {
            kron[k] += wk * v[k];
            gauss[k] += wg * v[k];
        }
    };
    accumulate(f(c), kWgk[7], kWg[3]);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double wg = (j % 2 == 1) ? kWg[j / 2] : 0.0;
        accumulate(f(c - dx), kWgk[j], wg);
        accumulate(f(c + dx), kWgk[j], wg);
    }
    Panel<N> p;
    p.a = a;
    p.b = b;
    double err = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        p.value[k] = h * kron[k];
        err = std::max(err, std::abs(h * (kron[k] - gauss[k])));
    }
    p.error = err;
    return p;
}

}  // namespace detail

// Globally adaptive GK15 for a vector of integrands sharing one panel tree.
// The error estimate is the componentwise maximum. Breakpoints inside (a, b)
// are honored as panel edges. Reversed limits flip the sign.
template <std::size_t N, class F>
std::array<double, N> integrate_vector(const F& f, double a, double b,
                                       const QuadratureOptions& opt = {},
                                       std::span<const double> breakpoints = {})
{
    if (b < a) {
        auto r = integrate_vector<N>(f, b, a, opt, breakpoints);
        for (auto& v : r) v = -v;
        return r;
    }
    std::vector<double> edges;
    edges.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const int segments = static_cast<int>(edges.size()) - 1;
    const int per_segment = std::max(1, opt.initial_panels / std::max(1, segments));
    std::priority_queue<detail::Panel<N>> heap;
    for (int s = 0; s < segments; ++s) {
        const double h = (edges[s + 1] - edges[s]) / per_segment;
        for (int i = 0; i < per_segment; ++i) {
            const double lo = edges[s] + i * h;
            const double hi = (i + 1 == per_segment) ? edges[s + 1] : lo + h;
            heap.push(detail::gk15<N>(f, lo, hi));
        }
    }

    auto totals = [&heap]() {
        std::array<double, N> v{};
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            const auto& p = copy.top();
            for (std::size_t k = 0; k < N; ++k) v[k] += p.value[k];
            e += p.error;
            copy.pop();
        }
        return std::pair{v, e};
    };

    double total_error = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            total_error += copy.top().error;
            copy.pop();
        }
    }
    int panels = static_cast<int>(heap.size());
    while (total_error > opt.abs_tol) {
        if (panels >= opt.max_panels) {
            throw NonConvergence("adaptive quadrature exhausted " + std::to_string(opt.max_panels) +
                                 " panels, error estimate " + std::to_string(total_error));
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NonConvergence("adaptive quadrature hit floating point resolution");
        }
        auto left = detail::gk15<N>(f, worst.a, mid);
        auto right = detail::gk15<N>(f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
        // the running sum drifts; refresh it occasionally
        if (panels % 256 == 0) total_error = totals().second;
    }
    return totals().first;
}

template <class F>
double integrate(const F& f, double a, double b, const QuadratureOptions& opt = {},
                 std::span<const double> breakpoints = {})
{
    auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
    return integrate_vector<1>(wrapped, a, b, opt, breakpoints)[0];
}

// Integral over the real line, truncated to [-40, 40] where profile tails are below 1e-34.
double integrate_line(const std::function<double(double)>& f, double tol = 1e-12);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

}  // namespace confluence
