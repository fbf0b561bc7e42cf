#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct Rule {
    std::vector<double> nodes, weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
    Rule r{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// Composite Gauss-Legendre integral of f over [a, b].
template <class F>
auto integrate(F&& f, double a, double b, int panels = 200, int order = 20) {
    static thread_local Rule rule = gauss_legendre(20);
    if (static_cast<int>(rule.nodes.size()) != order) rule = gauss_legendre(order);
    using R = decltype(f(a));
    R acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            const double x = lo + 0.5 * h * (rule.nodes[i] + 1.0);
            acc += 0.5 * h * rule.weights[i] * f(x);
        }
    }
    return acc;
}

/// C-infinity bump exp(-1/(1-u^2)) on (lo, hi) with its first two derivatives.
struct Bump {
    double lo, hi;
    double u(double x) const { return (2.0 * x - lo - hi) / (hi - lo); }
    double du() const { return 2.0 / (hi - lo); }
    double operator()(double x) const {
        const double v = u(x);
        return std::abs(v) < 1.0 ? std::exp(-1.0 / (1.0 - v * v)) : 0.0;
    }
    double d1(double x) const {
        const double v = u(x);
        if (std::abs(v) >= 1.0) return 0.0;
        const double s = 1.0 - v * v;
        return (*this)(x) * (-2.0 * v / (s * s)) * du();
    }
};

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
