#include "saext/finite_difference.hpp"

#include <algorithm>

#include "saext/error.hpp"

namespace saext::fd {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order) {
    const auto n = static_cast<int>(nodes.size());
    if (n <= max_order) {
        throw Error(Errc::degenerate_grid, "stencil too small for requested derivative",
                    "fornberg_weights");
    }
    std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order + 1),
                                       std::vector<double>(nodes.size(), 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

namespace {

struct Window {
    std::size_t lo;
    std::size_t width;
};

Window stencil_window(std::size_t n, std::size_t i, int order, int accuracy) {
    const auto centered = static_cast<std::size_t>(accuracy + 1 - (accuracy % 2));
    const std::size_t half = centered / 2;
    if (i >= half && i + half < n) {
        return {i - half, centered};
    }
    const auto width = std::min(n, static_cast<std::size_t>(accuracy + order));
    const std::size_t lo = (i < half) ? 0 : n - width;
    return {lo, width};
}

}  // namespace

std::complex<double> derivative_at(std::span<const double> xs,
                                   std::span<const std::complex<double>> values,
                                   std::size_t index, int order, int accuracy) {
    const std::size_t n = xs.size();
    if (n < static_cast<std::size_t>(accuracy + order)) {
        throw Error(Errc::degenerate_grid, "grid too coarse for the finite-difference stencil",
                    "derivative_at");
    }
    const Window w = stencil_window(n, index, order, accuracy);
    const auto weights = fornberg_weights(xs[index], xs.subspan(w.lo, w.width), order);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < w.width; ++k) {
        acc += weights[static_cast<std::size_t>(order)][k] * values[w.lo + k];
    }
    return acc;
}

std::vector<std::complex<double>> differentiate(std::span<const double> xs,
                                                std::span<const std::complex<double>> values,
                                                int order, int accuracy) {
    if (xs.size() != values.size()) {
        throw Error(Errc::grid_mismatch, "sample count differs from grid size", "differentiate");
    }
    std::vector<std::complex<double>> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = derivative_at(xs, values, i, order, accuracy);
    }
    return out;
}

}  // namespace saext::fd
