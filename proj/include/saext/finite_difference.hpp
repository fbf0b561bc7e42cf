#pragma once

#include <complex>
#include <span>
#include <vector>

namespace saext::fd {

/// Finite-difference weights for the derivatives 0..max_order at x0 on
/// arbitrary distinct nodes (Fornberg's recursion). Row k of the result holds
/// the weights of the k-th derivative.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order);

/// Derivative of sampled data. Interior points use a centered stencil of
/// accuracy+1 nodes; near the ends the window is clamped to the grid and
/// widened to accuracy+order nodes, so the formal order is `accuracy`
/// everywhere. Works on non-uniform grids.
std::vector<std::complex<double>> differentiate(std::span<const double> xs,
                                                std::span<const std::complex<double>> values,
                                                int order, int accuracy = 4);

/// Derivative at a single node index with the same stencil policy.
std::complex<double> derivative_at(std::span<const double> xs,
                                   std::span<const std::complex<double>> values,
                                   std::size_t index, int order, int accuracy = 4);

}  // namespace saext::fd
