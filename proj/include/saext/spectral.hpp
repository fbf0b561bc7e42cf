#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "saext/core.hpp"

namespace saext {

struct Eigenpair {
    int n;
    double value;
    GridFunction eigenfunction;
};

/// Continuous part on the half line: spectrum [threshold, inf) with the
/// reflection phase k -> theta(alpha, k).
struct ContinuousPart {
    double threshold = 0.0;
    std::function<double(double)> reflection_phase;
};

struct SpectrumResult {
    std::vector<Eigenpair> discrete;
    std::optional<ContinuousPart> continuous;
};

/// p_n = (2 n pi + theta) / L for n in [n_min, n_max] with eigenfunctions
/// e^{i p_n (x - a)} / sqrt(L) sampled on `grid_points` points of [a, b].
SpectrumResult momentum_spectrum(double theta, const Interval& interval, int n_min, int n_max,
                                 std::size_t grid_points = 2001);

/// Infinite well of width a: E_n = (n pi / a)^2 (times hbar^2/2m), psi_n =
/// sqrt(2/a) sin(n pi x / a). Indices start at 1.
SpectrumResult well_spectrum(double a, int n_min, int n_max, std::size_t grid_points = 2001,
                             const UnitSystem& units = {});

/// n-th eigenvalue of the second-order Dirichlet Laplacian -d^2/dx^2 on [0, a]
/// with `interior` unknowns, from a tridiagonal eigensolve.
double well_fd_eigenvalue(double a, int n, std::size_t interior);

/// Richardson extrapolation of well_fd_eigenvalue from spacings h and h/2,
/// starting from `intervals` subintervals.
double well_fd_richardson(double a, int n, std::size_t intervals);

struct BoundState {
    double energy;
    GridFunction psi;
};

/// The Robin(alpha) bound state sqrt(2|alpha|) e^{alpha x} with E = -alpha^2,
/// sampled on [0, 30/|alpha|]. Absent for alpha >= 0.
std::optional<BoundState> bound_state(double alpha, std::size_t grid_points = 20001);

struct ShootingOptions {
    /// Energy bracket; defaults to [-4 alpha^2, -alpha^2 / 4].
    std::optional<std::pair<double, double>> bracket;
    /// Starting point of the inward integration; defaults to 30/|alpha|.
    std::optional<double> x_max;
    double tolerance = 1e-12;
};

/// Bound-state energy by shooting: integrate -psi'' = E psi inward from x_max
/// with decaying data and bisect on psi'(0) - alpha psi(0).
double bound_state_shooting(double alpha, const ShootingOptions& options = {});

struct Reflection {
    cplx R;
    /// theta = -arg R.
    double phase;
};

/// R = (ik + alpha)/(ik - alpha); alpha = inf gives R = -1.
Reflection reflection_coefficient(double k, double alpha);

/// psi = e^{-ikx} + R e^{ikx}, unnormalized, carrying its closed form.
GridFunction scattering_state(double k, double alpha, std::vector<double> grid);

/// Half-line Hamiltonian with Robin(alpha): the bound state (if any) as the
/// discrete part and the continuum from 0 with its reflection phase.
SpectrumResult halfline_spectrum(double alpha, std::size_t grid_points = 20001);

/// One eigenpair of the twisted one-sided difference matrix on [0,1].
struct DiscreteMode {
    int n;
    cplx value;
    /// Unit l2-norm eigenvector on x_j = j/N.
    std::vector<cplx> vector;
};

/// Apply the N x N twisted difference matrix: (P psi)_j = (-i N)(psi_{j+1} -
/// psi_j), with psi_N = e^{i theta} psi_0.
std::vector<cplx> apply_discretized_momentum(double theta, std::span<const cplx> psi);

/// All eigenvalues of the twisted difference matrix sorted by modulus. The
/// matrix is gauge-equivalent to a circulant, so they are obtained with one
/// FFT. N must be at least 64.
std::vector<cplx> discretized_momentum_eigs(double theta, std::size_t N);

/// Same eigenvalues from a dense complex eigensolver (cost O(N^3)).
std::vector<cplx> discretized_momentum_eigs_dense(double theta, std::size_t N);

/// Eigenpair that approximates p = 2 n pi + theta.
DiscreteMode discretized_momentum_mode(double theta, std::size_t N, int n);

}  // namespace saext
