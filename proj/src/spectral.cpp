#include "saext/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

namespace saext {

SpectrumResult momentum_spectrum(double theta, const Interval& interval, int n_min, int n_max,
                                 std::size_t grid_points) {
    if (!interval.is_finite()) {
        throw Error(Errc::unsupported_operator,
                    "momentum has no self-adjoint realization off a finite interval",
                    "momentum_spectrum");
    }
    if (n_max < n_min) {
        throw Error(Errc::invalid_index, "empty index range", "momentum_spectrum");
    }
    const double a = interval.a();
    const double L = interval.length();
    const double amp = 1.0 / std::sqrt(L);
    SpectrumResult out;
    const auto xs = uniform_grid(a, interval.b(), grid_points);
    for (int n = n_min; n <= n_max; ++n) {
        const double p = (two_pi * n + theta) / L;
        ClosedForm form{"exp(i*p*x)/sqrt(L)",
                        [p, a, amp](double x) { return amp * std::polar(1.0, p * (x - a)); },
                        interval};
        auto fn = GridFunction::sample(xs, std::move(form));
        // Pin the right endpoint to the boundary condition exactly.
        std::vector<cplx> v(fn.values().begin(), fn.values().end());
        v.back() = std::polar(1.0, theta) * v.front();
        out.discrete.push_back({n, p, fn.with_values(std::move(v))});
    }
    return out;
}

SpectrumResult well_spectrum(double a, int n_min, int n_max, std::size_t grid_points,
                             const UnitSystem& units) {
    if (!(a > 0.0)) throw Error(Errc::invalid_argument, "well width must be positive", "well_spectrum");
    if (n_min <= 0 || n_max < n_min) {
        throw Error(Errc::invalid_index, "well indices start at 1", "well_spectrum");
    }
    SpectrumResult out;
    const auto xs = uniform_grid(0.0, a, grid_points);
    const double amp = std::sqrt(2.0 / a);
    for (int n = n_min; n <= n_max; ++n) {
        const double k = n * pi / a;
        ClosedForm form{"sqrt(2/a)*sin(n*pi*x/a)",
                        [k, amp](double x) { return cplx(amp * std::sin(k * x), 0.0); },
                        Interval::finite(0.0, a)};
        auto fn = GridFunction::sample(xs, std::move(form));
        std::vector<cplx> v(fn.values().begin(), fn.values().end());
        v.front() = 0.0;
        v.back() = 0.0;
        out.discrete.push_back({n, units.energy_scale() * k * k, fn.with_values(std::move(v))});
    }
    return out;
}

double well_fd_eigenvalue(double a, int n, std::size_t interior) {
    if (n <= 0 || static_cast<std::size_t>(n) > interior) {
        throw Error(Errc::invalid_index, "eigenvalue index out of range", "well_fd_eigenvalue");
    }
    const double h = a / static_cast<double>(interior + 1);
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(interior, 2.0 / (h * h));
    Eigen::VectorXd off = Eigen::VectorXd::Constant(interior - 1, -1.0 / (h * h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(n - 1);
}

double well_fd_richardson(double a, int n, std::size_t intervals) {
    const double coarse = well_fd_eigenvalue(a, n, intervals - 1);
    const double fine = well_fd_eigenvalue(a, n, 2 * intervals - 1);
    return (4.0 * fine - coarse) / 3.0;
}

std::optional<BoundState> bound_state(double alpha, std::size_t grid_points) {
    if (!(alpha < 0.0)) return std::nullopt;
    const double amp = std::sqrt(2.0 * std::abs(alpha));
    ClosedForm form{"sqrt(2|alpha|)*exp(alpha*x)",
                    [amp, alpha](double x) { return cplx(amp * std::exp(alpha * x), 0.0); },
                    Interval::half_line(0.0)};
    auto psi = GridFunction::sample(uniform_grid(0.0, halfline_cutoff(alpha), grid_points),
                                    std::move(form));
    return BoundState{-alpha * alpha, std::move(psi)};
}

namespace {

using State = std::array<double, 2>;

// psi'(0)/psi(0) - alpha after integrating from x_max with psi = 1, psi' = -kappa.
double robin_mismatch(double energy, double alpha, double x_max) {
    namespace ode = boost::numeric::odeint;
    const double kappa = std::sqrt(-energy);
    State s{1.0, -kappa};
    auto rhs = [energy](const State& y, State& dy, double) {
        dy[0] = y[1];
        dy[1] = -energy * y[0];
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(1e-13, 1e-13);
    ode::integrate_adaptive(stepper, rhs, s, x_max, 0.0, -x_max / 200.0);
    return s[1] / s[0] - alpha;
}

}  // namespace

double bound_state_shooting(double alpha, const ShootingOptions& options) {
    if (!(alpha < 0.0)) {
        throw Error(Errc::no_bound_state, "shooting needs alpha < 0", "bound_state_shooting");
    }
    const double a2 = alpha * alpha;
    auto [lo, hi] = options.bracket.value_or(std::pair{-4.0 * a2, -0.25 * a2});
    if (!(lo < hi) || !(hi < 0.0)) {
        throw Error(Errc::invalid_argument, "bracket must be an ordered pair of negative energies",
                    "bound_state_shooting");
    }
    const double x_max = options.x_max.value_or(halfline_cutoff(alpha));
    double f_lo = robin_mismatch(lo, alpha, x_max);
    const double f_hi = robin_mismatch(hi, alpha, x_max);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw Error(Errc::no_root, "Robin mismatch does not change sign on the bracket",
                    "bound_state_shooting");
    }
    for (int it = 0; it < 200 && (hi - lo) > options.tolerance * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = robin_mismatch(mid, alpha, x_max);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Reflection reflection_coefficient(double k, double alpha) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw Error(Errc::invalid_argument, "k must be positive", "reflection_coefficient");
    }
    if (std::isinf(alpha)) return {cplx(-1.0, 0.0), -pi};
    if (k == 0.0 && alpha == 0.0) {
        throw Error(Errc::indeterminate, "R is 0/0 at k = 0 with alpha = 0",
                    "reflection_coefficient");
    }
    if (alpha == 0.0) return {cplx(1.0, 0.0), 0.0};
    const cplx R = cplx(alpha, k) / cplx(-alpha, k);
    return {R, -std::arg(R)};
}

GridFunction scattering_state(double k, double alpha, std::vector<double> grid) {
    if (!(k > 0.0)) throw Error(Errc::invalid_argument, "k must be positive", "scattering_state");
    const cplx R = reflection_coefficient(k, alpha).R;
    ClosedForm form{"exp(-i*k*x)+R*exp(i*k*x)",
                    [k, R](double x) { return std::polar(1.0, -k * x) + R * std::polar(1.0, k * x); },
                    Interval::half_line(0.0)};
    return GridFunction::sample(std::move(grid), std::move(form));
}

SpectrumResult halfline_spectrum(double alpha, std::size_t grid_points) {
    SpectrumResult out;
    if (auto bs = bound_state(alpha, grid_points)) {
        out.discrete.push_back({0, bs->energy, std::move(bs->psi)});
    }
    out.continuous = ContinuousPart{
        0.0, [alpha](double k) { return reflection_coefficient(k, alpha).phase; }};
    return out;
}

// ---------------------------------------------------------------------------
// Twisted one-sided difference matrix

std::vector<cplx> apply_discretized_momentum(double theta, std::span<const cplx> psi) {
    const std::size_t N = psi.size();
    const cplx scale(0.0, -static_cast<double>(N));
    const cplx twist = std::polar(1.0, theta);
    std::vector<cplx> out(N);
    for (std::size_t j = 0; j + 1 < N; ++j) out[j] = scale * (psi[j + 1] - psi[j]);
    out[N - 1] = scale * (twist * psi[0] - psi[N - 1]);
    return out;
}

namespace {

std::mutex fftw_planner_mutex;

void require_resolution(std::size_t N) {
    if (N < 64) {
        throw Error(Errc::too_coarse, "discretized momentum needs N >= 64",
                    "discretized_momentum_eigs");
    }
}

void sort_by_modulus(std::vector<cplx>& v) {
    std::stable_sort(v.begin(), v.end(), [](cplx a, cplx b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return a.real() < b.real();
    });
}

// Eigenvalue m of the gauge-transformed circulant, for every m.
std::vector<cplx> circulant_spectrum(double theta, std::size_t N) {
    const int n = static_cast<int>(N);
    fftw_complex* buf = fftw_alloc_complex(N);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j < N; ++j) buf[j][0] = buf[j][1] = 0.0;
    const double Nd = static_cast<double>(N);
    const cplx c0(0.0, Nd);
    const cplx c1 = cplx(0.0, -Nd) * std::polar(1.0, theta / Nd);
    buf[0][0] = c0.real();
    buf[0][1] = c0.imag();
    buf[1][0] = c1.real();
    buf[1][1] = c1.imag();
    fftw_execute(plan);
    std::vector<cplx> out(N);
    for (std::size_t j = 0; j < N; ++j) out[j] = cplx(buf[j][0], buf[j][1]);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return out;
}

}  // namespace

std::vector<cplx> discretized_momentum_eigs(double theta, std::size_t N) {
    require_resolution(N);
    auto eigs = circulant_spectrum(theta, N);
    sort_by_modulus(eigs);
    return eigs;
}

std::vector<cplx> discretized_momentum_eigs_dense(double theta, std::size_t N) {
    require_resolution(N);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
    const cplx scale(0.0, -static_cast<double>(N));
    for (std::size_t j = 0; j < N; ++j) {
        P(j, j) = -scale;
        if (j + 1 < N) P(j, j + 1) = scale;
    }
    P(N - 1, 0) = scale * std::polar(1.0, theta);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(P, false);
    std::vector<cplx> eigs(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
    sort_by_modulus(eigs);
    return eigs;
}

DiscreteMode discretized_momentum_mode(double theta, std::size_t N, int n) {
    require_resolution(N);
    const long Nl = static_cast<long>(N);
    if (std::abs(static_cast<long>(n)) > Nl / 2) {
        throw Error(Errc::invalid_index, "mode index exceeds N/2", "discretized_momentum_mode");
    }
    const std::size_t m = static_cast<std::size_t>(((n % Nl) + Nl) % Nl);
    const auto spectrum = circulant_spectrum(theta, N);
    DiscreteMode mode{n, spectrum[m], std::vector<cplx>(N)};
    // Gauge factor e^{i theta j/N} times the Fourier mode e^{2 pi i m j/N}.
    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    const double Nd = static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double jm = static_cast<double>((j * m) % N);
        const double phase = theta * static_cast<double>(j) / Nd + two_pi * jm / Nd;
        mode.vector[j] = std::polar(norm, phase);
    }
    return mode;
}

}  // namespace saext
