#include "saext/discrete.hpp"

#include <cmath>
#include <random>

#include "saext/spectral.hpp"

namespace saext {

cplx ParadoxReport::at(std::string_view name) const {
    for (const auto& q : quantities) {
        if (q.name == name) return q.value;
    }
    throw Error(Errc::invalid_argument, "no such quantity", std::string(name));
}

cplx trace_commutator(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& P) {
    if (X.rows() != X.cols() || P.rows() != P.cols() || X.rows() != P.rows()) {
        throw Error(Errc::invalid_argument, "matrices must be square and of equal size",
                    "trace_commutator");
    }
    return (X * P - P * X).trace();
}

namespace {

Eigen::MatrixXcd random_hermitian(std::size_t N, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd A(N, N);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            A(i, j) = cplx(re, im);
        }
    }
    return 0.5 * (A + A.adjoint());
}

}  // namespace

ParadoxReport trace_commutator_check(std::size_t N, int trials, std::uint64_t seed, double hbar) {
    if (N < 2) throw Error(Errc::invalid_argument, "N must be at least 2", "trace_commutator_check");
    if (trials < 1) throw Error(Errc::invalid_argument, "need at least one trial", "trace_commutator_check");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    double worst_abs = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto X = random_hermitian(N, rng);
        const auto P = random_hermitian(N, rng);
        const double tr = std::abs(trace_commutator(X, P));
        worst_abs = std::max(worst_abs, tr);
        worst = std::max(worst, tr / (X.norm() * P.norm()));
    }
    ParadoxReport r;
    r.id = 2;
    r.quantities = {
        {"max_abs_trace", worst_abs, 0.0},
        {"max_relative_trace", worst, 1e-10},
        {"canonical_trace", cplx(0.0, hbar * static_cast<double>(N)), 0.0},
    };
    r.verdict = "trace of a finite commutator vanishes; the canonical relation needs i*hbar*N";
    return r;
}

CosineBasisMatrix cosine_basis_momentum_matrix(double l, int M, std::size_t quad_points) {
    if (!(l > 0.0)) throw Error(Errc::invalid_argument, "length must be positive", "cosine_basis");
    if (M < 2) throw Error(Errc::invalid_argument, "basis size must be at least 2", "cosine_basis");
    const auto xs = uniform_grid(0.0, l, quad_points);
    const double amp = std::sqrt(2.0 / l);
    // e_m and p e_n = -i e_n' = i amp (n pi / l) sin(n pi x / l), tabulated once.
    std::vector<std::vector<double>> cosines(M), sines(M);
    for (int n = 1; n <= M; ++n) {
        auto& c = cosines[n - 1];
        auto& s = sines[n - 1];
        c.resize(xs.size());
        s.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            c[i] = std::cos(n * pi * xs[i] / l);
            s[i] = std::sin(n * pi * xs[i] / l);
        }
    }
    const auto w = quadrature_weights(xs);
    CosineBasisMatrix out{Eigen::MatrixXcd(M, M), Eigen::MatrixXcd(M, M),
                          Eigen::MatrixXcd::Zero(M, M), 0.0};
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= M; ++n) {
            double acc = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                acc += w[i] * cosines[m - 1][i] * sines[n - 1][i];
            }
            const double scale = amp * amp * n * pi / l;
            out.p(m - 1, n - 1) = cplx(0.0, scale * acc);
            if ((m + n) % 2 == 1) {
                out.p_exact(m - 1, n - 1) =
                    cplx(0.0, 4.0 * n * n / (l * static_cast<double>(n * n - m * m)));
            }
        }
    }
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < M; ++n) {
            out.defect(m, n) = std::conj(out.p(n, m)) - out.p(m, n);
        }
    }
    out.quadrature_error = (out.p - out.p_exact).cwiseAbs().maxCoeff();
    return out;
}

ParadoxReport cosine_basis_report(double l, int M) {
    const auto mat = cosine_basis_momentum_matrix(l, M);
    double even_max = 0.0;
    double odd_dev = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < M; ++n) {
            const cplx d = mat.defect(m, n);
            if ((m + n) % 2 == 0) {
                even_max = std::max(even_max, std::abs(d));
            } else {
                odd_dev = std::max(odd_dev, std::abs(d - cplx(0.0, -4.0 / l)));
            }
        }
    }
    ParadoxReport r;
    r.id = 4;
    r.quantities = {
        {"d_12", mat.defect(0, 1), 1e-10},
        {"d_13", mat.defect(0, 2), 1e-12},
        {"max_defect_even", even_max, 1e-12},
        {"max_deviation_odd_from_-4i/l", odd_dev, 1e-10},
        {"quadrature_error", mat.quadrature_error, 1e-10},
    };
    r.verdict = "momentum matrix in the cosine basis is not Hermitian: d_mn = -4i/l for m+n odd";
    return r;
}

ParadoxReport eigenvector_commutator_demo(double theta, std::size_t N, int n, double hbar) {
    const auto mode = discretized_momentum_mode(theta, N, n);
    const auto& psi = mode.vector;
    const double Nd = static_cast<double>(N);
    std::vector<cplx> xpsi(N);
    for (std::size_t j = 0; j < N; ++j) xpsi[j] = (static_cast<double>(j) / Nd) * psi[j];
    const auto p_psi = apply_discretized_momentum(theta, psi);
    const auto p_xpsi = apply_discretized_momentum(theta, xpsi);
    cplx expectation = 0.0;
    cplx norm2 = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const cplx commutator = (static_cast<double>(j) / Nd) * p_psi[j] - p_xpsi[j];
        expectation += std::conj(psi[j]) * hbar * commutator;
        norm2 += std::conj(psi[j]) * psi[j];
    }
    ParadoxReport r;
    r.id = 1;
    r.quantities = {
        {"eigenvalue", mode.value, 0.0},
        {"commutator_expectation", expectation, 1e-8},
        {"canonical_value", cplx(0.0, hbar) * norm2, 0.0},
    };
    r.verdict = "on a momentum eigenvector (psi,[X,P]psi) = 0, not i*hbar";
    return r;
}

ParadoxReport commuting_observables_demo(double a, int n_max, std::size_t grid_points) {
    const auto spec = well_spectrum(a, 1, n_max, grid_points);
    ParadoxReport r;
    r.id = 3;
    double worst = 1.0;
    for (const auto& e : spec.discrete) {
        const auto& psi = e.eigenfunction;
        const auto p_psi = cplx(0.0, -1.0) * derivative(psi);
        const cplx c = inner_product(psi, p_psi) / inner_product(psi, psi);
        const double ratio = norm(p_psi - c * psi) / norm(p_psi);
        worst = std::min(worst, ratio);
        r.quantities.push_back({"r_" + std::to_string(e.n), ratio, 1e-10});
    }
    r.quantities.push_back({"min_r", worst, 1e-10});
    r.verdict = "p psi_n is orthogonal to psi_n: well eigenfunctions are not momentum eigenfunctions";
    return r;
}

}  // namespace saext
