#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "saext/core.hpp"

namespace saext {

/// A named result with the tolerance it was established at.
struct Quantity {
    std::string name;
    cplx value;
    double tolerance = 0.0;
};

struct ParadoxReport {
    int id = 0;
    std::vector<Quantity> quantities;
    std::string verdict;

    /// Value of the named quantity; throws invalid_argument if absent.
    cplx at(std::string_view name) const;
};

/// Tr(XP - PX) for square matrices of equal size.
cplx trace_commutator(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& P);

/// Random Hermitian pairs of size N: the largest |Tr[X,P]| / (|X|_F |P|_F)
/// over `trials` draws, against the canonical value i hbar N.
ParadoxReport trace_commutator_check(std::size_t N, int trials, std::uint64_t seed = 0,
                                     double hbar = 1.0);

struct CosineBasisMatrix {
    /// p_mn = (e_m, p e_n) for m, n = 1..M (stored at [m-1, n-1]).
    Eigen::MatrixXcd p;
    /// d_mn = conj(p_nm) - p_mn.
    Eigen::MatrixXcd defect;
    /// Closed-form p_mn for comparison.
    Eigen::MatrixXcd p_exact;
    /// max |p - p_exact|.
    double quadrature_error = 0.0;
};

/// Momentum matrix in e_n = sqrt(2/l) cos(n pi x / l), n >= 1, by Simpson
/// quadrature on `quad_points` points.
CosineBasisMatrix cosine_basis_momentum_matrix(double l, int M, std::size_t quad_points = 40001);

ParadoxReport cosine_basis_report(double l, int M);

/// (psi, [X, P] psi) for the discretized momentum eigenvector closest to
/// 2 n pi + theta, with X = diag(j/N). The canonical value is i hbar.
ParadoxReport eigenvector_commutator_demo(double theta, std::size_t N, int n = 1,
                                          double hbar = 1.0);

/// For the well eigenfunctions psi_n, n = 1..n_max: the part of p psi_n not
/// parallel to psi_n, relative to |p psi_n|. Reported per n as r_<n>.
ParadoxReport commuting_observables_demo(double a, int n_max, std::size_t grid_points = 20001);

}  // namespace saext
