#pragma once

#include <string>

#include "saext/classical.hpp"
#include "saext/core.hpp"

namespace saext {

/// H psi = -psi'' by 4th-order finite differences (natural units).
GridFunction apply_hamiltonian(const GridFunction& psi);

/// G psi = -(i/4)(2 x psi' + psi), the symmetrized x p / 2.
GridFunction apply_scale_generator(const GridFunction& psi);

/// D psi = t H psi - G psi.
GridFunction apply_dilatation(const GridFunction& psi, double t);

struct AnomalyReport {
    double alpha = 0.0;
    double t = 0.0;
    /// (H psi, D psi)
    cplx term_HD;
    /// (psi, H D psi)
    cplx term_H_of_D;
    /// i [term_HD - term_H_of_D]; real part is the anomaly.
    cplx anomaly_complex;
    double anomaly = 0.0;
    double bound_energy = 0.0;
    double residual = 0.0;
    /// Split of each term into its t-linear piece and the t-free scale piece.
    cplx t_piece_HD, scale_piece_HD, t_piece_H_of_D, scale_piece_H_of_D;
    /// Whether H psi met the Robin condition, so the t-pieces were paired.
    bool t_pieces_paired = false;
};

/// i[(H psi, D psi) - (psi, H D psi)] on a Robin(alpha) domain function.
/// Throws domain_violation when psi misses the condition by more than 1e-6.
AnomalyReport heisenberg_terms(const GridFunction& psi, double alpha, double t = 0.0);

/// Heisenberg correction i<(H^dagger - H) D>_psi for an admissible psi.
cplx heisenberg_correction(const GridFunction& psi, double alpha, double t = 0.0);

/// The anomaly on the normalized Robin bound state; |A + alpha^2| is the residual.
AnomalyReport anomaly_quadrature(double alpha, double t = 0.0, std::size_t grid_points = 40001);

struct SymmetryVerdict {
    MonomialObservable bracket_HD;       // {H, D}
    MonomialObservable total_dD_dt;      // dD/dt for the free particle
    MonomialObservable total_dD_dt_inverse_square;  // with V = q^{-2}
    bool bracket_equals_H = false;
    bool conserved_free = false;
    bool conserved_inverse_square = false;
};

/// {H, D} = H and dD/dt = 0 for H = p^2, D = tH - qp/2, and with q^{-2} added.
SymmetryVerdict classical_symmetry_check();

}  // namespace saext
