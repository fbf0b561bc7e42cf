#include "saext/anomaly.hpp"

#include <cmath>

#include "saext/finite_difference.hpp"
#include "saext/spectral.hpp"

namespace saext {

namespace {

void require_points(const GridFunction& psi, const char* where) {
    if (psi.size() < 5) throw Error(Errc::degenerate_grid, "need at least 5 grid points", where);
}

double robin_violation(const GridFunction& f, double alpha) {
    return std::abs(robin_residual(f, alpha)) / std::max(1.0, std::abs(f.front()));
}

// Whether H psi satisfies the Robin condition. The boundary derivative of a
// finite-difference second derivative carries roundoff of order eps/h^3, so the
// test is relative to the size of the boundary data; functions that leave
// the domain miss it by O(1).
bool preserves_domain(const GridFunction& h_psi, double alpha) {
    const cplx res = robin_residual(h_psi, alpha);
    const cplx d0 = fd::derivative_at(h_psi.xs(), h_psi.values(), 0, 1, 4);
    const double scale = std::abs(h_psi.front()) + std::abs(d0);
    return std::abs(res) <= 1e-4 * scale || std::abs(res) <= 1e-10;
}

}  // namespace

GridFunction apply_hamiltonian(const GridFunction& psi) {
    require_points(psi, "apply_hamiltonian");
    return cplx(-1.0, 0.0) * derivative(psi, 2, 4);
}

GridFunction apply_scale_generator(const GridFunction& psi) {
    require_points(psi, "apply_scale_generator");
    const auto d = derivative(psi, 1, 4);
    const auto xs = psi.xs();
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = cplx(0.0, -0.25) * (2.0 * xs[i] * d[i] + psi[i]);
    }
    return psi.with_values(std::move(out));
}

GridFunction apply_dilatation(const GridFunction& psi, double t) {
    const auto g = apply_scale_generator(psi);
    if (t == 0.0) return cplx(-1.0, 0.0) * g;
    return cplx(t, 0.0) * apply_hamiltonian(psi) - g;
}

AnomalyReport heisenberg_terms(const GridFunction& psi, double alpha, double t) {
    require_points(psi, "heisenberg_correction");
    if (robin_violation(psi, alpha) > 1e-6) {
        throw Error(Errc::domain_violation, "function does not satisfy the Robin condition",
                    "heisenberg_correction");
    }
    AnomalyReport rep;
    rep.alpha = alpha;
    rep.t = t;
    const auto h_psi = apply_hamiltonian(psi);
    const auto g_psi = apply_scale_generator(psi);
    const auto hg_psi = apply_hamiltonian(g_psi);

    // D = tH - G, so each term splits into a t-linear piece and a scale piece.
    rep.scale_piece_HD = -inner_product(h_psi, g_psi);
    rep.scale_piece_H_of_D = -inner_product(psi, hg_psi);
    const cplx t_left = t * inner_product(h_psi, h_psi);
    rep.t_piece_HD = t_left;
    // (psi, H H psi) equals (H psi, H psi) when H psi is again in the domain;
    // pairing it that way keeps the two t-pieces identical.
    rep.t_pieces_paired = t == 0.0 || preserves_domain(h_psi, alpha);
    rep.t_piece_H_of_D =
        rep.t_pieces_paired ? t_left : t * inner_product(psi, apply_hamiltonian(h_psi));

    rep.term_HD = rep.t_piece_HD + rep.scale_piece_HD;
    rep.term_H_of_D = rep.t_piece_H_of_D + rep.scale_piece_H_of_D;
    const cplx diff =
        (rep.t_piece_HD - rep.t_piece_H_of_D) + (rep.scale_piece_HD - rep.scale_piece_H_of_D);
    rep.anomaly_complex = cplx(0.0, 1.0) * diff;
    rep.anomaly = rep.anomaly_complex.real();
    return rep;
}

cplx heisenberg_correction(const GridFunction& psi, double alpha, double t) {
    return heisenberg_terms(psi, alpha, t).anomaly_complex;
}

AnomalyReport anomaly_quadrature(double alpha, double t, std::size_t grid_points) {
    const auto bs = bound_state(alpha, grid_points);
    if (!bs) {
        throw Error(Errc::no_bound_state, "the anomaly needs the alpha < 0 bound state",
                    "anomaly_quadrature");
    }
    auto rep = heisenberg_terms(bs->psi, alpha, t);
    rep.bound_energy = bs->energy;
    rep.residual = std::abs(rep.anomaly - rep.bound_energy);
    return rep;
}

SymmetryVerdict classical_symmetry_check() {
    const PowerLawPotential free{0.0, 0};
    const PowerLawPotential inverse_square{1.0, -2};
    const auto H = hamiltonian(free);
    const auto D = dilatation_observable(free);
    SymmetryVerdict v;
    v.bracket_HD = poisson_bracket(H, D);
    v.total_dD_dt = total_time_derivative(D, H);
    const auto H2 = hamiltonian(inverse_square);
    v.total_dD_dt_inverse_square = total_time_derivative(dilatation_observable(inverse_square), H2);
    v.bracket_equals_H = v.bracket_HD == H;
    v.conserved_free = v.total_dD_dt.is_zero();
    v.conserved_inverse_square = v.total_dD_dt_inverse_square.is_zero();
    return v;
}

}  // namespace saext
