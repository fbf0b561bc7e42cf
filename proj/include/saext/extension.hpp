#pragma once

#include "saext/core.hpp"
#include "saext/deficiency.hpp"

namespace saext {

/// Phase of the 1x1 von Neumann unitary U = e^{i gamma}, kept in [0, 2pi).
struct ExtensionParameter {
    double gamma = 0.0;

    static ExtensionParameter make(double gamma) { return {wrap_angle(gamma)}; }
    cplx unitary() const { return std::polar(1.0, gamma); }
};

/// Endpoint ratio xi(b)/xi(a) of xi = psi_+ + e^{i gamma} psi_- built from the
/// normalized momentum deficiency solutions. |ratio| = 1 up to rounding.
cplx momentum_endpoint_ratio(double gamma, const Interval& interval = Interval::finite(0.0, 1.0),
                             double lambda = 1.0);

/// Phase condition psi(b) = e^{i theta} psi(a) selected by gamma.
BoundaryCondition momentum_bc_from_unitary(double gamma,
                                           const Interval& interval = Interval::finite(0.0, 1.0),
                                           double lambda = 1.0);

/// xi'(0)/xi(0) for the half-line Hamiltonian, as a complex number. Infinite
/// (returned as a NaN-free inf) when cos(gamma/2) vanishes to 1e-12.
cplx halfline_log_derivative(double gamma, const UnitSystem& units = {}, double lambda = 1.0);

/// Robin condition psi'(0) = alpha psi(0) selected by gamma; robin(inf) at the
/// Dirichlet point gamma = pi.
BoundaryCondition halfline_bc_from_unitary(double gamma, const UnitSystem& units = {},
                                           double lambda = 1.0);

/// The extension's boundary condition for a catalog operator with (1,1) indices.
BoundaryCondition bc_from_unitary(const OperatorSpec& op, double gamma, double lambda = 1.0);

/// xi = psi + psi_+ + e^{i gamma} psi_- on the grid of `underlying`. The
/// deficiency functions are re-evaluated from their closed forms.
GridFunction assemble_domain_element(const GridFunction& underlying, double gamma,
                                     const DeficiencyReport& report);

/// Largest violation of the boundary condition by f, relative to the size of
/// the boundary data. Phase conditions are checked on [x_front, x_back].
double boundary_violation(const BoundaryCondition& bc, const GridFunction& f);

}  // namespace saext
