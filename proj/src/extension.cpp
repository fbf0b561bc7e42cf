#include "saext/extension.hpp"

#include <cmath>

#include "saext/finite_difference.hpp"

namespace saext {

namespace {

constexpr double kRaw = 1e-8;

double hamiltonian_rate(const UnitSystem& u, double lambda) {
    return std::sqrt(lambda * u.two_m / (u.hbar * u.hbar) / 2.0);
}

const GridFunction& only(const std::vector<GridFunction>& basis) { return basis.front(); }

}  // namespace

cplx momentum_endpoint_ratio(double gamma, const Interval& interval, double lambda) {
    if (!interval.is_finite()) {
        throw Error(Errc::unsupported_extension, "momentum extensions need a finite interval",
                    "momentum_bc_from_unitary");
    }
    // psi_+ = c_+ e^{-k(x-a)}, psi_- = c_- e^{k(x-a)}, with c_+ / c_- = e^{kL}.
    const double E = std::exp(lambda * interval.length());
    const double c_minus = std::sqrt(2.0 * lambda / std::expm1(2.0 * lambda * interval.length()));
    const double c_plus = c_minus * E;
    const cplx beta = std::polar(1.0, gamma);
    const cplx at_a = c_plus + beta * c_minus;
    const cplx at_b = c_plus / E + beta * c_minus * E;
    return at_b / at_a;
}

BoundaryCondition momentum_bc_from_unitary(double gamma, const Interval& interval, double lambda) {
    const cplx ratio = momentum_endpoint_ratio(gamma, interval, lambda);
    if (std::abs(std::abs(ratio) - 1.0) > 1e-12) {
        throw Error(Errc::internal, "endpoint ratio is not unimodular", "momentum_bc_from_unitary");
    }
    return make_phase(std::arg(ratio));
}

cplx halfline_log_derivative(double gamma, const UnitSystem& units, double lambda) {
    const double s = hamiltonian_rate(units, lambda);
    const cplx r_plus(-s, s);
    const cplx r_minus(-s, -s);
    // Multiply xi by e^{-i gamma/2} so the denominator is 2 cos(gamma/2),
    // which stays accurate near the Dirichlet point.
    const cplx half = std::polar(1.0, -gamma / 2.0);
    const cplx num = r_plus * half + r_minus * std::conj(half);
    const double den = 2.0 * std::cos(gamma / 2.0);
    if (std::abs(den) < 2e-12) return cplx(infinity, 0.0);
    return num / den;
}

BoundaryCondition halfline_bc_from_unitary(double gamma, const UnitSystem& units, double lambda) {
    const cplx ratio = halfline_log_derivative(gamma, units, lambda);
    if (std::isinf(ratio.real())) return make_robin(infinity);
    const double alpha = ratio.real();
    if (std::abs(ratio.imag()) > 1e-12 * std::max(1.0, std::abs(alpha))) {
        throw Error(Errc::internal, "log-derivative at the origin is not real",
                    "halfline_bc_from_unitary");
    }
    // |alpha / (s sqrt 2)|^2 (1 + cos gamma) = 1 - sin gamma, with 1 + cos = 2 cos^2(gamma/2).
    const double s = hamiltonian_rate(units, lambda);
    const double a = alpha / (s * std::sqrt(2.0));
    const double c = std::cos(gamma / 2.0);
    const double lhs = a * a * 2.0 * c * c;
    const double rhs = 1.0 - std::sin(gamma);
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, lhs)) {
        throw Error(Errc::internal, "modulus identity violated", "halfline_bc_from_unitary");
    }
    return make_robin(alpha);
}

BoundaryCondition bc_from_unitary(const OperatorSpec& op, double gamma, double lambda) {
    const Interval& iv = op.interval();
    if (op.kind() == OperatorKind::momentum && iv.is_finite()) {
        return momentum_bc_from_unitary(gamma, iv, lambda / op.units().hbar);
    }
    if (op.kind() == OperatorKind::free_hamiltonian && iv.kind() == Interval::Kind::half_line &&
        iv.a() == 0.0) {
        return halfline_bc_from_unitary(gamma, op.units(), lambda);
    }
    throw Error(Errc::unsupported_extension, "operator has no one-parameter extension family",
                std::string(to_string(op.kind())));
}

GridFunction assemble_domain_element(const GridFunction& underlying, double gamma,
                                     const DeficiencyReport& report) {
    if (report.n_plus != 1 || report.n_minus != 1) {
        throw Error(Errc::unsupported_extension, "deficiency indices must be (1,1)",
                    "assemble_domain_element");
    }
    const auto& plus = only(report.basis_plus).closed_form();
    const auto& minus = only(report.basis_minus).closed_form();
    if (!plus || !minus) {
        throw Error(Errc::precondition, "deficiency basis lacks closed forms",
                    "assemble_domain_element");
    }
    if (underlying.size() < 5) {
        throw Error(Errc::degenerate_grid, "need at least 5 points", "assemble_domain_element");
    }
    const auto xs = underlying.xs();
    const auto vs = underlying.values();
    const Interval& iv = report.op.interval();
    if (report.op.kind() == OperatorKind::momentum) {
        if (std::abs(underlying.front()) > kRaw || std::abs(underlying.back()) > kRaw) {
            throw Error(Errc::precondition, "underlying function must vanish at both ends",
                        "assemble_domain_element");
        }
    } else {
        const cplx d0 = fd::derivative_at(xs, vs, 0, 1, 4);
        if (std::abs(underlying.front()) > kRaw || std::abs(d0) > kRaw) {
            throw Error(Errc::precondition,
                        "underlying function and its derivative must vanish at the origin",
                        "assemble_domain_element");
        }
    }
    if (std::abs(xs.front() - iv.a()) > 1e-9 * std::max(1.0, std::abs(iv.a())) ||
        (iv.is_finite() && std::abs(xs.back() - iv.b()) > 1e-9 * std::max(1.0, std::abs(iv.b())))) {
        throw Error(Errc::grid_mismatch, "grid does not match the operator's interval",
                    "assemble_domain_element");
    }
    const cplx u = std::polar(1.0, gamma);
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = vs[i] + plus->eval(xs[i]) + u * minus->eval(xs[i]);
    }
    return underlying.with_values(std::move(out));
}

double boundary_violation(const BoundaryCondition& bc, const GridFunction& f) {
    if (const auto* phase = std::get_if<PhaseCondition>(&bc)) {
        const cplx target = std::polar(1.0, phase->theta) * f.front();
        return std::abs(f.back() - target) / std::max(1.0, std::abs(f.front()));
    }
    if (const auto* robin = std::get_if<RobinCondition>(&bc)) {
        const cplx res = robin_residual(f, robin->alpha);
        if (robin->is_dirichlet_limit()) {
            const cplx d0 = fd::derivative_at(f.xs(), f.values(), 0, 1, 4);
            return std::abs(res) / std::max(1.0, std::abs(d0));
        }
        return std::abs(res) / std::max(1.0, std::abs(f.front()));
    }
    if (std::holds_alternative<DirichletCondition>(bc)) {
        return std::max(std::abs(f.front()), std::abs(f.back()));
    }
    if (std::holds_alternative<RawRestrictive>(bc)) {
        const cplx d0 = fd::derivative_at(f.xs(), f.values(), 0, 1, 4);
        return std::max(std::abs(f.front()), std::abs(d0));
    }
    return 0.0;
}

}  // namespace saext
