#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "saext/error.hpp"

namespace saext {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Reduce an angle to [0, 2pi).
double wrap_angle(double angle);

// ---------------------------------------------------------------------------
// Domain types

class Interval {
public:
    enum class Kind { full_line, half_line, finite };

    static Interval finite(double a, double b);
    static Interval half_line(double a = 0.0);
    static Interval full_line();

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    /// Left endpoint; -inf for the full line.
    double a() const noexcept { return a_; }
    /// Right endpoint; +inf unless finite.
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Interval(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

std::string_view to_string(Interval::Kind kind);

/// hbar and 2m. The defaults make H = -d^2/dx^2 and p = -i d/dx.
struct UnitSystem {
    double hbar = 1.0;
    double two_m = 1.0;

    static UnitSystem make(double hbar, double two_m);

    /// Factor converting a natural-unit energy into these units (hbar^2 / 2m).
    double energy_scale() const noexcept { return hbar * hbar / two_m; }
    /// Factor converting a natural-unit momentum into these units.
    double momentum_scale() const noexcept { return hbar; }

    friend bool operator==(const UnitSystem&, const UnitSystem&) = default;
};

enum class OperatorKind { momentum, free_hamiltonian, time_operator };

std::string_view to_string(OperatorKind kind);

/// A catalog operator on an interval. The time operator lives on [E0, inf).
class OperatorSpec {
public:
    static OperatorSpec make(OperatorKind kind, Interval interval, UnitSystem units = {});

    OperatorKind kind() const noexcept { return kind_; }
    const Interval& interval() const noexcept { return interval_; }
    const UnitSystem& units() const noexcept { return units_; }

private:
    OperatorSpec(OperatorKind kind, Interval interval, UnitSystem units)
        : kind_(kind), interval_(interval), units_(units) {}

    OperatorKind kind_;
    Interval interval_;
    UnitSystem units_;
};

struct RawRestrictive {
    friend bool operator==(const RawRestrictive&, const RawRestrictive&) = default;
};
/// psi(b) = e^{i theta} psi(a); theta kept in [0, 2pi).
struct PhaseCondition {
    double theta;
    friend bool operator==(const PhaseCondition&, const PhaseCondition&) = default;
};
/// psi'(0) = alpha psi(0); alpha = +inf is the Dirichlet limit psi(0) = 0.
struct RobinCondition {
    double alpha;
    bool is_dirichlet_limit() const noexcept { return std::isinf(alpha); }
    friend bool operator==(const RobinCondition&, const RobinCondition&) = default;
};
struct DirichletCondition {
    friend bool operator==(const DirichletCondition&, const DirichletCondition&) = default;
};
struct NoCondition {
    friend bool operator==(const NoCondition&, const NoCondition&) = default;
};

using BoundaryCondition =
    std::variant<RawRestrictive, PhaseCondition, RobinCondition, DirichletCondition, NoCondition>;

std::string_view variant_name(const BoundaryCondition& bc);
BoundaryCondition make_phase(double theta);
BoundaryCondition make_robin(double alpha);

/// Measure weight w(x) >= 0 of the inner product. Only the catalog weights
/// are supported so the descriptor can be serialized by id.
class MeasureWeight {
public:
    enum class Kind { unit, radial, radial_squared };

    MeasureWeight() = default;
    explicit MeasureWeight(Kind kind) : kind_(kind) {}

    static MeasureWeight unit() { return MeasureWeight(Kind::unit); }
    static MeasureWeight radial() { return MeasureWeight(Kind::radial); }
    static MeasureWeight radial_squared() { return MeasureWeight(Kind::radial_squared); }
    /// Parse "1", "r" or "r^2".
    static MeasureWeight from_id(std::string_view id);

    Kind kind() const noexcept { return kind_; }
    std::string_view id() const noexcept;
    double operator()(double x) const noexcept;

    friend bool operator==(const MeasureWeight&, const MeasureWeight&) = default;

private:
    Kind kind_ = Kind::unit;
};

/// Closed-form definition of a function, used to extend a sample beyond its grid.
struct ClosedForm {
    std::string tag;
    std::function<cplx(double)> eval;
    Interval domain = Interval::full_line();
};

/// Complex samples on a strictly increasing grid, with a measure weight.
class GridFunction {
public:
    GridFunction(std::vector<double> xs, std::vector<cplx> values,
                 MeasureWeight weight = MeasureWeight::unit());

    static GridFunction sample(std::vector<double> xs, const std::function<cplx(double)>& f,
                               MeasureWeight weight = MeasureWeight::unit());
    static GridFunction sample(std::vector<double> xs, ClosedForm form,
                               MeasureWeight weight = MeasureWeight::unit());

    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const cplx> values() const noexcept { return values_; }
    const MeasureWeight& weight() const noexcept { return weight_; }
    std::size_t size() const noexcept { return xs_.size(); }

    double x_front() const noexcept { return xs_.front(); }
    double x_back() const noexcept { return xs_.back(); }
    cplx front() const noexcept { return values_.front(); }
    cplx back() const noexcept { return values_.back(); }
    cplx operator[](std::size_t i) const noexcept { return values_[i]; }

    const std::optional<ClosedForm>& closed_form() const noexcept { return closed_form_; }

    /// Same grid and weight, new samples. Drops any closed form.
    GridFunction with_values(std::vector<cplx> values) const;
    bool same_grid(const GridFunction& other) const noexcept;

private:
    std::vector<double> xs_;
    std::vector<cplx> values_;
    MeasureWeight weight_;
    std::optional<ClosedForm> closed_form_;
};

GridFunction operator+(const GridFunction& f, const GridFunction& g);
GridFunction operator-(const GridFunction& f, const GridFunction& g);
GridFunction operator*(cplx c, const GridFunction& f);

// ---------------------------------------------------------------------------
// Grids and quadrature

std::vector<double> uniform_grid(double a, double b, std::size_t n);

/// Truncation point for integrals of e^{2 rate x} on the half line.
inline double halfline_cutoff(double decay_rate) { return 30.0 / std::abs(decay_rate); }

bool is_uniform(std::span<const double> xs, double rel_tol = 1e-9);

/// Composite Simpson weights on uniform grids (3/8 rule on the last panel
/// when the interval count is odd), trapezoid weights otherwise.
std::vector<double> quadrature_weights(std::span<const double> xs);

cplx integrate(std::span<const double> xs, std::span<const cplx> values);
double integrate(std::span<const double> xs, std::span<const double> values);

/// Integral of conj(f) g w.
cplx inner_product(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);
GridFunction normalized(const GridFunction& f);

/// First or second derivative of a grid function, 4th order unless stated.
GridFunction derivative(const GridFunction& f, int order = 1, int accuracy = 4);

// ---------------------------------------------------------------------------
// Boundary forms

/// -i [conj(xi(b)) eta(b) - conj(xi(a)) eta(a)]. On unbounded intervals the
/// inputs must have decayed at the far samples.
cplx boundary_form_momentum(const GridFunction& xi, const GridFunction& eta,
                            const Interval& interval);

/// conj(xi(0)) eta'(0) - conj(xi'(0)) eta(0) with 4th-order one-sided derivatives.
cplx boundary_form_hamiltonian(const GridFunction& xi, const GridFunction& eta);

/// psi'(0) - alpha psi(0) (or psi(0) in the Dirichlet limit), 4th-order one-sided.
cplx robin_residual(const GridFunction& psi, double alpha);

}  // namespace saext
