#include "saext/core.hpp"

#include <algorithm>
#include <cmath>

#include "saext/finite_difference.hpp"

namespace saext {

double wrap_angle(double angle) {
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

// ---------------------------------------------------------------------------

Interval Interval::finite(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw Error(Errc::invalid_argument, "finite interval requires finite endpoints a < b",
                    "Interval::finite");
    }
    return Interval(Kind::finite, a, b);
}

Interval Interval::half_line(double a) {
    if (!std::isfinite(a)) {
        throw Error(Errc::invalid_argument, "half line requires a finite left endpoint",
                    "Interval::half_line");
    }
    return Interval(Kind::half_line, a, infinity);
}

Interval Interval::full_line() { return Interval(Kind::full_line, -infinity, infinity); }

std::string_view to_string(Interval::Kind kind) {
    switch (kind) {
        case Interval::Kind::full_line: return "full_line";
        case Interval::Kind::half_line: return "half_line";
        case Interval::Kind::finite: return "finite";
    }
    return "unknown";
}

UnitSystem UnitSystem::make(double hbar, double two_m) {
    if (!(hbar > 0.0) || !(two_m > 0.0) || !std::isfinite(hbar) || !std::isfinite(two_m)) {
        throw Error(Errc::invalid_argument, "hbar and two_m must be positive", "UnitSystem");
    }
    return UnitSystem{hbar, two_m};
}

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::momentum: return "momentum";
        case OperatorKind::free_hamiltonian: return "free_hamiltonian";
        case OperatorKind::time_operator: return "time_operator";
    }
    return "unknown";
}

OperatorSpec OperatorSpec::make(OperatorKind kind, Interval interval, UnitSystem units) {
    units = UnitSystem::make(units.hbar, units.two_m);
    if (kind == OperatorKind::time_operator && interval.kind() != Interval::Kind::half_line) {
        throw Error(Errc::unsupported_operator,
                    "the time operator is defined on [E0, inf) only", "OperatorSpec");
    }
    return OperatorSpec(kind, interval, units);
}

std::string_view variant_name(const BoundaryCondition& bc) {
    struct Visitor {
        std::string_view operator()(const RawRestrictive&) const { return "raw_restrictive"; }
        std::string_view operator()(const PhaseCondition&) const { return "phase"; }
        std::string_view operator()(const RobinCondition&) const { return "robin"; }
        std::string_view operator()(const DirichletCondition&) const { return "dirichlet"; }
        std::string_view operator()(const NoCondition&) const { return "none"; }
    };
    return std::visit(Visitor{}, bc);
}

BoundaryCondition make_phase(double theta) { return PhaseCondition{wrap_angle(theta)}; }

BoundaryCondition make_robin(double alpha) {
    if (std::isnan(alpha)) {
        throw Error(Errc::invalid_argument, "Robin parameter is NaN", "make_robin");
    }
    return RobinCondition{std::isinf(alpha) ? infinity : alpha};
}

MeasureWeight MeasureWeight::from_id(std::string_view id) {
    if (id == "1") return unit();
    if (id == "r") return radial();
    if (id == "r^2") return radial_squared();
    throw Error(Errc::invalid_argument, "unknown measure weight id", std::string(id));
}

std::string_view MeasureWeight::id() const noexcept {
    switch (kind_) {
        case Kind::unit: return "1";
        case Kind::radial: return "r";
        case Kind::radial_squared: return "r^2";
    }
    return "1";
}

double MeasureWeight::operator()(double x) const noexcept {
    switch (kind_) {
        case Kind::unit: return 1.0;
        case Kind::radial: return x;
        case Kind::radial_squared: return x * x;
    }
    return 1.0;
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(std::vector<double> xs, std::vector<cplx> values, MeasureWeight weight)
    : xs_(std::move(xs)), values_(std::move(values)), weight_(weight) {
    if (xs_.size() < 2) {
        throw Error(Errc::degenerate_grid, "a grid function needs at least two samples",
                    "GridFunction");
    }
    if (xs_.size() != values_.size()) {
        throw Error(Errc::grid_mismatch, "sample count differs from grid size", "GridFunction");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i])) {
            throw Error(Errc::invalid_argument, "grid points must be finite", "GridFunction");
        }
        if (i > 0 && !(xs_[i] > xs_[i - 1])) {
            throw Error(Errc::invalid_argument, "grid must be strictly increasing", "GridFunction");
        }
        if (weight_(xs_[i]) < 0.0) {
            throw Error(Errc::invalid_argument, "measure weight is negative on the grid",
                        "GridFunction");
        }
    }
}

GridFunction GridFunction::sample(std::vector<double> xs, const std::function<cplx(double)>& f,
                                  MeasureWeight weight) {
    std::vector<cplx> values(xs.size());
    std::transform(xs.begin(), xs.end(), values.begin(), f);
    return GridFunction(std::move(xs), std::move(values), weight);
}

GridFunction GridFunction::sample(std::vector<double> xs, ClosedForm form, MeasureWeight weight) {
    GridFunction out = sample(std::move(xs), form.eval, weight);
    out.closed_form_ = std::move(form);
    return out;
}

GridFunction GridFunction::with_values(std::vector<cplx> values) const {
    return GridFunction(xs_, std::move(values), weight_);
}

bool GridFunction::same_grid(const GridFunction& other) const noexcept {
    return weight_ == other.weight_ && xs_ == other.xs_;
}

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g, const char* where) {
    if (!f.same_grid(g)) {
        throw Error(Errc::grid_mismatch, "grid functions live on different grids or weights",
                    where);
    }
}

}  // namespace

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "operator+");
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + g[i];
    return f.with_values(std::move(v));
}

GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "operator-");
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] - g[i];
    return f.with_values(std::move(v));
}

GridFunction operator*(cplx c, const GridFunction& f) {
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * f[i];
    return f.with_values(std::move(v));
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n < 2) {
        throw Error(Errc::degenerate_grid, "a grid needs at least two points", "uniform_grid");
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(Errc::invalid_argument, "grid bounds must be finite with a < b",
                    "uniform_grid");
    }
    std::vector<double> xs(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = a + h * static_cast<double>(i);
    xs.back() = b;
    return xs;
}

bool is_uniform(std::span<const double> xs, double rel_tol) {
    if (xs.size() < 3) return true;
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs((xs[i] - xs[i - 1]) - h) > rel_tol * h) return false;
    }
    return true;
}

std::vector<double> quadrature_weights(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) {
        throw Error(Errc::degenerate_grid, "quadrature needs at least two points",
                    "quadrature_weights");
    }
    std::vector<double> w(n, 0.0);
    if (n < 4 || !is_uniform(xs)) {
        for (std::size_t i = 1; i < n; ++i) {
            const double half = 0.5 * (xs[i] - xs[i - 1]);
            w[i - 1] += half;
            w[i] += half;
        }
        return w;
    }
    const double h = (xs.back() - xs.front()) / static_cast<double>(n - 1);
    const std::size_t intervals = n - 1;
    // Simpson over an even number of intervals, 3/8 rule on a trailing odd panel.
    const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (std::size_t i = 0; i < simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        w[i] += 3.0 * h / 8.0;
        w[i + 1] += 9.0 * h / 8.0;
        w[i + 2] += 9.0 * h / 8.0;
        w[i + 3] += 3.0 * h / 8.0;
    }
    return w;
}

cplx integrate(std::span<const double> xs, std::span<const cplx> values) {
    if (xs.size() != values.size()) {
        throw Error(Errc::grid_mismatch, "sample count differs from grid size", "integrate");
    }
    const auto w = quadrature_weights(xs);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
    return acc;
}

double integrate(std::span<const double> xs, std::span<const double> values) {
    if (xs.size() != values.size()) {
        throw Error(Errc::grid_mismatch, "sample count differs from grid size", "integrate");
    }
    const auto w = quadrature_weights(xs);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
    return acc;
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "inner_product");
    const auto xs = f.xs();
    const auto w = quadrature_weights(xs);
    const MeasureWeight& mu = f.weight();
    // Real and imaginary parts accumulated separately so that swapping the
    // arguments conjugates the result bit for bit.
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double wi = w[i] * mu(xs[i]);
        const cplx a = f[i];
        const cplx b = g[i];
        re += wi * (a.real() * b.real() + a.imag() * b.imag());
        im += wi * (a.real() * b.imag() - a.imag() * b.real());
    }
    return {re, im};
}

double norm(const GridFunction& f) { return std::sqrt(inner_product(f, f).real()); }

GridFunction normalized(const GridFunction& f) {
    const double n = norm(f);
    if (!(n > 0.0)) {
        throw Error(Errc::invalid_argument, "cannot normalize a zero function", "normalized");
    }
    return cplx(1.0 / n, 0.0) * f;
}

GridFunction derivative(const GridFunction& f, int order, int accuracy) {
    return f.with_values(fd::differentiate(f.xs(), f.values(), order, accuracy));
}

// ---------------------------------------------------------------------------

namespace {

double endpoint_tolerance(const GridFunction& f) {
    return 1e-9 * std::max(1.0, std::abs(f.x_back() - f.x_front()));
}

bool decayed(cplx product, cplx reference) {
    return std::abs(product) <= 1e-12 * std::max(1.0, std::abs(reference));
}

}  // namespace

cplx boundary_form_momentum(const GridFunction& xi, const GridFunction& eta,
                            const Interval& interval) {
    require_same_grid(xi, eta, "boundary_form_momentum");
    const cplx left = std::conj(xi.front()) * eta.front();
    const cplx right = std::conj(xi.back()) * eta.back();
    const double tol = endpoint_tolerance(xi);
    switch (interval.kind()) {
        case Interval::Kind::finite:
            if (std::abs(xi.x_front() - interval.a()) > tol ||
                std::abs(xi.x_back() - interval.b()) > tol) {
                throw Error(Errc::unsupported_boundary, "grid does not span the interval",
                            "boundary_form_momentum");
            }
            return cplx(0.0, -1.0) * (right - left);
        case Interval::Kind::half_line:
            if (std::abs(xi.x_front() - interval.a()) > tol) {
                throw Error(Errc::unsupported_boundary, "grid does not start at the endpoint",
                            "boundary_form_momentum");
            }
            if (!decayed(right, left)) {
                throw Error(Errc::unsupported_boundary,
                            "inputs do not decay at the open end of the half line",
                            "boundary_form_momentum");
            }
            return cplx(0.0, -1.0) * (right - left);
        case Interval::Kind::full_line:
            if (!decayed(right, 1.0) || !decayed(left, 1.0)) {
                throw Error(Errc::unsupported_boundary, "inputs do not decay on the full line",
                            "boundary_form_momentum");
            }
            return cplx(0.0, -1.0) * (right - left);
    }
    return {};
}

cplx boundary_form_hamiltonian(const GridFunction& xi, const GridFunction& eta) {
    require_same_grid(xi, eta, "boundary_form_hamiltonian");
    if (xi.size() < 5) {
        throw Error(Errc::degenerate_grid, "one-sided differentiation needs at least 5 points",
                    "boundary_form_hamiltonian");
    }
    if (std::abs(xi.x_front()) > endpoint_tolerance(xi)) {
        throw Error(Errc::unsupported_boundary, "grid must start at x = 0",
                    "boundary_form_hamiltonian");
    }
    const cplx d_xi = fd::derivative_at(xi.xs(), xi.values(), 0, 1, 4);
    const cplx d_eta = fd::derivative_at(eta.xs(), eta.values(), 0, 1, 4);
    const cplx far = std::conj(xi.back()) * eta.back();
    const cplx near = std::conj(xi.front()) * eta.front();
    if (!decayed(far, near)) {
        throw Error(Errc::unsupported_boundary, "inputs do not decay at the far end",
                    "boundary_form_hamiltonian");
    }
    return std::conj(xi.front()) * d_eta - std::conj(d_xi) * eta.front();
}

cplx robin_residual(const GridFunction& psi, double alpha) {
    if (psi.size() < 5) {
        throw Error(Errc::degenerate_grid, "one-sided differentiation needs at least 5 points",
                    "robin_residual");
    }
    if (std::isinf(alpha)) return psi.front();
    const cplx d = fd::derivative_at(psi.xs(), psi.values(), 0, 1, 4);
    return d - alpha * psi.front();
}

}  // namespace saext
