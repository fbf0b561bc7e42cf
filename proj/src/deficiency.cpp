#include "saext/deficiency.hpp"

#include <algorithm>
#include <cmath>

#include "saext/finite_difference.hpp"

namespace saext {

std::string_view to_string(ClassificationKind kind) {
    switch (kind) {
        case ClassificationKind::essentially_self_adjoint: return "essentially_self_adjoint";
        case ClassificationKind::has_extensions: return "has_extensions";
        case ClassificationKind::no_extensions: return "no_extensions";
    }
    return "unknown";
}

Classification classify(int n_plus, int n_minus) {
    if (n_plus < 0 || n_minus < 0) {
        throw Error(Errc::invalid_argument, "deficiency indices are non-negative", "classify");
    }
    if (n_plus != n_minus) return {ClassificationKind::no_extensions, 0};
    if (n_plus == 0) return {ClassificationKind::essentially_self_adjoint, 0};
    return {ClassificationKind::has_extensions, n_plus * n_plus};
}

namespace {

constexpr std::size_t kSegmentPoints = 4001;

// Integral of |f|^2 over [lo, hi] from the closed form.
double closed_form_mass(const std::function<cplx(double)>& f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const auto xs = uniform_grid(lo, hi, kSegmentPoints);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = std::norm(f(xs[i]));
    return integrate(xs, sq);
}

// Integral of |f|^2 over the samples with x <= limit.
double sampled_mass(const GridFunction& f, double limit) {
    const auto xs = f.xs();
    const auto end = std::upper_bound(xs.begin(), xs.end(), limit);
    const auto count = static_cast<std::size_t>(end - xs.begin());
    if (count < 2) return 0.0;
    std::vector<double> sq(count);
    for (std::size_t i = 0; i < count; ++i) sq[i] = std::norm(f[i]);
    return integrate(xs.first(count), sq);
}

std::vector<double> partial_norms(const GridFunction& f, std::span<const double> cutoffs) {
    std::vector<double> norms;
    norms.reserve(cutoffs.size());
    const auto& form = f.closed_form();
    if (!form) {
        for (double x : cutoffs) norms.push_back(sampled_mass(f, x));
        return norms;
    }
    const Interval& dom = form->domain;
    double acc = 0.0;
    double prev = 0.0;
    bool first = true;
    for (double x : cutoffs) {
        if (dom.kind() == Interval::Kind::full_line) {
            if (first) {
                acc = closed_form_mass(form->eval, -x, x);
            } else {
                acc += closed_form_mass(form->eval, -x, -prev);
                acc += closed_form_mass(form->eval, prev, x);
            }
        } else {
            const double hi = std::min(x, dom.b());
            const double lo = first ? dom.a() : std::min(std::max(prev, dom.a()), dom.b());
            acc += closed_form_mass(form->eval, lo, hi);
        }
        norms.push_back(acc);
        prev = x;
        first = false;
    }
    return norms;
}

struct Candidate {
    int sign;
    cplx rate;  // f(x) = exp(rate * (x - x_ref))
    std::string tag;
};

// Closed-form solution space of T^dagger psi = sign * i * lambda * psi.
std::vector<Candidate> candidate_solutions(const OperatorSpec& op, double lambda) {
    const UnitSystem& u = op.units();
    std::vector<Candidate> out;
    switch (op.kind()) {
        case OperatorKind::momentum:
        case OperatorKind::time_operator: {
            // -i hbar psi' = sign i lambda psi  =>  psi' = -sign (lambda / hbar) psi
            const double kappa = lambda / u.hbar;
            out.push_back({+1, cplx(-kappa, 0.0), "exp(-lambda*x)"});
            out.push_back({-1, cplx(kappa, 0.0), "exp(+lambda*x)"});
            break;
        }
        case OperatorKind::free_hamiltonian: {
            // -(hbar^2 / 2m) psi'' = sign i lambda psi  =>  psi'' = -sign i mu psi
            const double mu = lambda * u.two_m / (u.hbar * u.hbar);
            const double s = std::sqrt(mu) / std::sqrt(2.0);
            const cplx plus_rate(-s, s);    // (i - 1) sqrt(mu / 2)
            const cplx minus_rate(-s, -s);  // -(i + 1) sqrt(mu / 2)
            out.push_back({+1, plus_rate, "exp((i-1)*sqrt(lambda/2)*x)"});
            out.push_back({+1, -plus_rate, "exp((1-i)*sqrt(lambda/2)*x)"});
            out.push_back({-1, minus_rate, "exp(-(i+1)*sqrt(lambda/2)*x)"});
            out.push_back({-1, -minus_rate, "exp((i+1)*sqrt(lambda/2)*x)"});
            break;
        }
    }
    return out;
}

double reference_point(const Interval& interval) {
    return interval.kind() == Interval::Kind::full_line ? 0.0 : interval.a();
}

std::vector<double> report_grid(const Interval& interval, double rate_scale, std::size_t n) {
    switch (interval.kind()) {
        case Interval::Kind::finite: return uniform_grid(interval.a(), interval.b(), n);
        case Interval::Kind::half_line:
            return uniform_grid(interval.a(), interval.a() + halfline_cutoff(rate_scale), n);
        case Interval::Kind::full_line: {
            const double x = halfline_cutoff(rate_scale);
            return uniform_grid(-x, x, n);
        }
    }
    return {};
}

std::vector<double> tail_schedule(const Interval& interval, double rate_scale) {
    switch (interval.kind()) {
        case Interval::Kind::finite: {
            const double L = interval.length();
            return {interval.a() + 0.5 * L, interval.b(), interval.b() + L};
        }
        case Interval::Kind::half_line:
            return {interval.a() + 10.0 / rate_scale, interval.a() + 20.0 / rate_scale,
                    interval.a() + 40.0 / rate_scale};
        case Interval::Kind::full_line:
            return {10.0 / rate_scale, 20.0 / rate_scale, 40.0 / rate_scale};
    }
    return {};
}

// Normalization constant of exp(rate (x - x_ref)) on the interval.
double normalization(const Interval& interval, cplx rate) {
    const double r = rate.real();
    double mass = 0.0;
    if (interval.is_finite()) {
        const double L = interval.length();
        mass = (r == 0.0) ? L : std::expm1(2.0 * r * L) / (2.0 * r);
    } else {
        mass = 1.0 / (-2.0 * r);
    }
    return 1.0 / std::sqrt(mass);
}

}  // namespace

bool tail_integrability(const GridFunction& f, std::span<const double> cutoffs) {
    if (cutoffs.size() < 3) {
        throw Error(Errc::invalid_schedule, "growth probe schedule needs at least 3 cutoffs",
                    "tail_integrability");
    }
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > cutoffs[i - 1])) {
            throw Error(Errc::invalid_schedule, "cutoffs must be strictly increasing",
                        "tail_integrability");
        }
    }
    const auto norms = partial_norms(f, cutoffs);
    for (double n : norms) {
        if (!std::isfinite(n)) return false;
    }
    const double last = norms.back();
    const double prev = norms[norms.size() - 2];
    if (last == 0.0) return true;
    return std::abs(last - prev) / std::abs(last) < 1e-8;
}

DeficiencyReport solve_deficiency(const OperatorSpec& op, double lambda,
                                  const DeficiencyOptions& options) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(Errc::invalid_argument, "lambda must be positive", "solve_deficiency");
    }
    const Interval& interval = op.interval();
    if (op.kind() == OperatorKind::free_hamiltonian &&
        interval.kind() != Interval::Kind::half_line) {
        throw Error(Errc::unsupported_operator,
                    "the free Hamiltonian is cataloged on the half line only", "solve_deficiency");
    }
    const double x_ref = reference_point(interval);

    DeficiencyReport report{op, 0, 0, lambda, {}, {}, {}, {}};
    for (const Candidate& c : candidate_solutions(op, lambda)) {
        const double rate_scale = std::abs(c.rate.real());
        const cplx rate = c.rate;
        ClosedForm raw{c.tag, [rate, x_ref](double x) { return std::exp(rate * (x - x_ref)); },
                       interval};
        auto grid = report_grid(interval, rate_scale, options.grid_points);
        const auto probe = GridFunction::sample(grid, raw);
        const auto schedule = tail_schedule(interval, rate_scale);
        const bool integrable = tail_integrability(probe, schedule);
        report.candidates.push_back({c.sign, c.tag, integrable});
        if (!integrable) continue;

        const double norm_const = normalization(interval, rate);
        ClosedForm normed{c.tag,
                          [rate, x_ref, norm_const](double x) {
                              return norm_const * std::exp(rate * (x - x_ref));
                          },
                          interval};
        auto fn = GridFunction::sample(std::move(grid), std::move(normed));
        if (c.sign > 0) {
            report.basis_plus.push_back(std::move(fn));
            ++report.n_plus;
        } else {
            report.basis_minus.push_back(std::move(fn));
            ++report.n_minus;
        }
    }
    report.classification = classify(report.n_plus, report.n_minus);
    return report;
}

double verify_deficiency_numerically(const OperatorSpec& op, const DeficiencyReport& report) {
    const UnitSystem& u = op.units();
    double worst = 0.0;
    auto check = [&](const GridFunction& psi, int sign) {
        const auto xs = psi.xs();
        const auto vals = psi.values();
        if (xs.size() < 3) {
            throw Error(Errc::degenerate_grid, "residual check needs interior points",
                        "verify_deficiency_numerically");
        }
        const cplx target = cplx(0.0, sign * report.lambda);
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            cplx applied;
            if (op.kind() == OperatorKind::free_hamiltonian) {
                const cplx d2 = fd::derivative_at(xs, vals, i, 2, 2);
                applied = -(u.hbar * u.hbar / u.two_m) * d2;
            } else {
                const cplx d1 = fd::derivative_at(xs, vals, i, 1, 2);
                applied = cplx(0.0, -u.hbar) * d1;
            }
            worst = std::max(worst, std::abs(applied - target * vals[i]));
        }
    };
    for (const auto& psi : report.basis_plus) check(psi, +1);
    for (const auto& psi : report.basis_minus) check(psi, -1);
    return worst;
}

}  // namespace saext
