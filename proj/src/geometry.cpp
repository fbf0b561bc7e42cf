#include "saext/geometry.hpp"

#include <cmath>

namespace saext {

MeasureSpec MeasureSpec::flat() {
    return {Kind::flat, "x", MeasureWeight::unit(), [](double) { return 1.0; }};
}

MeasureSpec MeasureSpec::polar() {
    return {Kind::polar, "r", MeasureWeight::radial(), [](double r) { return r * r; }};
}

MeasureSpec MeasureSpec::spherical() {
    // r^4 sin^2(theta) with the angular factor dropped; it does not depend on r.
    return {Kind::spherical, "r", MeasureWeight::radial_squared(),
            [](double r) { return r * r * r * r; }};
}

MeasureSpec MeasureSpec::custom(std::string coordinate, RadialProfile metric_det) {
    return {Kind::custom, std::move(coordinate), MeasureWeight::unit(), std::move(metric_det)};
}

MeasureSpec MeasureSpec::from_name(std::string_view name) {
    if (name == "flat") return flat();
    if (name == "polar") return polar();
    if (name == "spherical") return spherical();
    throw Error(Errc::invalid_metric, "unknown metric", std::string(name));
}

std::string_view to_string(MeasureSpec::Kind kind) {
    switch (kind) {
        case MeasureSpec::Kind::flat: return "flat";
        case MeasureSpec::Kind::polar: return "polar";
        case MeasureSpec::Kind::spherical: return "spherical";
        case MeasureSpec::Kind::custom: return "custom";
    }
    return "unknown";
}

namespace {

void require_positive(double g, double r) {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw Error(Errc::invalid_metric, "metric determinant must be positive",
                    "r=" + std::to_string(r));
    }
}

}  // namespace

RadialProfile connection_condition(const MeasureSpec& measure) {
    switch (measure.kind) {
        case MeasureSpec::Kind::flat: return [](double) { return 0.0; };
        case MeasureSpec::Kind::polar:
            return [](double r) {
                require_positive(r * r, r);
                return 0.5 / r;
            };
        case MeasureSpec::Kind::spherical:
            return [](double r) {
                require_positive(r, r);
                return 1.0 / r;
            };
        case MeasureSpec::Kind::custom: break;
    }
    auto det = measure.metric_det;
    return [det](double r) {
        const double h = 1e-5 * std::max(1.0, std::abs(r));
        const double gp = det(r + h);
        const double gm = det(r - h);
        require_positive(det(r), r);
        require_positive(gp, r + h);
        require_positive(gm, r - h);
        // (1/2) d/dr log sqrt(g) = (1/4) d/dr log g
        return 0.25 * (std::log(gp) - std::log(gm)) / (2.0 * h);
    };
}

namespace {

void require_regular_support(const GridFunction& f, const char* where) {
    const auto xs = f.xs();
    for (std::size_t i = 0; i < xs.size() && xs[i] <= 0.0; ++i) {
        if (f[i] != cplx(0.0)) {
            throw Error(Errc::singular_support, "function does not vanish at r = 0", where);
        }
    }
    if (xs.front() <= 0.0 && xs.size() > 1 && f[1] != cplx(0.0)) {
        throw Error(Errc::singular_support, "support touches r = 0", where);
    }
}

// p_r f = -i (f' + omega f), skipping omega where f vanishes so r = 0 is never
// evaluated for regular supports.
std::vector<cplx> apply_radial_momentum(const RadialProfile& omega, const GridFunction& f) {
    const auto d = derivative(f, 1, 4);
    const auto xs = f.xs();
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx w = f[i] == cplx(0.0) ? cplx(0.0) : omega(xs[i]) * f[i];
        out[i] = cplx(0.0, -1.0) * (d[i] + w);
    }
    return out;
}

cplx weighted_r(std::span<const double> xs, const std::vector<cplx>& integrand) {
    std::vector<cplx> v(integrand.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = xs[i] * integrand[i];
    return integrate(xs, v);
}

void require_same(const GridFunction& f, const GridFunction& g, const char* where) {
    if (!f.same_grid(g)) throw Error(Errc::grid_mismatch, "grids differ", where);
    if (f.size() < 5) throw Error(Errc::degenerate_grid, "need at least 5 points", where);
}

}  // namespace

cplx radial_symmetry_defect(const RadialProfile& omega_re, const GridFunction& f,
                            const GridFunction& g) {
    require_same(f, g, "radial_symmetry_defect");
    require_regular_support(f, "radial_symmetry_defect");
    require_regular_support(g, "radial_symmetry_defect");
    const auto xs = f.xs();
    const auto pf = apply_radial_momentum(omega_re, f);
    const auto pg = apply_radial_momentum(omega_re, g);
    std::vector<cplx> left(xs.size()), right(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        left[i] = std::conj(f[i]) * pg[i];
        right[i] = std::conj(pf[i]) * g[i];
    }
    return weighted_r(xs, left) - weighted_r(xs, right);
}

cplx radial_defect_prediction(const RadialProfile& omega_re, const GridFunction& f,
                              const GridFunction& g) {
    require_same(f, g, "radial_defect_prediction");
    require_regular_support(f, "radial_defect_prediction");
    require_regular_support(g, "radial_defect_prediction");
    const auto xs = f.xs();
    std::vector<cplx> plain(xs.size()), with_omega(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx fg = std::conj(f[i]) * g[i];
        plain[i] = fg;
        with_omega[i] = fg == cplx(0.0) ? cplx(0.0) : omega_re(xs[i]) * xs[i] * fg;
    }
    return cplx(0.0, 1.0) * integrate(xs, plain) - cplx(0.0, 2.0) * integrate(xs, with_omega);
}

double commutator_preservation_check(const RadialProfile& omega_re, const GridFunction& f) {
    if (f.size() < 5) {
        throw Error(Errc::degenerate_grid, "need at least 5 points", "commutator_preservation_check");
    }
    require_regular_support(f, "commutator_preservation_check");
    const auto xs = f.xs();
    std::vector<cplx> rf(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) rf[i] = xs[i] * f[i];
    const auto p_f = apply_radial_momentum(omega_re, f);
    const auto p_rf = apply_radial_momentum(omega_re, f.with_values(rf));
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx comm = xs[i] * p_f[i] - p_rf[i];
        worst = std::max(worst, std::abs(comm - cplx(0.0, 1.0) * f[i]));
    }
    return worst;
}

std::function<cplx(double)> bump(double lo, double hi) {
    if (!(hi > lo)) throw Error(Errc::invalid_argument, "bump needs lo < hi", "bump");
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    return [mid, half](double x) {
        const double u = (x - mid) / half;
        if (std::abs(u) >= 1.0) return cplx(0.0);
        return cplx(std::exp(-1.0 / (1.0 - u * u)), 0.0);
    };
}

}  // namespace saext
