#include <doctest.h>

#include "saext/geometry.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace saext;
using testing_support::error_code;

namespace {

const std::vector<double>& radial_grid() {
    static const auto xs = uniform_grid(0.0, 4.0, 8001);
    return xs;
}

GridFunction sample_bump(const oracle::Bump& b, cplx scale) {
    return GridFunction::sample(radial_grid(), [=](double r) { return scale * b(r); }, MeasureWeight::radial());
}

// Integration-by-parts value i int conj(f) g (1 - 2 r omega) dr by Gauss-Legendre.
cplx oracle_defect(const oracle::Bump& f, cplx cf, const oracle::Bump& g, cplx cg,
                   const std::function<double(double)>& omega) {
    const double lo = std::max(f.lo, g.lo), hi = std::min(f.hi, g.hi);
    if (!(hi > lo)) return 0.0;
    const cplx v = oracle::integrate(
        [&](double r) { return std::conj(cf) * cg * f(r) * g(r) * (1.0 - 2.0 * r * omega(r)); }, lo, hi, 400);
    return cplx(0.0, 1.0) * v;
}

struct Pair {
    oracle::Bump f, g;
    cplx cf, cg;
};

Pair random_pair(std::mt19937_64& rng) {
    auto one = [&] {
        const double lo = oracle::uniform(rng, 0.3, 1.5);
        return oracle::Bump{lo, lo + oracle::uniform(rng, 1.0, 2.2)};
    };
    auto c = [&] { return cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)); };
    return {one(), one(), c(), c()};
}

}  // namespace

TEST_CASE("connection condition for the built-in metrics") {
    const auto polar = connection_condition(MeasureSpec::polar());
    const auto sph = connection_condition(MeasureSpec::spherical());
    const auto flat = connection_condition(MeasureSpec::flat());
    for (double r : {0.1, 1.0, 3.7}) {
        CHECK(polar(r) == doctest::Approx(0.5 / r));
        CHECK(sph(r) == doctest::Approx(1.0 / r));
        CHECK(flat(r) == 0.0);
    }
    const auto custom = connection_condition(MeasureSpec::custom("r", [](double r) { return r * r; }));
    CHECK(custom(2.0) == doctest::Approx(0.25).epsilon(1e-8));
    const auto bad = connection_condition(MeasureSpec::custom("r", [](double r) { return r - 1.0; }));
    CHECK(error_code([&] { bad(0.5); }) == Errc::invalid_metric);
    CHECK(error_code([] { MeasureSpec::from_name("hyperbolic"); }) == Errc::invalid_metric);
    CHECK(MeasureSpec::from_name("spherical").weight == MeasureWeight::radial_squared());
}

TEST_CASE("radial defect reference values") {
    const oracle::Bump b{1.0, 2.0};
    const auto f = sample_bump(b, 1.0);
    const double mass = oracle::integrate([&](double r) { return b(r) * b(r); }, 1.0, 2.0, 400);
    const RadialProfile zero = [](double) { return 0.0; };
    const RadialProfile half = [](double r) { return 0.5 / r; };
    const RadialProfile wrong = [](double r) { return 1.0 / r; };
    CHECK(std::abs(radial_symmetry_defect(half, f, f)) <= 1e-8);
    CHECK(std::abs(radial_symmetry_defect(zero, f, f) - cplx(0.0, mass)) <= 1e-6);
    CHECK(std::abs(radial_symmetry_defect(wrong, f, f) - cplx(0.0, -mass)) <= 1e-6);
}

TEST_CASE("property: defect over 50 random bump pairs") {
    auto rng = oracle::rng(71);
    const auto condition = connection_condition(MeasureSpec::polar());
    const RadialProfile zero = [](double) { return 0.0; };
    for (int i = 0; i < 50; ++i) {
        const auto pr = random_pair(rng);
        const auto f = sample_bump(pr.f, pr.cf), g = sample_bump(pr.g, pr.cg);
        CHECK(std::abs(radial_symmetry_defect(condition, f, g)) <= 1e-8);
        const cplx expect = oracle_defect(pr.f, pr.cf, pr.g, pr.cg, zero);
        CHECK(std::abs(radial_symmetry_defect(zero, f, g) - expect) <= 1e-6);
        CHECK(std::abs(radial_defect_prediction(zero, f, g) - expect) <= 1e-8);
    }
}

TEST_CASE("property: linear response to a perturbed connection") {
    auto rng = oracle::rng(72);
    for (int i = 0; i < 10; ++i) {
        const auto pr = random_pair(rng);
        const auto f = sample_bump(pr.f, pr.cf), g = sample_bump(pr.g, pr.cg);
        // omega = 1/(2r) + eps/r shifts the defect by -2i eps int conj(f) g dr.
        const double lo = std::max(pr.f.lo, pr.g.lo), hi = std::min(pr.f.hi, pr.g.hi);
        if (!(hi > lo)) continue;
        const cplx overlap = oracle::integrate(
            [&](double r) { return std::conj(pr.cf) * pr.cg * pr.f(r) * pr.g(r); }, lo, hi, 400);
        if (std::abs(overlap) < 1e-4) continue;
        const double eps = 1e-3;
        const RadialProfile perturbed = [=](double r) { return 0.5 / r + eps / r; };
        const cplx slope = radial_symmetry_defect(perturbed, f, g) / eps;
        const cplx predicted = cplx(0.0, -2.0) * overlap;
        CHECK(std::abs(slope - predicted) <= 0.05 * std::abs(predicted));
    }
}

TEST_CASE("property: sesquilinearity") {
    auto rng = oracle::rng(73);
    const RadialProfile omega = [](double r) { return 0.3 + 0.1 * r; };
    for (int i = 0; i < 10; ++i) {
        const auto p1 = random_pair(rng), p2 = random_pair(rng);
        const auto f1 = sample_bump(p1.f, p1.cf), f2 = sample_bump(p2.f, p2.cf);
        const auto g = sample_bump(p1.g, p1.cg);
        const cplx a(oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2));
        const cplx lhs = radial_symmetry_defect(omega, a * f1 + f2, g);
        const cplx rhs = std::conj(a) * radial_symmetry_defect(omega, f1, g) + radial_symmetry_defect(omega, f2, g);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("property: commutator preserved for arbitrary connections") {
    auto rng = oracle::rng(74);
    const oracle::Bump b{1.0, 3.0};
    const auto f = sample_bump(b, cplx(0.4, -1.1));
    for (double k : {0.0, 0.5, 5.0}) {
        CHECK(commutator_preservation_check([=](double r) { return k / r; }, f) <= 1e-6);
    }
    for (int i = 0; i < 20; ++i) {
        const double a = oracle::uniform(rng, -3, 3), c = oracle::uniform(rng, 0.1, 4), w = oracle::uniform(rng, 0.5, 5);
        const RadialProfile omega = [=](double r) { return a * std::sin(w * r) + c / r; };
        CHECK(commutator_preservation_check(omega, f) <= 1e-6);
    }
}

TEST_CASE("geometry errors") {
    const auto touching = GridFunction::sample(radial_grid(), [](double r) { return cplx(std::exp(-r)); });
    const RadialProfile zero = [](double) { return 0.0; };
    CHECK(error_code([&] { radial_symmetry_defect(zero, touching, touching); }) == Errc::singular_support);
    const auto other = GridFunction::sample(uniform_grid(0.0, 4.0, 101), [](double) { return cplx(0.0); });
    const auto f = sample_bump({1.0, 2.0}, 1.0);
    CHECK(error_code([&] { radial_symmetry_defect(zero, f, other); }) == Errc::grid_mismatch);
    CHECK(error_code([] { bump(2.0, 1.0); }) == Errc::invalid_argument);
}
