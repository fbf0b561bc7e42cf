#include <doctest.h>

#include "saext/deficiency.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace saext;
using testing_support::error_code;

namespace {

struct CatalogRow {
    OperatorKind kind;
    Interval interval;
    int n_plus, n_minus;
    ClassificationKind classification;
};

std::vector<CatalogRow> catalog() {
    return {
        {OperatorKind::momentum, Interval::finite(0.0, 1.0), 1, 1, ClassificationKind::has_extensions},
        {OperatorKind::momentum, Interval::half_line(), 1, 0, ClassificationKind::no_extensions},
        {OperatorKind::momentum, Interval::full_line(), 0, 0,
         ClassificationKind::essentially_self_adjoint},
        {OperatorKind::free_hamiltonian, Interval::half_line(), 1, 1,
         ClassificationKind::has_extensions},
        {OperatorKind::time_operator, Interval::half_line(0.5), 1, 0, ClassificationKind::no_extensions},
    };
}

// Norm of the closed form over its interval, by Gauss-Legendre on a cutoff.
double oracle_norm(const GridFunction& f) {
    const auto& form = *f.closed_form();
    const double a = form.domain.a();
    const double b = form.domain.is_finite() ? form.domain.b() : a + 80.0;
    return std::sqrt(oracle::integrate([&](double x) { return std::norm(form.eval(x)); }, a, b, 800));
}

}  // namespace

TEST_CASE("classification rule") {
    CHECK(classify(0, 0) == Classification{ClassificationKind::essentially_self_adjoint, 0});
    CHECK(classify(1, 1) == Classification{ClassificationKind::has_extensions, 1});
    CHECK(classify(2, 2) == Classification{ClassificationKind::has_extensions, 4});
    CHECK(classify(1, 0).kind == ClassificationKind::no_extensions);
    CHECK(classify(0, 3).kind == ClassificationKind::no_extensions);
    CHECK(error_code([] { classify(-1, 0); }) == Errc::invalid_argument);
}

TEST_CASE("catalog indices and residuals") {
    for (const auto& row : catalog()) {
        CAPTURE(to_string(row.kind));
        CAPTURE(to_string(row.interval.kind()));
        const auto op = OperatorSpec::make(row.kind, row.interval);
        const auto r = solve_deficiency(op, 1.0, {10000});
        CHECK(r.n_plus == row.n_plus);
        CHECK(r.n_minus == row.n_minus);
        CHECK(r.classification.kind == row.classification);
        CHECK(r.basis_plus.size() == static_cast<std::size_t>(row.n_plus));
        CHECK(r.basis_minus.size() == static_cast<std::size_t>(row.n_minus));
        CHECK(verify_deficiency_numerically(op, r) <= 1e-4);
        for (const auto& f : r.basis_plus) CHECK(oracle_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
        for (const auto& f : r.basis_minus) CHECK(oracle_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("rejected candidates really grow") {
    const auto op = OperatorSpec::make(OperatorKind::free_hamiltonian, Interval::half_line());
    const auto r = solve_deficiency(op);
    int rejected = 0;
    for (const auto& c : r.candidates) rejected += !c.square_integrable;
    CHECK(r.candidates.size() == 4);
    CHECK(rejected == 2);
    // The accepted + solution is e^{(i-1)x/sqrt2}; |psi|^2 decays like e^{-sqrt2 x}.
    const auto& f = r.basis_plus.front();
    const auto& form = *f.closed_form();
    const double ratio = std::abs(form.eval(10.0)) / std::abs(form.eval(0.0));
    CHECK(ratio == doctest::Approx(std::exp(-10.0 / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("property: indices do not depend on lambda or units") {
    auto g = oracle::rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const double lambda = std::exp(oracle::uniform(g, std::log(0.01), std::log(100.0)));
        const auto units = UnitSystem::make(oracle::uniform(g, 0.2, 3.0), oracle::uniform(g, 0.2, 3.0));
        for (const auto& row : catalog()) {
            const auto op = OperatorSpec::make(row.kind, row.interval, units);
            const auto r = solve_deficiency(op, lambda, {2000});
            CHECK(r.n_plus == row.n_plus);
            CHECK(r.n_minus == row.n_minus);
        }
    }
}

TEST_CASE("tail integrability") {
    const auto xs = uniform_grid(0.0, 30.0, 3001);
    const auto decaying = GridFunction::sample(xs, [](double x) { return cplx(std::exp(-x)); });
    const auto flat = GridFunction::sample(xs, [](double) { return cplx(1.0); });
    const std::vector<double> cutoffs{10.0, 20.0, 30.0};
    CHECK(tail_integrability(decaying, cutoffs));
    CHECK_FALSE(tail_integrability(flat, cutoffs));
    const std::vector<double> short_schedule{10.0, 20.0};
    const std::vector<double> unsorted{10.0, 30.0, 20.0};
    CHECK(error_code([&] { tail_integrability(flat, short_schedule); }) == Errc::invalid_schedule);
    CHECK(error_code([&] { tail_integrability(flat, unsorted); }) == Errc::invalid_schedule);
}

TEST_CASE("deficiency argument errors") {
    const auto p = OperatorSpec::make(OperatorKind::momentum, Interval::finite(0.0, 1.0));
    CHECK(error_code([&] { solve_deficiency(p, 0.0); }) == Errc::invalid_argument);
    CHECK(error_code([&] { solve_deficiency(p, -1.0); }) == Errc::invalid_argument);
    const auto h = OperatorSpec::make(OperatorKind::free_hamiltonian, Interval::finite(0.0, 1.0));
    CHECK(error_code([&] { solve_deficiency(h); }) == Errc::unsupported_operator);
}
