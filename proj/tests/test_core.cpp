#include <doctest.h>

#include <sstream>

#include "saext/core.hpp"
#include "saext/finite_difference.hpp"
#include "saext/io.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace saext;
using testing_support::error_code;

namespace {

GridFunction sample(const std::vector<double>& xs, std::function<cplx(double)> f,
                    MeasureWeight w = MeasureWeight::unit()) {
    return GridFunction::sample(xs, f, w);
}

// Non-uniform grid on [a, b]: uniform points pushed by a smooth monotone map.
std::vector<double> stretched_grid(double a, double b, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        xs[i] = a + (b - a) * (u + 0.1 * std::sin(pi * u) * u);
    }
    return xs;
}

}  // namespace

TEST_CASE("domain type invariants") {
    CHECK(error_code([] { Interval::finite(1.0, 1.0); }) == Errc::invalid_argument);
    CHECK(error_code([] { Interval::finite(0.0, infinity); }) == Errc::invalid_argument);
    CHECK(error_code([] { Interval::half_line(infinity); }) == Errc::invalid_argument);
    CHECK(error_code([] { UnitSystem::make(0.0, 1.0); }) == Errc::invalid_argument);
    CHECK(error_code([] { UnitSystem::make(1.0, -2.0); }) == Errc::invalid_argument);
    CHECK(error_code([] {
              OperatorSpec::make(OperatorKind::time_operator, Interval::finite(0.0, 1.0));
          }) == Errc::unsupported_operator);
    CHECK(Interval::half_line(2.0).b() == infinity);

    CHECK(wrap_angle(-0.5) == doctest::Approx(two_pi - 0.5));
    CHECK(wrap_angle(two_pi) == 0.0);
    CHECK(std::get<PhaseCondition>(make_phase(7.0)).theta == doctest::Approx(7.0 - two_pi));
    CHECK(std::get<RobinCondition>(make_robin(infinity)).is_dirichlet_limit());
    CHECK(variant_name(BoundaryCondition{RawRestrictive{}}) == "raw_restrictive");
}

TEST_CASE("grid function construction errors") {
    CHECK(error_code([] { GridFunction({0.0}, {cplx(1.0)}); }) == Errc::degenerate_grid);
    CHECK(error_code([] { GridFunction({0.0, 1.0}, {cplx(1.0)}); }) == Errc::grid_mismatch);
    CHECK(error_code([] { GridFunction({0.0, 0.0}, {1.0, 1.0}); }) == Errc::invalid_argument);
    CHECK(error_code([] { GridFunction({-1.0, 1.0}, {1.0, 1.0}, MeasureWeight::radial()); }) ==
          Errc::invalid_argument);
}

TEST_CASE("inner product reference values") {
    const auto xs = uniform_grid(0.0, 1.0, 1001);
    const auto one = sample(xs, [](double) { return cplx(1.0); });
    CHECK(std::abs(inner_product(one, one) - 1.0) <= 1e-12);

    const auto s1 = sample(xs, [](double x) { return std::sqrt(2.0) * std::sin(pi * x); });
    const auto s2 = sample(xs, [](double x) { return std::sqrt(2.0) * std::sin(2 * pi * x); });
    CHECK(std::abs(inner_product(s1, s2)) <= 1e-10);

    // Normalized Robin bound state with alpha = -1.
    const auto bx = uniform_grid(0.0, 40.0, 20001);
    const auto psi = sample(bx, [](double x) { return std::sqrt(2.0) * std::exp(-x); });
    CHECK(std::abs(inner_product(psi, psi) - 1.0) <= 1e-8);
}

TEST_CASE("inner product errors") {
    const auto f = sample(uniform_grid(0.0, 1.0, 11), [](double) { return cplx(1.0); });
    const auto g = sample(uniform_grid(0.0, 1.0, 12), [](double) { return cplx(1.0); });
    const auto h = sample(uniform_grid(0.0, 1.0, 11), [](double) { return cplx(1.0); },
                          MeasureWeight::radial());
    CHECK(error_code([&] { inner_product(f, g); }) == Errc::grid_mismatch);
    CHECK(error_code([&] { inner_product(f, h); }) == Errc::grid_mismatch);
}

TEST_CASE("quadrature agrees with a Gauss-Legendre oracle") {
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    const double exact = oracle::integrate(f, 0.0, 5.0);
    for (std::size_t n : {2001, 2000}) {  // even and odd interval counts
        const auto xs = uniform_grid(0.0, 5.0, n);
        std::vector<double> v(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
        CHECK(integrate(xs, v) == doctest::Approx(exact).epsilon(1e-11));
    }
    const auto xs = stretched_grid(0.0, 5.0, 20001);
    CHECK_FALSE(is_uniform(xs));
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
    CHECK(integrate(xs, v) == doctest::Approx(exact).epsilon(1e-7));

    // Radial weight: int_0^2 x^2 * x dx = 4.
    const auto r = uniform_grid(0.0, 2.0, 401);
    const auto lin = sample(r, [](double x) { return cplx(x); }, MeasureWeight::radial());
    CHECK(inner_product(lin, lin).real() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("finite differences") {
    const double h = 0.1;
    const std::vector<double> nodes{-h, 0.0, h};
    const auto w = fd::fornberg_weights(0.0, nodes, 2);
    CHECK(w[2][0] == doctest::Approx(1.0 / (h * h)));
    CHECK(w[2][1] == doctest::Approx(-2.0 / (h * h)));
    CHECK(w[1][2] == doctest::Approx(0.5 / h));

    // Fourth-order convergence of the first derivative, ends included.
    auto max_err = [](std::size_t n) {
        const auto xs = uniform_grid(0.0, 2.0, n);
        const auto f = sample(xs, [](double x) { return cplx(std::sin(3 * x), std::cos(x)); });
        const auto d = derivative(f, 1);
        double e = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            e = std::max(e, std::abs(d[i] - cplx(3 * std::cos(3 * xs[i]), -std::sin(xs[i]))));
        }
        return e;
    };
    const double order = std::log2(max_err(101) / max_err(201));
    CHECK(order == doctest::Approx(4.0).epsilon(0.1));

    const auto xs = uniform_grid(0.0, 1.0, 4);
    std::vector<cplx> v(4, 1.0);
    CHECK(error_code([&] { fd::derivative_at(xs, v, 0, 1, 4); }) == Errc::degenerate_grid);
}

TEST_CASE("momentum boundary form") {
    const auto xs = uniform_grid(0.0, 1.0, 2001);
    const auto unit = Interval::finite(0.0, 1.0);
    const auto vanishing = sample(xs, [](double x) { return cplx(std::sin(pi * x), x * (1 - x)); });
    CHECK(std::abs(boundary_form_momentum(vanishing, vanishing, unit)) <= 1e-30);

    const auto ex = sample(xs, [](double x) { return cplx(std::exp(x)); });
    const cplx expected = cplx(0.0, -1.0) * (std::exp(2.0) - 1.0);
    CHECK(std::abs(boundary_form_momentum(ex, ex, unit) - expected) <= 1e-12);

    const double theta = pi / 3;
    const auto eta = sample(xs, [&](double x) { return std::polar(1.0, (two_pi + theta) * x); });
    const auto xi = sample(xs, [&](double x) { return std::polar(1.0, theta * x); });
    CHECK(std::abs(boundary_form_momentum(xi, eta, unit)) <= 1e-12);

    // Equals (xi, p eta) - (p xi, eta) by quadrature.
    const auto a = sample(xs, [](double x) { return cplx(1.0 + x * x, std::sin(x)); });
    const auto b = sample(xs, [](double x) { return cplx(std::exp(-x), x); });
    const auto pa = cplx(0.0, -1.0) * derivative(a);
    const auto pb = cplx(0.0, -1.0) * derivative(b);
    const cplx by_parts = inner_product(a, pb) - inner_product(pa, b);
    CHECK(std::abs(boundary_form_momentum(a, b, unit) - by_parts) <= 1e-8);

    // Unbounded intervals need decay.
    const auto hx = uniform_grid(0.0, 10.0, 101);
    const auto flat = sample(hx, [](double) { return cplx(1.0); });
    CHECK(error_code([&] { boundary_form_momentum(flat, flat, Interval::half_line()); }) ==
          Errc::unsupported_boundary);
    CHECK(error_code([&] { boundary_form_momentum(flat, flat, Interval::full_line()); }) ==
          Errc::unsupported_boundary);
}

TEST_CASE("hamiltonian boundary form") {
    const auto xs = uniform_grid(0.0, 40.0, 40001);
    const auto xi = sample(xs, [](double x) { return cplx(std::exp(-x)); });
    const auto eta = sample(xs, [](double x) { return cplx(std::exp(-2 * x)); });
    CHECK(std::abs(boundary_form_hamiltonian(xi, eta) - (-1.0)) <= 1e-6);

    const auto flat_start = sample(xs, [](double x) { return cplx(x * x * std::exp(-x)); });
    CHECK(std::abs(boundary_form_hamiltonian(flat_start, flat_start)) <= 1e-12);

    const auto robin = sample(xs, [](double x) { return cplx(std::exp(-x)); });
    CHECK(std::abs(boundary_form_hamiltonian(robin, robin)) <= 1e-12);

    const auto tiny = sample(uniform_grid(0.0, 1.0, 4), [](double x) { return cplx(x); });
    CHECK(error_code([&] { boundary_form_hamiltonian(tiny, tiny); }) == Errc::degenerate_grid);
}

TEST_CASE("property: inner product is conjugate symmetric and positive") {
    auto g = oracle::rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(oracle::uniform(g, 0, 400));
        const bool uniform = trial % 2 == 0;
        const auto xs = uniform ? uniform_grid(0.0, oracle::uniform(g, 0.5, 5), n)
                                : stretched_grid(0.0, oracle::uniform(g, 0.5, 5), n);
        const double a1 = oracle::uniform(g, -3, 3), a2 = oracle::uniform(g, -3, 3);
        const double b1 = oracle::uniform(g, -3, 3), b2 = oracle::uniform(g, -3, 3);
        const auto f = sample(xs, [&](double x) { return cplx(std::cos(a1 * x), std::sin(a2 * x)); });
        const auto h = sample(xs, [&](double x) { return cplx(b1 * x, std::exp(-b2 * b2 * x)); });
        CHECK(inner_product(f, h) == std::conj(inner_product(h, f)));
        const cplx ff = inner_product(f, f);
        CHECK(ff.real() >= 0.0);
        CHECK(ff.imag() == 0.0);
    }
}

TEST_CASE("property: momentum form vanishes within one phase domain") {
    auto g = oracle::rng(12);
    const auto xs = uniform_grid(0.0, 1.0, 257);
    const auto unit = Interval::finite(0.0, 1.0);
    int nonzero_across = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = oracle::uniform(g, 0, two_pi);
        const double other = wrap_angle(theta + oracle::uniform(g, 0.3, two_pi - 0.3));
        // psi(x) = e^{i theta x} * periodic profile lies in the theta domain.
        auto member = [&](double th, double c1, double c2) {
            return sample(xs, [=](double x) {
                return std::polar(1.0, th * x) * cplx(c1 + std::cos(two_pi * x), c2 * std::sin(4 * pi * x));
            });
        };
        const auto f = member(theta, oracle::uniform(g, 1.5, 3), oracle::uniform(g, -1, 1));
        const auto h = member(theta, oracle::uniform(g, 1.5, 3), oracle::uniform(g, -1, 1));
        CHECK(std::abs(boundary_form_momentum(f, h, unit)) <= 1e-12);
        const auto k = member(other, oracle::uniform(g, 1.5, 3), oracle::uniform(g, -1, 1));
        nonzero_across += std::abs(boundary_form_momentum(f, k, unit)) > 1e-3;
    }
    CHECK(nonzero_across == 200);
}

TEST_CASE("property: hamiltonian form vanishes on a common Robin condition") {
    auto g = oracle::rng(13);
    const auto xs = uniform_grid(0.0, 40.0, 40001);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = oracle::uniform(g, -5, 5);
        // psi = e^{-x}(c0 + (alpha + 1) c0 x + c2 x^2) has psi'(0) = alpha psi(0).
        auto profile = [&] {
            const cplx c0(oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2));
            const cplx c2(oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2));
            return sample(xs, [=](double x) { return std::exp(-x) * (c0 + (alpha + 1) * c0 * x + c2 * x * x); });
        };
        const auto f = profile();
        const auto h = profile();
        const double scale = std::max(1.0, std::abs(alpha)) * std::abs(f.front()) * std::abs(h.front());
        CHECK(std::abs(boundary_form_hamiltonian(f, h)) <= 1e-8 * std::max(1.0, scale));
    }
}

TEST_CASE("grid function serialization round trips") {
    const auto xs = uniform_grid(0.0, 2.0, 9);
    const auto f = sample(xs, [](double x) { return cplx(std::exp(-x), x / 3.0); },
                          MeasureWeight::radial());
    std::stringstream csv;
    io::write_csv(csv, f);
    const auto back = io::read_csv(csv);
    CHECK(back.same_grid(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);

    const auto j = io::to_json(f);
    CHECK(j["weight"] == "r");
    const auto again = io::grid_function_from_json(j);
    CHECK(again.same_grid(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(again[i] == f[i]);

    std::stringstream bad("x,re,im\n0,1,0\n");
    CHECK(error_code([&] { io::read_csv(bad); }) == Errc::invalid_argument);
}
