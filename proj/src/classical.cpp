#include "saext/classical.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "saext/io.hpp"

namespace saext {

// ---------------------------------------------------------------------------
// Rational

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw Error(Errc::invalid_argument, "rational overflow", "Rational");
    }
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw Error(Errc::invalid_argument, "rational overflow", "Rational");
    }
    return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(Errc::invalid_argument, "zero denominator", "Rational");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
    return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                    checked_mul(a.den_, b.den_));
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

Rational operator*(Rational a, Rational b) {
    return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
}

Rational operator/(Rational a, Rational b) {
    return Rational(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
}

std::strong_ordering operator<=>(Rational a, Rational b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
            throw Error(Errc::invalid_argument, "not a rational number", std::string(text));
        }
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

// ---------------------------------------------------------------------------
// MonomialObservable

namespace {

bool exponent_less(const Monomial& a, const Monomial& b) {
    if (a.t_pow != b.t_pow) return a.t_pow < b.t_pow;
    if (a.q_pow != b.q_pow) return a.q_pow < b.q_pow;
    return a.p_pow < b.p_pow;
}

bool same_exponents(const Monomial& a, const Monomial& b) {
    return a.t_pow == b.t_pow && a.q_pow == b.q_pow && a.p_pow == b.p_pow;
}

double power(double x, Rational r) {
    if (r.is_integer()) return std::pow(x, static_cast<double>(r.num()));
    return std::pow(x, r.to_double());
}

}  // namespace

MonomialObservable::MonomialObservable(std::vector<Monomial> terms) {
    for (const auto& m : terms) {
        if (m.t_pow < 0) {
            throw Error(Errc::invalid_argument, "time exponent must be non-negative",
                        "MonomialObservable");
        }
    }
    std::stable_sort(terms.begin(), terms.end(), exponent_less);
    for (const auto& m : terms) {
        if (!terms_.empty() && same_exponents(terms_.back(), m)) {
            terms_.back().coeff += m.coeff;
        } else {
            terms_.push_back(m);
        }
    }
    std::erase_if(terms_, [](const Monomial& m) { return m.coeff == 0.0; });
}

MonomialObservable MonomialObservable::constant(double c) { return monomial(c, 0, 0, 0); }

MonomialObservable MonomialObservable::monomial(double coeff, Rational q_pow, int p_pow,
                                                int t_pow) {
    if (p_pow < 0) {
        throw Error(Errc::invalid_argument, "momentum exponent must be non-negative",
                    "MonomialObservable");
    }
    return MonomialObservable({Monomial{coeff, q_pow, p_pow, t_pow}});
}

double MonomialObservable::evaluate(double q, double p, double t) const {
    double acc = 0.0;
    for (const auto& m : terms_) {
        acc += m.coeff * power(q, m.q_pow) * std::pow(p, m.p_pow) * std::pow(t, m.t_pow);
    }
    return acc;
}

MonomialObservable MonomialObservable::d_dq() const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.q_pow == Rational(0)) continue;
        out.push_back({m.coeff * m.q_pow.to_double(), m.q_pow - Rational(1), m.p_pow, m.t_pow});
    }
    return MonomialObservable(std::move(out));
}

MonomialObservable MonomialObservable::d_dp() const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.p_pow == 0) continue;
        out.push_back({m.coeff * m.p_pow, m.q_pow, m.p_pow - 1, m.t_pow});
    }
    return MonomialObservable(std::move(out));
}

MonomialObservable MonomialObservable::d_dt() const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.t_pow == 0) continue;
        out.push_back({m.coeff * m.t_pow, m.q_pow, m.p_pow, m.t_pow - 1});
    }
    return MonomialObservable(std::move(out));
}

std::string MonomialObservable::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& m : terms_) {
        if (!first) os << " + ";
        first = false;
        os << io::format_double(m.coeff);
        if (m.q_pow != Rational(0)) os << "*q^" << (m.q_pow.is_integer() ? m.q_pow.to_string() : "(" + m.q_pow.to_string() + ")");
        if (m.p_pow != 0) os << "*p^" << m.p_pow;
        if (m.t_pow != 0) os << "*t^" << m.t_pow;
    }
    return os.str();
}

MonomialObservable operator+(const MonomialObservable& a, const MonomialObservable& b) {
    std::vector<Monomial> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return MonomialObservable(std::move(terms));
}

MonomialObservable operator-(const MonomialObservable& a, const MonomialObservable& b) {
    return a + (-1.0) * b;
}

MonomialObservable operator*(const MonomialObservable& a, const MonomialObservable& b) {
    std::vector<Monomial> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            terms.push_back({x.coeff * y.coeff, x.q_pow + y.q_pow, x.p_pow + y.p_pow,
                             x.t_pow + y.t_pow});
        }
    }
    return MonomialObservable(std::move(terms));
}

MonomialObservable operator*(double c, const MonomialObservable& a) {
    std::vector<Monomial> terms = a.terms_;
    for (auto& m : terms) m.coeff *= c;
    return MonomialObservable(std::move(terms));
}

MonomialObservable poisson_bracket(const MonomialObservable& f, const MonomialObservable& g) {
    return f.d_dq() * g.d_dp() - f.d_dp() * g.d_dq();
}

MonomialObservable total_time_derivative(const MonomialObservable& f, const MonomialObservable& H) {
    return f.d_dt() + poisson_bracket(f, H);
}

// ---------------------------------------------------------------------------
// Power laws

double PowerLawPotential::value(double q) const { return g * power(q, s); }

double PowerLawPotential::derivative(double q) const {
    if (s == Rational(0)) return 0.0;
    return g * s.to_double() * power(q, s - Rational(1));
}

MonomialObservable hamiltonian(const PowerLawPotential& V, double two_m) {
    return MonomialObservable::monomial(1.0 / two_m, 0, 2) + V.observable();
}

MonomialObservable dilatation_observable(const PowerLawPotential& V, double two_m) {
    return MonomialObservable::t() * hamiltonian(V, two_m) - MonomialObservable::monomial(0.5, 1, 1);
}

double dilatation(double q, double p, double t, double H_value) { return H_value * t - 0.5 * q * p; }

MonomialObservable scale_condition_residual(const PowerLawPotential& V) {
    const auto v = V.observable();
    return 0.5 * (MonomialObservable::q() * v.d_dq()) + v;
}

// ---------------------------------------------------------------------------
// Flow integration

namespace {

using State3 = std::array<double, 3>;  // q, p, accumulated predicted drift

bool singular_power(const PowerLawPotential& V) { return V.s < Rational(0) || !V.s.is_integer(); }

template <class Observer>
std::size_t run_flow(const PowerLawPotential& V, PhaseState s0, double t_end, double tol,
                     double two_m, Observer&& observe) {
    namespace ode = boost::numeric::odeint;
    if (!(t_end >= 0.0) || !(tol > 0.0) || !(two_m > 0.0)) {
        throw Error(Errc::invalid_argument, "need t_end >= 0, tol > 0 and 2m > 0", "integrate_flow");
    }
    const bool guard = singular_power(V) && V.g != 0.0;
    if (guard && !(s0.q > 0.0)) {
        throw Error(Errc::invalid_argument, "initial q must be positive for this potential",
                    "integrate_flow");
    }
    const double rate_coeff = V.g * (1.0 + 0.5 * V.s.to_double());
    auto rhs = [&](const State3& y, State3& dy, double) {
        dy[0] = 2.0 * y[1] / two_m;
        dy[1] = -V.derivative(y[0]);
        dy[2] = V.g == 0.0 ? 0.0 : rate_coeff * power(y[0], V.s);
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State3>>(tol, tol);
    State3 y{s0.q, s0.p, 0.0};
    double t = 0.0;
    double dt = std::min(1e-3, t_end > 0.0 ? t_end / 16.0 : 1e-3);
    const double dt_min = 1e-14 * std::max(1.0, t_end);
    const double q_guard = 1e-8 * std::max(1.0, std::abs(s0.q));
    observe(t, y);
    std::size_t steps = 0;
    while (t < t_end) {
        dt = std::min(dt, t_end - t);
        if (dt < dt_min && t_end - t > dt_min) {
            // Step collapse on the way into q = 0 is the collapse, not stiffness.
            if (guard && y[0] < 1e-3 * std::max(1.0, std::abs(s0.q))) {
                throw Error(Errc::singularity_reached, "trajectory reached the singularity at q = 0",
                            "t=" + io::format_double(t) + " q=" + io::format_double(y[0]));
            }
            throw Error(Errc::stiffness, "step size underflow",
                        "t=" + io::format_double(t) + " q=" + io::format_double(y[0]));
        }
        const State3 before = y;
        const auto result = stepper.try_step(rhs, y, t, dt);
        if (result == ode::fail) continue;
        const bool finite = std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]);
        if (!finite || (guard && y[0] <= q_guard)) {
            throw Error(Errc::singularity_reached, "trajectory reached the singularity at q = 0",
                        "t=" + io::format_double(t) + " q=" + io::format_double(before[0]));
        }
        ++steps;
        observe(t, y);
    }
    return steps;
}

}  // namespace

Trajectory integrate_flow(const PowerLawPotential& V, PhaseState state0, double t_end, double tol,
                          double two_m) {
    Trajectory tr;
    const double H0 = state0.p * state0.p / two_m + V.value(state0.q);
    run_flow(V, state0, t_end, tol, two_m, [&](double t, const State3& y) {
        tr.t.push_back(t);
        tr.q.push_back(y[0]);
        tr.p.push_back(y[1]);
        const double H = y[1] * y[1] / two_m + V.value(y[0]);
        const double dev = H0 != 0.0 ? std::abs(H - H0) / std::abs(H0) : std::abs(H - H0);
        tr.energy_drift = std::max(tr.energy_drift, dev);
    });
    return tr;
}

DriftReport dilatation_drift(const PowerLawPotential& V, PhaseState state0, double t_end, double tol,
                             double two_m) {
    DriftReport rep;
    auto H_of = [&](double q, double p) { return p * p / two_m + V.value(q); };
    const double H0 = H_of(state0.q, state0.p);
    const double D0 = dilatation(state0.q, state0.p, 0.0, H0);
    rep.steps = run_flow(V, state0, t_end, tol, two_m, [&](double t, const State3& y) {
        const double H = H_of(y[0], y[1]);
        const double drift = dilatation(y[0], y[1], t, H) - D0;
        rep.max_drift = std::max(rep.max_drift, std::abs(drift));
        rep.final_drift = drift;
        rep.predicted_drift = y[2];
        const double dev = H0 != 0.0 ? std::abs(H - H0) / std::abs(H0) : std::abs(H - H0);
        rep.energy_drift = std::max(rep.energy_drift, dev);
    });
    const double diff = std::abs(rep.final_drift - rep.predicted_drift);
    rep.mismatch = rep.predicted_drift != 0.0 ? diff / std::abs(rep.predicted_drift) : diff;
    return rep;
}

}  // namespace saext
