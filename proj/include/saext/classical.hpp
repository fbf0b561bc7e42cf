#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saext/core.hpp"

namespace saext {

/// Exact rational number with a positive denominator in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(Rational a, Rational b) noexcept = default;
    friend std::strong_ordering operator<=>(Rational a, Rational b) noexcept;

    /// Parse "3", "-2" or "1/2".
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// coeff * q^q_pow * p^p_pow * t^t_pow
struct Monomial {
    double coeff = 0.0;
    Rational q_pow;
    int p_pow = 0;
    int t_pow = 0;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Finite sum of monomials in (q, p, t), kept sorted by exponents with like
/// terms merged and zero coefficients dropped.
class MonomialObservable {
public:
    MonomialObservable() = default;
    explicit MonomialObservable(std::vector<Monomial> terms);

    static MonomialObservable constant(double c);
    static MonomialObservable monomial(double coeff, Rational q_pow, int p_pow, int t_pow = 0);
    static MonomialObservable q() { return monomial(1.0, 1, 0); }
    static MonomialObservable p() { return monomial(1.0, 0, 1); }
    static MonomialObservable t() { return monomial(1.0, 0, 0, 1); }

    const std::vector<Monomial>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    double evaluate(double q, double p, double t = 0.0) const;

    MonomialObservable d_dq() const;
    MonomialObservable d_dp() const;
    MonomialObservable d_dt() const;

    std::string to_string() const;

    friend MonomialObservable operator+(const MonomialObservable& a, const MonomialObservable& b);
    friend MonomialObservable operator-(const MonomialObservable& a, const MonomialObservable& b);
    friend MonomialObservable operator*(const MonomialObservable& a, const MonomialObservable& b);
    friend MonomialObservable operator*(double c, const MonomialObservable& a);
    friend bool operator==(const MonomialObservable&, const MonomialObservable&) = default;

private:
    std::vector<Monomial> terms_;
};

/// {f, g} = df/dq dg/dp - df/dp dg/dq
MonomialObservable poisson_bracket(const MonomialObservable& f, const MonomialObservable& g);

/// df/dt = partial_t f + {f, H}
MonomialObservable total_time_derivative(const MonomialObservable& f, const MonomialObservable& H);

/// V(q) = g q^s
struct PowerLawPotential {
    double g = 1.0;
    Rational s;

    MonomialObservable observable() const { return MonomialObservable::monomial(g, s, 0); }
    double value(double q) const;
    double derivative(double q) const;
};

/// H = p^2 / 2m + V (2m = 1 by default).
MonomialObservable hamiltonian(const PowerLawPotential& V, double two_m = 1.0);

/// D = t H - q p / 2
MonomialObservable dilatation_observable(const PowerLawPotential& V, double two_m = 1.0);

/// H t - q p / 2 at a phase-space point.
double dilatation(double q, double p, double t, double H_value);

/// (q/2) V' + V, which equals g (1 + s/2) q^s and vanishes only for s = -2.
MonomialObservable scale_condition_residual(const PowerLawPotential& V);

struct PhaseState {
    double q = 1.0;
    double p = 0.0;
};

struct Trajectory {
    std::vector<double> t, q, p;
    /// max |H(t) - H(0)| / |H(0)| (absolute when H(0) = 0).
    double energy_drift = 0.0;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of q' = 2p/2m, p' = -V'(q)
/// with absolute and relative step tolerance `tol`.
Trajectory integrate_flow(const PowerLawPotential& V, PhaseState state0, double t_end,
                          double tol = 1e-10, double two_m = 1.0);

struct DriftReport {
    /// max over the trajectory of |D(t) - D(0)|
    double max_drift = 0.0;
    /// D(t_end) - D(0)
    double final_drift = 0.0;
    /// integral of g (1 + s/2) q(t)^s over [0, t_end]
    double predicted_drift = 0.0;
    /// |final - predicted| / |predicted|, or the absolute mismatch when the
    /// prediction vanishes.
    double mismatch = 0.0;
    double energy_drift = 0.0;
    std::size_t steps = 0;
};

DriftReport dilatation_drift(const PowerLawPotential& V, PhaseState state0, double t_end,
                             double tol = 1e-10, double two_m = 1.0);

}  // namespace saext
