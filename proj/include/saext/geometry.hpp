#pragma once

#include <functional>
#include <string>

#include "saext/core.hpp"

namespace saext {

using RadialProfile = std::function<double(double)>;

/// Coordinate system with its radial metric determinant g(r).
struct MeasureSpec {
    enum class Kind { flat, polar, spherical, custom };

    Kind kind = Kind::flat;
    std::string coordinate = "x";
    /// Inner-product weight sqrt(g) restricted to the radial direction.
    MeasureWeight weight;
    /// g as a function of the coordinate (angular factors set to 1).
    RadialProfile metric_det;

    static MeasureSpec flat();
    static MeasureSpec polar();
    static MeasureSpec spherical();
    static MeasureSpec custom(std::string coordinate, RadialProfile metric_det);
    /// "flat", "polar" or "spherical".
    static MeasureSpec from_name(std::string_view name);
};

std::string_view to_string(MeasureSpec::Kind kind);

/// Re(omega_j) = (1/2) d_j log sqrt(g): exact for the built-in metrics and a
/// central difference otherwise. The returned profile throws invalid_metric
/// where g <= 0.
RadialProfile connection_condition(const MeasureSpec& measure);

/// (f, p_r g) - (p_r f, g) under the r dr measure with p_r = -i(d/dr + omega).
/// f and g must vanish near r = 0 (singular_support otherwise).
cplx radial_symmetry_defect(const RadialProfile& omega_re, const GridFunction& f,
                            const GridFunction& g);

/// The integration-by-parts value of the defect: i int conj(f) g dr - 2i int
/// omega r conj(f) g dr.
cplx radial_defect_prediction(const RadialProfile& omega_re, const GridFunction& f,
                              const GridFunction& g);

/// max |([r, p_r] - i) f| over the grid.
double commutator_preservation_check(const RadialProfile& omega_re, const GridFunction& f);

/// Smooth bump exp(-1/(1-u^2)) on (lo, hi), zero outside.
std::function<cplx(double)> bump(double lo, double hi);

}  // namespace saext
