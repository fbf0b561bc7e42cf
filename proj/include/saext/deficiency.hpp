#pragma once

#include <span>
#include <string>
#include <vector>

#include "saext/core.hpp"

namespace saext {

enum class ClassificationKind { essentially_self_adjoint, has_extensions, no_extensions };

std::string_view to_string(ClassificationKind kind);

/// von Neumann classification from the deficiency indices. `param_dim` is
/// n^2 (the dimension of U(n)) for has_extensions and 0 otherwise.
struct Classification {
    ClassificationKind kind;
    int param_dim = 0;

    friend bool operator==(const Classification&, const Classification&) = default;
};

Classification classify(int n_plus, int n_minus);

/// A closed-form solution of T^dagger psi = sign * i * lambda * psi that was
/// tested for square integrability.
struct DeficiencyCandidate {
    int sign;  // +1 or -1
    std::string tag;
    bool square_integrable;
};

struct DeficiencyReport {
    OperatorSpec op;
    int n_plus = 0;
    int n_minus = 0;
    double lambda = 1.0;
    /// Normalized square-integrable solutions, sampled on the report grid
    /// and carrying their closed forms.
    std::vector<GridFunction> basis_plus;
    std::vector<GridFunction> basis_minus;
    Classification classification;
    /// Every solution of the deficiency equations that was examined.
    std::vector<DeficiencyCandidate> candidates;
};

struct DeficiencyOptions {
    std::size_t grid_points = 10000;
};

/// Deficiency indices of a catalog operator at scale lambda > 0. Candidate
/// solutions come from the closed-form solution space of each catalog
/// equation; the count of each sign is the number that pass the tail test.
DeficiencyReport solve_deficiency(const OperatorSpec& op, double lambda = 1.0,
                                  const DeficiencyOptions& options = {});

/// True iff the partial norms of |f|^2 up to each cutoff stabilize (relative
/// increment below 1e-8 between the last two cutoffs). Cutoffs are upper
/// integration limits, clamped to the function's domain; on the full line
/// they are symmetric half-widths. Functions with a closed form are
/// evaluated beyond their sample grid.
bool tail_integrability(const GridFunction& f, std::span<const double> cutoffs);

/// Max over basis functions of |(T^dagger -/+ i lambda) psi| on interior
/// grid points, with 2nd-order central differences.
double verify_deficiency_numerically(const OperatorSpec& op, const DeficiencyReport& report);

}  // namespace saext
