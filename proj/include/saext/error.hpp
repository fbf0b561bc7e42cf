#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saext {

enum class Errc {
    grid_mismatch,
    degenerate_grid,
    unsupported_boundary,
    unsupported_operator,
    invalid_schedule,
    unsupported_extension,
    precondition,
    invalid_index,
    no_root,
    indeterminate,
    too_coarse,
    no_bound_state,
    domain_violation,
    singularity_reached,
    stiffness,
    singular_support,
    invalid_metric,
    size_limit,
    invalid_argument,
    internal,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::grid_mismatch: return "grid_mismatch";
        case Errc::degenerate_grid: return "degenerate_grid";
        case Errc::unsupported_boundary: return "unsupported_boundary";
        case Errc::unsupported_operator: return "unsupported_operator";
        case Errc::invalid_schedule: return "invalid_schedule";
        case Errc::unsupported_extension: return "unsupported_extension";
        case Errc::precondition: return "precondition";
        case Errc::invalid_index: return "invalid_index";
        case Errc::no_root: return "no_root";
        case Errc::indeterminate: return "indeterminate";
        case Errc::too_coarse: return "too_coarse";
        case Errc::no_bound_state: return "no_bound_state";
        case Errc::domain_violation: return "domain_violation";
        case Errc::singularity_reached: return "singularity_reached";
        case Errc::stiffness: return "stiffness";
        case Errc::singular_support: return "singular_support";
        case Errc::invalid_metric: return "invalid_metric";
        case Errc::size_limit: return "size_limit";
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::internal: return "internal";
    }
    return "unknown";
}

/// Library-wide exception. `context` names the operation or offending value.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::string context = {})
        : std::runtime_error(message), code_(code), context_(std::move(context)) {}

    Errc code() const noexcept { return code_; }
    const std::string& context() const noexcept { return context_; }

private:
    Errc code_;
    std::string context_;
};

}  // namespace saext
