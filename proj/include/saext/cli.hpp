#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace saext::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kComputationError = 1;
inline constexpr int kUsageError = 2;

/// Run one command line (without the program name). Payloads go to `out`,
/// usage messages to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `--sweep name=start:stop:count`, an inclusive linear grid.
struct SweepAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;

    static SweepAxis parse(std::string_view spec);
    std::vector<double> values() const;
};

/// Total number of grid points; throws size_limit above 10^6.
std::size_t sweep_size(const std::vector<SweepAxis>& axes);

/// Grid point `index` of the cartesian product, last axis fastest.
std::vector<double> sweep_point(const std::vector<SweepAxis>& axes, std::size_t index);

/// Strip the manifest's wall-time field for byte comparisons.
nlohmann::json without_wall_time(nlohmann::json payload);

}  // namespace saext::cli
