#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "saext/core.hpp"

namespace saext::io {

/// CSV with header `x,re,im,w`, one row per sample.
void write_csv(std::ostream& out, const GridFunction& f);
/// Parse the CSV written by write_csv. The weight column must match one of
/// the catalog weights at every sample.
GridFunction read_csv(std::istream& in);

/// {"xs": [...], "re": [...], "im": [...], "weight": "<id>"}
nlohmann::json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);

/// Round-trip safe decimal rendering of a double (shortest representation).
std::string format_double(double v);

}  // namespace saext::io
