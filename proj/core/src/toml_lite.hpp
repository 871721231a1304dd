#pragma once

#include <json.hpp>

#include <string_view>

namespace mma::detail {

/// Parses the TOML subset used by experiment files into a JSON value:
/// `key = value` pairs, `[table]` and `[[array.of.tables]]` headers, strings,
/// integers, floats, booleans and (possibly multi-line) arrays. Throws
/// ConfigError with the line number on anything else.
nlohmann::json parse_toml_subset(std::string_view text);

}  // namespace mma::detail
