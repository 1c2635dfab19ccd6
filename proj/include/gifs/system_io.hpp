#pragma once

#include <string>

#include "gifs/graph.hpp"

namespace gifs {

struct SystemIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses a system description (JSON text) into a GraphIFS. Rationals are
/// strings "a/b" to preserve exactness. Schema violations throw
/// SystemIoError; definitional violations are reported by validate().
GraphIFS parse_system_text(const std::string& json_text);

/// Reads and parses a system file.
GraphIFS parse_system_file(const std::string& path);

/// Serializes a GraphIFS back to the same schema (used by tests).
std::string system_to_json(const GraphIFS& g);

}  // namespace gifs
