#pragma once

// JSON exchange format for quantizer specs.
//
// Full form:       {"K": 4, "thresholds": [t1, t2, t3], "levels": [y1..y4]}
// Uniform shorthand: {"K": 4, "step": 0.5860}
// plus an optional "name" in either form. K is the number of positive
// levels, so thresholds has K-1 entries and levels K.

#include <string>

#include "qrate/quantizer.hpp"

namespace qrate {

/// Parse a spec from JSON text. Malformed JSON and schema violations throw
/// std::runtime_error whose message carries line:column coordinates.
QuantizerSpec parse_spec_json(const std::string& text);

/// Read and parse a spec file; errors mention the path.
QuantizerSpec load_spec_file(const std::string& path);

/// Serialize in the full form (thresholds + levels), `indent` spaces per
/// level, trailing newline included.
std::string to_json_string(const QuantizerSpec& spec, int indent = 2);

void save_spec_file(const QuantizerSpec& spec, const std::string& path, int indent = 2);

}  // namespace qrate
