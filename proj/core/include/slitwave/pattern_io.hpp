#pragma once

#include <iosfwd>
#include <string>

#include "slitwave/intensity.hpp"

namespace slitwave {

// Shortest decimal representation that parses back to the identical double.
std::string format_double(double value);

// CSV with header `s_m,intensity`, one row per sample, then the metadata
// snapshot as trailing `#` comment lines. Deterministic byte-for-byte for
// identical patterns.
void write_pattern_csv(const Pattern& pattern, std::ostream& out);
std::string write_pattern_csv(const Pattern& pattern);
void write_pattern_file(const Pattern& pattern, const std::string& path);

// Inverse of write_pattern_csv; `#` metadata lines are restored into
// Pattern::metadata where they follow the `# key = value` shape and kept
// verbatim under an empty key otherwise.
Pattern parse_pattern_csv(std::istream& in);
Pattern load_pattern_file(const std::string& path);

}  // namespace slitwave
