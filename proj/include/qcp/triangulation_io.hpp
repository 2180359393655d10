#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcp/delta_complex.hpp"

namespace qcp {

// A parsed triangulation file: the validated complex plus the optional
// per-edge intersection angles carried by `phi` lines.
struct Triangulation {
    DeltaComplex complex;
    std::optional<std::vector<double>> phi;
};

// Parses the triangulation text format:
//   vertices N
//   edge <id> <d0> <d1>
//   triangle <id> <d0-edge> <d1-edge> <d2-edge>
//   phi <edge-id> <radians>
// '#' starts a comment; ids are 0-based and contiguous. The returned
// complex is fully validated. Throws Error{Parse} with a line number on
// syntax errors and Error{Invariant} on structural violations.
Triangulation parse_triangulation(std::string_view text);

// File wrappers; throw Error{Io} when the path cannot be read or written.
Triangulation load_triangulation(const std::filesystem::path& path);

std::string format_triangulation(const DeltaComplex& c, const std::vector<double>* phi,
                                 std::string_view header_comment = {});

// Writes via a temp file in the same directory followed by a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// One "<vertex-id> <value>" pair per line, '#' comments allowed.
// Requires exactly one value per vertex of the complex.
std::vector<double> parse_vertex_values(std::string_view text, int vertex_count);
std::vector<double> load_vertex_values(const std::filesystem::path& path, int vertex_count);
std::string format_vertex_values(const std::vector<double>& values);

} // namespace qcp
