// File I/O helpers shared by the CLI: round-trip decimal formatting, CSV
// matrix serialization with the `# k=..,r=..` comment header, atomic file
// writes (temp + rename), and the KDE overlay SVG.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wishprod/spectral.hpp"

namespace wishprod {

// Full round-trip decimal formatting (17 significant digits).
std::string format_full(double x);

// Write `content` atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvMatrix {
    Matrix values;
    std::optional<int> k;
    std::optional<int> r;
};

// Row-major CSV; when k/r are set a `# k=<k>,r=<r>` comment line is emitted.
std::string matrix_to_csv(const Matrix& m, std::optional<int> k = std::nullopt,
                          std::optional<int> r = std::nullopt);

// Parse CSV produced by matrix_to_csv (comment lines starting with '#' are
// scanned for k/r). Error BadFormat on ragged rows or unparsable numbers.
CsvMatrix matrix_from_csv(const std::string& text);
CsvMatrix read_matrix_csv(const std::filesystem::path& path);

// Two overlaid curves on a fixed viewport: solid reference, dashed estimate.
// Deterministic output (no timestamps or environment-dependent content).
std::string kde_overlay_svg(const std::vector<double>& grid,
                            const std::vector<double>& kde_density,
                            const std::vector<double>& reference_density);

} // namespace wishprod
