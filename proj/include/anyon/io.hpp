#pragma once

#include <string>
#include <vector>

#include "anyon/diagnostics.hpp"
#include "anyon/state.hpp"

namespace anyon {

inline constexpr int kSnapshotVersion = 1;

/// diagnostics.csv header for the given tail radii.
std::string diagnostics_header(const std::vector<double>& lambdas);
std::string diagnostics_row(const DiagnosticsRecord<double>& rec);

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord<double>>& records,
                       const std::vector<double>& lambdas);

/// Text snapshot: header block (format version, grid metadata, t, alpha)
/// followed by "ix iv1 iv2 f" rows in lexicographic order, 17 significant digits.
void write_snapshot(const std::string& path, const State<double>& state);
std::string format_snapshot(const State<double>& state);

/// Rebuilds grids and state from a snapshot. Throws ParseError on a version
/// mismatch or truncated/malformed content.
State<double> read_snapshot(const std::string& path);
State<double> parse_snapshot(const std::string& text);

/// %.17g
std::string format_real(double value);

void ensure_directory(const std::string& dir);

} // namespace anyon
