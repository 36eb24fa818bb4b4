#pragma once

#include <filesystem>
#include <string>

namespace sgreg {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Writes via a temporary file in the same directory and renames it into
/// place, so a killed run never leaves a truncated artifact.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace sgreg
