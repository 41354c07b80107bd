#pragma once

#include <string>

#include "ggme/linalg.hpp"

namespace ggme {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Headerless CSV, '.' decimal, one row per line. Throws IoError on missing
// file, ragged rows or unparsable cells.
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);

// FNV-1a over the raw bytes, rendered as 16 hex chars.
std::string fnv1a_hex(const void* data, std::size_t n);
std::string matrix_hash(const Matrix& m);
std::string string_hash(const std::string& s);

} // namespace ggme
