#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "unisim/types.hpp"

namespace unisim {

/// {"n": n, "entries": [[re, im], ...]} with entries in row-major order.
/// On input an entry may also be a string accepted by parse_complex.
/// Doubles are written in shortest round-trip form, so parsing the output
/// reproduces every entry bit for bit.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& doc);

std::string serialize_matrix(const ComplexMatrix& m);
ComplexMatrix parse_matrix(std::string_view text);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

/// Parses "2", "-1.5", "3i", "1+2i", "1e-3-4.5i".
Complex parse_complex(std::string_view token);

}  // namespace unisim
