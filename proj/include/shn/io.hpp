#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "shn/binary_nets.hpp"
#include "shn/complex.hpp"

namespace shn {

/// {n_vertices, simplices: [[v, ...], ...], weights: [w, ...]} in canonical order.
nlohmann::json complex_to_json(const FunctionalComplex& complex);
/// Throws std::invalid_argument on missing or malformed fields.
FunctionalComplex complex_from_json(const nlohmann::json& j);

FunctionalComplex load_complex(const std::filesystem::path& path);
void save_complex(const std::filesystem::path& path, const FunctionalComplex& complex);

nlohmann::json state_to_json(const BinaryState& state);
BinaryState state_from_json(const nlohmann::json& j);

/// Whole-file helpers that name the path in their errors.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace shn
