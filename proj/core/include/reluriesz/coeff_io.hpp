#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "reluriesz/spectrum.hpp"

namespace reluriesz {

/// Coefficient files are JSON objects {"dim", "a0" | "alpha0", "terms": [{"k", "c", "s"}]}.
/// The constant key decides the kind: "a0" for Fourier, "alpha0" for generator coefficients.
using AnyCoeffs = std::variant<FourierCoeffs, RieszCoeffs>;

std::string to_json(const FourierCoeffs& f);
std::string to_json(const RieszCoeffs& g);

/// Throws ParseError (malformed JSON, missing/mistyped field, with its path)
/// or a domain/dimension error for invalid indices.
AnyCoeffs parse_coeffs(const std::string& text);
FourierCoeffs parse_fourier_coeffs(const std::string& text);
RieszCoeffs parse_riesz_coeffs(const std::string& text);

AnyCoeffs read_coeffs_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace reluriesz
