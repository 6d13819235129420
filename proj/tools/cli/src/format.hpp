#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rrnet {

/// 17 significant digits; nan / inf / -inf spelled out.
std::string fmt(double v);
std::string fmt(std::int64_t v);
std::string fmt(std::uint64_t v);
inline std::string fmt(int v) { return fmt(static_cast<std::int64_t>(v)); }
inline std::string fmt(unsigned v) { return fmt(static_cast<std::uint64_t>(v)); }

std::string csv_escape(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

std::vector<double> parse_double_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

/// Resolves a config path: as given, then relative to $RRNET_CONFIG_DIR.
std::filesystem::path resolve_config_path(const std::string& path);

/// Writes to path, or to out when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out);

void log_line(std::ostream& err, const std::string& message);

}  // namespace rrnet
