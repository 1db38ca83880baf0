#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace feast {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's exact contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace feast
