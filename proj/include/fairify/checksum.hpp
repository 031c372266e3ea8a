#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fairify {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// Lowercase hex SHA-256 of a file's contents. Throws IoError when the file
/// cannot be read.
std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace fairify
