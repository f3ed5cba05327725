#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace denot::util {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's contents; throws std::runtime_error if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// First 16 hex digits of sha256_hex, for compact identifiers.
std::string short_hash(std::string_view bytes);

}  // namespace denot::util
