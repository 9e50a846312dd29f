#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace hmit {

// Lowercase hex SHA-256 digests (OpenSSL EVP under the hood).
std::string sha256_hex(std::string_view bytes);
std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace hmit
