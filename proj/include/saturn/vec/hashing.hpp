#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace saturn::vec {

/// Lower-case hex MD5 digest.
std::string md5_hex(std::string_view data);

/// The 128-bit MD5 digest read as a big-endian integer, reduced mod `d`.
std::uint64_t md5_mod(std::string_view data, std::uint64_t d);

}  // namespace saturn::vec
