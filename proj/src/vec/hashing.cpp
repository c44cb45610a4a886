#include "saturn/vec/hashing.hpp"

#include <array>
#include <stdexcept>

#include <openssl/evp.h>

namespace saturn::vec {
namespace {

std::array<unsigned char, 16> md5(std::string_view data) {
  std::array<unsigned char, 16> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_md5(), nullptr) != 1 || len != 16)
    throw std::runtime_error("MD5 digest failed");
  return out;
}

}  // namespace

std::string md5_hex(std::string_view data) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(32);
  for (unsigned char b : md5(data)) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 15]);
  }
  return s;
}

std::uint64_t md5_mod(std::string_view data, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("md5_mod: modulus must be positive");
  unsigned __int128 r = 0;
  for (unsigned char b : md5(data)) r = ((r << 8) | b) % d;
  return static_cast<std::uint64_t>(r);
}

}  // namespace saturn::vec
