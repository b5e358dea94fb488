//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_UTIL_HPP_
#define TARGEN_UTIL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace targen {

inline constexpr std::string_view kVersion = "0.1.0";

// splitmix64: used to derive independent RNG streams from one named seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for a named stream (e.g. "init", "batch", "noise").
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
  std::uint64_t h = root ^ 0x51'73'68'61'6d'62'6c'65ULL;
  for (char c : stream) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

// FNV-1a over arbitrary bytes; used for file digests in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path);          // throws DataError
void write_file_atomic(const std::string& path, std::string_view content);
std::string hex64(std::uint64_t v);

}  // namespace targen

#endif  // TARGEN_UTIL_HPP_
