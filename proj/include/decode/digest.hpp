#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace decode {

// FNV-1a 64-bit. Used for dataset/checkpoint integrity and determinism checks.
class Digest {
 public:
  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }

  void update(const std::string& s) { update(s.data(), s.size()); }

  std::uint64_t value() const { return hash_; }

  std::string hex() const;

  static std::uint64_t of(const void* data, std::size_t n) {
    Digest d;
    d.update(data, n);
    return d.value();
  }

  static std::string file_hex(const std::string& path);

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace decode
