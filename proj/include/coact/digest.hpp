#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace coact {

/// Incremental SHA-256 (OpenSSL EVP).
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view bytes);
  /// Appends the decimal form followed by a unit separator.
  Sha256& update_number(long long value);
  /// Lowercase hex of the digest, truncated to `chars`. Finalizes the hash.
  std::string hex(std::size_t chars = 64);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string sha256_hex(std::string_view bytes, std::size_t chars = 64);

}  // namespace coact
