#pragma once

// Line-based key file: one `name = hexvalue` per line, lowercase hex, names
// from {n, e, p, q, d}. n and e are mandatory; p, q and d come together.

#include "wiener/rsa.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace wiener {

struct KeyFile {
  PublicKey pub;
  std::optional<PrivateKey> priv;
};

class KeyParseError : public std::runtime_error {
 public:
  KeyParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

KeyFile parse_key(std::istream& in);
KeyFile read_key(const std::filesystem::path& path);

void write_key(std::ostream& out, const PublicKey& pub,
               const PrivateKey* priv = nullptr);
void write_key(const std::filesystem::path& path, const PublicKey& pub,
               const PrivateKey* priv = nullptr);

// Single `name = value` record in the same encoding.
void write_field(std::ostream& out, std::string_view name, const Nat& value);

}  // namespace wiener
