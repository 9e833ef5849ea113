#pragma once

// Arbitrary-precision integer kernels shared by the rest of the library.
//
// Values are GMP integers. Every function here is pure and may be called
// concurrently.

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace wiener {

using Nat = mpz_class;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown by mod_inv when gcd(a, modulus) != 1. In the RSA setting the gcd is
// a factor of n, so callers should not swallow it.
class NotInvertible : public std::runtime_error {
 public:
  explicit NotInvertible(Nat gcd);
  const Nat& gcd() const noexcept { return gcd_; }

 private:
  Nat gcd_;
};

/// base^exp mod modulus. Requires modulus >= 2 and exp >= 0.
Nat mod_pow(const Nat& base, const Nat& exp, const Nat& modulus);

/// x with a*x = 1 (mod modulus), 0 < x < modulus.
Nat mod_inv(const Nat& a, const Nat& modulus);

/// floor(sqrt(x)) by integer Newton iteration.
Nat isqrt(const Nat& x);

/// ceil(sqrt(x)).
Nat isqrt_ceil(const Nat& x);

/// The exact root when x is a perfect square.
std::optional<Nat> exact_sqrt(const Nat& x);

/// gcd of machine words, binary method.
constexpr std::uint64_t binary_gcd(std::uint64_t a, std::uint64_t b) noexcept {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = std::countr_zero(a | b);
  a >>= std::countr_zero(a);
  do {
    b >>= std::countr_zero(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

// Lowercase hex without prefix. Parsing rejects anything outside [0-9a-f].
std::string to_hex(const Nat& x);
std::optional<Nat> parse_hex(std::string_view text);

// Decimal integer parsing; rejects signs, spaces and empty input.
std::optional<Nat> parse_decimal(std::string_view text);

}  // namespace wiener
