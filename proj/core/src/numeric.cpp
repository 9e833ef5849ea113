#include "wiener/numeric.hpp"

#include <utility>

namespace wiener {

NotInvertible::NotInvertible(Nat gcd)
    : std::runtime_error("not invertible: gcd = " + gcd.get_str()),
      gcd_(std::move(gcd)) {}

Nat mod_pow(const Nat& base, const Nat& exp, const Nat& modulus) {
  if (modulus < 2) throw DomainError("mod_pow: modulus must be >= 2");
  if (sgn(exp) < 0) throw DomainError("mod_pow: negative exponent");
  Nat result;
  mpz_powm(result.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  return result;
}

Nat mod_inv(const Nat& a, const Nat& modulus) {
  if (modulus < 2) throw DomainError("mod_inv: modulus must be >= 2");
  Nat g, x;
  Nat reduced = a % modulus;
  if (sgn(reduced) < 0) reduced += modulus;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), nullptr, reduced.get_mpz_t(),
             modulus.get_mpz_t());
  if (g != 1) throw NotInvertible(g);
  x %= modulus;
  if (sgn(x) < 0) x += modulus;
  return x;
}

Nat isqrt(const Nat& x) {
  if (sgn(x) < 0) throw DomainError("isqrt: negative argument");
  if (x < 2) return x;
  // Start at a power of two that is >= sqrt(x); the iterates then decrease
  // monotonically until they reach floor(sqrt(x)).
  const std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  Nat current = Nat(1) << static_cast<mp_bitcnt_t>((bits + 1) / 2);
  for (;;) {
    Nat next = (current + x / current) >> 1;
    if (next >= current) return current;
    current = std::move(next);
  }
}

Nat isqrt_ceil(const Nat& x) {
  Nat root = isqrt(x);
  if (root * root != x) ++root;
  return root;
}

std::optional<Nat> exact_sqrt(const Nat& x) {
  if (sgn(x) < 0) return std::nullopt;
  Nat root = isqrt(x);
  if (root * root != x) return std::nullopt;
  return root;
}

std::string to_hex(const Nat& x) { return x.get_str(16); }

namespace {

std::optional<Nat> parse_digits(std::string_view text, int base) {
  if (text.empty()) return std::nullopt;
  for (char c : text) {
    const bool digit = c >= '0' && c <= '9';
    const bool hex = base == 16 && c >= 'a' && c <= 'f';
    if (!digit && !hex) return std::nullopt;
  }
  Nat out;
  if (out.set_str(std::string(text), base) != 0) return std::nullopt;
  return out;
}

}  // namespace

std::optional<Nat> parse_hex(std::string_view text) { return parse_digits(text, 16); }

std::optional<Nat> parse_decimal(std::string_view text) {
  return parse_digits(text, 10);
}

}  // namespace wiener
