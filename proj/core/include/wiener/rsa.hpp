#pragma once

// RSA key material, deliberately weak key generation and the two ways of
// checking a candidate secret exponent.

#include "wiener/numeric.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace wiener {

struct PublicKey {
  Nat n;
  Nat e;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct PrivateKey {
  Nat p;
  Nat q;
  Nat d;
  Nat phi;

  friend bool operator==(const PrivateKey&, const PrivateKey&) = default;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Window for d, as multiples of D * n^{1/4}.
struct DWindow {
  double lo = 0.9;
  double hi = 1.1;
};

/// Deterministic in seed. Produces p < q < 2p, each modulus_bits/2 bits, and
/// an odd d drawn uniformly from the window (never below 3) with
/// gcd(d, phi) = 1. modulus_bits must be even and >= 32.
KeyPair keygen_weak(unsigned modulus_bits, double d_ratio, std::uint64_t seed,
                    DWindow window = {});

/// Strong probable-prime test. Deterministic: a fixed base set below 2^64 and
/// 64 pseudo-random bases from a fixed seed above.
bool is_probable_prime(const Nat& n);

/// Uniform integer in [0, bound) from the given engine. bound must be > 0.
Nat random_below(const Nat& bound, std::mt19937_64& rng);

/// D = d / n^{1/4}, as a double.
double d_ratio_of(const Nat& d, const Nat& n);

/// n^{1/4} scaled by factor, rounded down.
Nat scaled_fourth_root(const Nat& n, double factor);

enum class RejectStage {
  accepted,
  inexact_phi,
  negative_sum,
  non_square,
  product_mismatch,
};

std::string_view to_string(RejectStage stage);

struct Factorization {
  RejectStage stage = RejectStage::inexact_phi;
  Nat p;
  Nat q;
  Nat phi;

  bool accepted() const noexcept { return stage == RejectStage::accepted; }
};

/// Recover p and q from a guess (d, k) via phi = (d e - 1) / k and the
/// quadratic identity for p + q. Requires k >= 1.
Factorization method1_factor(const PublicKey& pub, const Nat& d, const Nat& k);

/// (2^e)^d = 2 (mod n).
bool method2_check(const PublicKey& pub, const Nat& d);

}  // namespace wiener
