#pragma once

// Fingerprint table for the meet-in-the-middle congruence a^r = 2 b^s (mod n).
//
// Stores the low w bits of a^r mod n for r in [1, R], split into rows by the
// residues of r modulo a small prime set. A probe for a given s can skip any
// row whose r shares a prime with s, since such (r, s) never satisfy
// gcd(r, s) = 1.

#include "wiener/numeric.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace wiener {

inline constexpr unsigned kMinFingerprintBits = 16;
inline constexpr unsigned kMaxFingerprintBits = 64;

/// 2 * ceil(log2(max(R, S))) + 8, clamped to [16, 64].
unsigned fingerprint_width(std::uint64_t r_max, std::uint64_t s_max);

/// Low `width` bits of x. Requires 16 <= width <= 64 and x >= 0.
std::uint64_t fingerprint(const Nat& x, unsigned width);

struct ProbeStats {
  std::uint64_t probes = 0;           // probe() calls
  std::uint64_t row_lookups = 0;      // rows actually searched
  std::uint64_t rows_skipped = 0;
  std::uint64_t entries_searched = 0; // entries held by searched rows
  std::uint64_t entries_skipped = 0;  // entries held by skipped rows
  std::uint64_t matches = 0;

  double skip_fraction() const noexcept {
    const auto total = entries_searched + entries_skipped;
    return total == 0 ? 0.0 : static_cast<double>(entries_skipped) / static_cast<double>(total);
  }
  ProbeStats& operator+=(const ProbeStats& other) noexcept;
};

class FingerprintTable {
 public:
  /// Builds over a^r mod n for r = 1..r_max with one modular multiplication
  /// per step. With threads > 1 the range is split and each chunk seeds its
  /// own running power. Throws NotInvertible when gcd(a, n) != 1.
  static FingerprintTable build(const Nat& a, const Nat& n, std::uint32_t r_max,
                                std::span<const unsigned> row_primes, unsigned width,
                                unsigned threads = 1);

  /// Appends to `hits` every r whose fingerprint equals fingerprint(target).
  /// Hits are fingerprint matches only and come out in increasing r.
  void probe(const Nat& target, std::uint64_t s, bool gcd_filter,
             std::vector<std::uint32_t>& hits, ProbeStats* stats = nullptr) const;
  std::vector<std::uint32_t> probe(const Nat& target, std::uint64_t s, bool gcd_filter) const;

  std::uint32_t r_max() const noexcept { return r_max_; }
  unsigned width() const noexcept { return width_; }
  std::span<const unsigned> row_primes() const noexcept { return primes_; }
  std::size_t row_count() const noexcept { return zero_masks_.size(); }
  std::size_t row_of(std::uint32_t r) const noexcept;
  std::size_t row_size(std::size_t row) const;

  std::size_t entries() const noexcept { return r_max_; }
  std::size_t bytes() const;
  std::uint64_t modmuls() const noexcept { return modmuls_; }
  std::uint64_t setup_powers() const noexcept { return setup_powers_; }

 private:
  template <typename Key>
  struct Row {
    using key_type = Key;
    std::vector<Key> fingerprints;  // sorted
    std::vector<std::uint32_t> exponents;
  };
  template <typename Key>
  using Rows = std::vector<Row<Key>>;

  template <typename Key>
  void fill(const Nat& a, const Nat& n, unsigned threads);

  std::uint32_t r_max_ = 0;
  unsigned width_ = 0;
  std::vector<unsigned> primes_;
  std::vector<std::uint32_t> strides_;
  std::vector<std::uint32_t> zero_masks_;  // bit i set when p_i divides the row's r
  std::uint64_t modmuls_ = 0;
  std::uint64_t setup_powers_ = 0;
  std::variant<Rows<std::uint32_t>, Rows<std::uint64_t>> rows_;
};

}  // namespace wiener
