#include "wiener/mitm_table.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <thread>

static_assert(GMP_NUMB_BITS == 64, "fingerprints assume 64-bit GMP limbs");

namespace wiener {

unsigned fingerprint_width(std::uint64_t r_max, std::uint64_t s_max) {
  const std::uint64_t largest = std::max<std::uint64_t>({r_max, s_max, 1});
  const auto log2_ceil = static_cast<unsigned>(std::bit_width(largest - 1));
  return std::clamp(2 * log2_ceil + 8, kMinFingerprintBits, kMaxFingerprintBits);
}

std::uint64_t fingerprint(const Nat& x, unsigned width) {
  if (width < kMinFingerprintBits || width > kMaxFingerprintBits)
    throw DomainError("fingerprint width must lie in [16, 64]");
  const std::uint64_t low = mpz_getlimbn(x.get_mpz_t(), 0);
  return width == 64 ? low : low & ((std::uint64_t{1} << width) - 1);
}

ProbeStats& ProbeStats::operator+=(const ProbeStats& other) noexcept {
  probes += other.probes;
  row_lookups += other.row_lookups;
  rows_skipped += other.rows_skipped;
  entries_searched += other.entries_searched;
  entries_skipped += other.entries_skipped;
  matches += other.matches;
  return *this;
}

std::size_t FingerprintTable::row_of(std::uint32_t r) const noexcept {
  std::size_t row = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) row += (r % primes_[i]) * strides_[i];
  return row;
}

std::size_t FingerprintTable::row_size(std::size_t row) const {
  return std::visit([row](const auto& rows) { return rows.at(row).exponents.size(); }, rows_);
}

std::size_t FingerprintTable::bytes() const {
  return std::visit(
      [](const auto& rows) {
        std::size_t total = 0;
        for (const auto& row : rows) {
          total += row.fingerprints.size() * sizeof(row.fingerprints[0]) +
                   row.exponents.size() * sizeof(std::uint32_t);
        }
        return total;
      },
      rows_);
}

template <typename Key>
void FingerprintTable::fill(const Nat& a, const Nat& n, unsigned threads) {
  const std::size_t row_count = zero_masks_.size();
  threads = std::clamp<unsigned>(threads, 1, std::max<std::uint32_t>(1, r_max_ / 4096));

  // Each chunk fills private rows in increasing r; chunks are merged in order.
  std::vector<Rows<Key>> partial(threads, Rows<Key>(row_count));
  std::vector<std::uint64_t> muls(threads, 0);

  auto work = [&](unsigned t) {
    const std::uint32_t first = static_cast<std::uint32_t>(
        1 + static_cast<std::uint64_t>(r_max_) * t / threads);
    const std::uint32_t last = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(r_max_) * (t + 1) / threads);
    auto& rows = partial[t];
    Nat power = t == 0 ? Nat(a % n) : mod_pow(a, first, n);
    for (std::uint32_t r = first;; ++r) {
      auto& row = rows[row_of(r)];
      row.fingerprints.push_back(static_cast<Key>(fingerprint(power, width_)));
      row.exponents.push_back(r);
      if (r == last) break;
      mpz_mul(power.get_mpz_t(), power.get_mpz_t(), a.get_mpz_t());
      mpz_tdiv_r(power.get_mpz_t(), power.get_mpz_t(), n.get_mpz_t());
      ++muls[t];
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  modmuls_ = std::accumulate(muls.begin(), muls.end(), std::uint64_t{0});
  setup_powers_ = threads - 1;

  Rows<Key> rows(row_count);
  for (std::size_t i = 0; i < row_count; ++i) {
    auto& row = rows[i];
    std::vector<std::pair<Key, std::uint32_t>> merged;
    for (auto& chunk : partial) {
      for (std::size_t j = 0; j < chunk[i].exponents.size(); ++j)
        merged.emplace_back(chunk[i].fingerprints[j], chunk[i].exponents[j]);
      chunk[i] = {};
    }
    std::sort(merged.begin(), merged.end());
    row.fingerprints.reserve(merged.size());
    row.exponents.reserve(merged.size());
    for (const auto& [fp, r] : merged) {
      row.fingerprints.push_back(fp);
      row.exponents.push_back(r);
    }
  }
  rows_ = std::move(rows);
}

FingerprintTable FingerprintTable::build(const Nat& a, const Nat& n, std::uint32_t r_max,
                                         std::span<const unsigned> row_primes,
                                         unsigned width, unsigned threads) {
  if (r_max < 1) throw DomainError("table needs r_max >= 1");
  if (n < 2) throw DomainError("table modulus must be >= 2");
  if (width < kMinFingerprintBits || width > kMaxFingerprintBits)
    throw DomainError("fingerprint width must lie in [16, 64]");
  if (row_primes.size() > 32) throw DomainError("at most 32 row primes");
  Nat g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  if (g != 1) throw NotInvertible(g);

  FingerprintTable table;
  table.r_max_ = r_max;
  table.width_ = width;
  table.primes_.assign(row_primes.begin(), row_primes.end());

  std::uint32_t rows = 1;
  for (unsigned p : table.primes_) {
    if (p < 2) throw DomainError("row primes must be >= 2");
    table.strides_.push_back(rows);
    rows *= p;
  }
  table.zero_masks_.assign(rows, 0);
  for (std::uint32_t row = 0; row < rows; ++row) {
    for (std::size_t i = 0; i < table.primes_.size(); ++i) {
      if ((row / table.strides_[i]) % table.primes_[i] == 0) table.zero_masks_[row] |= 1u << i;
    }
  }

  if (width <= 32) {
    table.fill<std::uint32_t>(a, n, threads);
  } else {
    table.fill<std::uint64_t>(a, n, threads);
  }
  return table;
}

void FingerprintTable::probe(const Nat& target, std::uint64_t s, bool gcd_filter,
                             std::vector<std::uint32_t>& hits, ProbeStats* stats) const {
  const std::uint64_t key = fingerprint(target, width_);
  std::uint32_t s_mask = 0;
  if (gcd_filter) {
    for (std::size_t i = 0; i < primes_.size(); ++i)
      if (s % primes_[i] == 0) s_mask |= 1u << i;
  }
  const auto before = hits.size();
  ProbeStats local;
  local.probes = 1;

  std::visit(
      [&](const auto& rows) {
        using Key = typename std::decay_t<decltype(rows)>::value_type::key_type;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto& row = rows[i];
          if ((zero_masks_[i] & s_mask) != 0) {
            ++local.rows_skipped;
            local.entries_skipped += row.exponents.size();
            continue;
          }
          ++local.row_lookups;
          local.entries_searched += row.exponents.size();
          const auto [lo, hi] = std::equal_range(row.fingerprints.begin(),
                                                 row.fingerprints.end(), static_cast<Key>(key));
          for (auto it = lo; it != hi; ++it)
            hits.push_back(row.exponents[static_cast<std::size_t>(it - row.fingerprints.begin())]);
        }
      },
      rows_);

  std::sort(hits.begin() + static_cast<std::ptrdiff_t>(before), hits.end());
  local.matches = hits.size() - before;
  if (stats != nullptr) *stats += local;
}

std::vector<std::uint32_t> FingerprintTable::probe(const Nat& target, std::uint64_t s,
                                                   bool gcd_filter) const {
  std::vector<std::uint32_t> hits;
  probe(target, s, gcd_filter, hits);
  return hits;
}

}  // namespace wiener
