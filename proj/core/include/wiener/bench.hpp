#pragma once

// Desk-scale reproduction of the success-rate and bound-comparison tables.

#include "wiener/attack.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wiener {

/// A bound expressed as a multiple of D, e.g. {4, "4D"} or {0.5, "D/2"}.
struct BoundMultiple {
  double factor = 1;
  std::string label;
};

struct BoundPair {
  BoundMultiple r;
  BoundMultiple s;
};

/// The nine (r, s) bound rows, in table order.
const std::vector<BoundPair>& standard_bound_pairs();

struct SuccessRow {
  BoundPair bounds;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;

  double rate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

struct SuccessParams {
  unsigned bits = 128;
  double d_ratio = 16;
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  Approx approx = Approx::plain;
  // d uniform in (0, D n^{1/4}]: D is an upper bound for the trial keys.
  DWindow window{0.0, 1.0};
  bool three_form = true;
};

/// Seed of the i-th trial key (splitmix64 over seed and index).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Attack configuration used for one bound row.
AttackConfig success_config(const SuccessParams& params, const BoundPair& bounds);

/// Runs mitm_attack on `trials` keys for each bound pair. The same keys are
/// used for every row.
std::vector<SuccessRow> success_table(const SuccessParams& params,
                                      std::span<const BoundPair> rows);
std::vector<SuccessRow> success_table(const SuccessParams& params);

struct BoundRow {
  int log2n = 0;
  int mitm_bits = 0;  // round(30 + log2n / 4)
  int lll_bits = 0;   // round(0.292 log2n)

  friend bool operator==(const BoundRow&, const BoundRow&) = default;
};

BoundRow bound_row(int log2n);
std::vector<BoundRow> bound_table(std::span<const int> log2n);

void write_success_report(std::ostream& out, const SuccessParams& params,
                          std::span<const SuccessRow> rows, bool json);
void write_bound_report(std::ostream& out, std::span<const BoundRow> rows, bool json);

}  // namespace wiener
