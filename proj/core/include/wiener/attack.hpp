#pragma once

// Attacks on RSA keys with a small secret exponent d.
//
//   wiener_classic  d is the denominator of a convergent of e/n.
//   vvt_exhaustive  try every d = r q_{m+1} + s q_m with small coprime r, s.
//   mitm_attack     the same candidate set, tested through the congruence
//                   a^r = 2 b^s (mod n) with a = 2^{e q_{m+1}} and
//                   b = 2^{-e q_m}: a table over r and a probe stream over s.
//
// Both search engines run the Wiener pass first and confirm every hit by
// factoring n, so a `recovered` outcome is always a verified factorization.

#include "wiener/contfrac.hpp"
#include "wiener/mitm_table.hpp"
#include "wiener/rsa.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace wiener {

enum class Variant { wiener, vvt, mitm };
enum class BoundMode { fixed_4d, quotient, explicit_bounds };
enum class Approx { plain, improved };
enum class Outcome { recovered, exhausted, gcd_break };

// Candidate shapes around convergent index m:
//   plus   d = r q_{m+1} + s q_m
//   minus  d = r q_{m+1} - s q_m
//   cross  d = s q_{m+2} - r q_{m+1}
// k follows the same combination of the numerators p.
enum class Form { plus, minus, cross };

std::string_view to_string(Variant v);
std::string_view to_string(Outcome o);
std::string_view to_string(Form f);

struct AttackConfig {
  Variant variant = Variant::mitm;
  std::uint64_t r_max = 256;
  std::uint64_t s_max = 256;
  BoundMode bound_mode = BoundMode::explicit_bounds;
  double d_ratio = 0;  // D, used by fixed_4d and quotient modes
  std::uint64_t quotient_bound_cap = std::uint64_t{1} << 22;
  Approx approx = Approx::plain;
  bool gcd_rows = false;
  bool probe_minus_form = false;
  // Probe the cross form at the anchor index m' only (or at every index when
  // there is no anchor). Together with the plus form at m' and m'+2 this is
  // the three-form search around m'.
  bool probe_cross_form = false;
  std::optional<std::vector<int>> m_candidates;  // default {m', m'+1, m'+2}
  std::vector<unsigned> row_primes = {2, 3, 5};
  unsigned threads = 1;
};

struct AttackStats {
  std::uint64_t modmuls = 0;  // incremental modular multiplications
  std::uint64_t modpows = 0;  // setup exponentiations and inversions
  std::uint64_t probes = 0;   // table row lookups
  std::uint64_t rows_skipped = 0;
  std::uint64_t entries_searched = 0;
  std::uint64_t entries_skipped = 0;
  std::uint64_t collisions = 0;  // fingerprint hits that failed confirmation
  std::uint64_t method1_trials = 0;
  std::uint64_t slots = 0;  // (m, bounds) blocks searched
  std::uint64_t table_entries = 0;  // largest table built
  std::uint64_t table_bytes = 0;
  std::chrono::nanoseconds wall_time{0};

  AttackStats& operator+=(const AttackStats& other) noexcept;
};

struct CandidateOrigin {
  int m = -1;
  Form form = Form::plus;
  std::uint64_t r = 0;
  std::uint64_t s = 0;
};

struct AttackResult {
  Outcome outcome = Outcome::exhausted;
  std::optional<Nat> d;
  std::optional<Nat> k;
  std::optional<Nat> p;
  std::optional<Nat> q;
  std::optional<CandidateOrigin> origin;  // unset for Wiener and gcd breaks
  std::optional<int> anchor;              // m' of the search, when located
  AttackStats stats;

  bool recovered() const noexcept { return outcome == Outcome::recovered; }
};

struct ApproxTarget {
  Rational target;
  Rational bound;  // over-estimates the true error bound
};

/// plain:    e/n,                    2.122 e / (n sqrt n)
/// improved: e/(n + 1 - 2 sqrt n),   0.1221 e / (n sqrt n)
/// sqrt n is rounded down in the bound and 2 sqrt n rounded up in the target.
ApproxTarget approximation_target(const PublicKey& pub, Approx mode);

struct SearchSlot {
  int m = -1;
  std::uint64_t r_max = 0;
  std::uint64_t s_max = 0;
  bool plus = true;
  bool minus = false;
  bool cross = false;
};

struct SearchPlan {
  ApproxTarget target;
  ContFrac expansion;
  std::optional<int> anchor;
  std::vector<SearchSlot> slots;
};

/// Resolves the index set and per-index bounds. Indices without the
/// convergents a form needs are dropped.
SearchPlan make_plan(const PublicKey& pub, const AttackConfig& cfg);

/// (d, k) for the candidate (m, form, r, s) over the given expansion.
std::pair<Nat, Nat> candidate_exponents(const ContFrac& cf, int m, Form form, const Nat& r,
                                        const Nat& s);

AttackResult wiener_classic(const PublicKey& pub);
AttackResult vvt_exhaustive(const PublicKey& pub, const AttackConfig& cfg);
AttackResult mitm_attack(const PublicKey& pub, const AttackConfig& cfg);

/// Dispatches on cfg.variant.
AttackResult run_attack(const PublicKey& pub, const AttackConfig& cfg);

/// Same outcome and recovered material; statistics are ignored.
bool same_recovery(const AttackResult& lhs, const AttackResult& rhs);

}  // namespace wiener
