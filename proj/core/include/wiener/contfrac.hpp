#pragma once

// Continued fractions of exact rationals, their convergents, and the
// Diophantine-approximation machinery the attacks are built on.
//
// Indexing follows the usual recurrence seeds: p_{-1}/q_{-1} = 1/0 and
// p_0/q_0 = a_0/1, so m = -1 is a valid convergent index.

#include "wiener/numeric.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wiener {

using Rational = mpq_class;

/// num/den in lowest terms. Throws DomainError when den == 0.
Rational make_rational(const Nat& num, const Nat& den);

/// Exact rational from a finite decimal string such as "2.122" or "0.4".
/// A "p/q" form is also accepted.
std::optional<Rational> parse_rational(std::string_view text);

class ContFrac {
 public:
  /// Canonical finite expansion (last quotient >= 2 unless the length is 1).
  static ContFrac expand(const Rational& x);

  std::span<const Nat> quotients() const noexcept { return quotients_; }

  /// Index of the last convergent, equal to quotients().size() - 1.
  int last() const noexcept { return static_cast<int>(quotients_.size()) - 1; }

  /// Partial quotient a_i; zero for i outside [0, last()].
  const Nat& a(int i) const noexcept;

  // Convergent numerator/denominator for -1 <= m <= last().
  const Nat& p(int m) const { return p_.at(static_cast<std::size_t>(m + 1)); }
  const Nat& q(int m) const { return q_.at(static_cast<std::size_t>(m + 1)); }

  Rational convergent(int m) const { return make_rational(p(m), q(m)); }

 private:
  std::vector<Nat> quotients_;
  std::vector<Nat> p_;  // p_[i] = p_{i-1}
  std::vector<Nat> q_;
};

enum class Sign { plus, minus };

/// A fraction (r p_{m+1} +- s p_m) / (r q_{m+1} +- s q_m).
struct WorleyCandidate {
  int m = -1;
  Nat r;
  Nat s;
  Sign sign = Sign::plus;
  Rational frac;
  bool satisfies = false;  // |x - frac| < c / den(frac)^2
};

/// Every fraction of the form above with r s < 2c and positive denominator,
/// deduplicated after reduction. Ordered by m, then r s, then r, plus before
/// minus. Any p/q with |x - p/q| < c/q^2 appears in the result.
std::vector<WorleyCandidate> worley_enumerate(const Rational& x, const Rational& c);

/// |x - p/q| < c/q^2, compared exactly.
bool within_worley_bound(const Rational& x, const Rational& frac, const Rational& c);

/// Largest odd m with p_m/q_m - target > bound, or nullopt when no odd
/// convergent clears the bound.
std::optional<int> locate_m_prime(const ContFrac& expansion, const Rational& target,
                                  const Rational& bound);
std::optional<int> locate_m_prime(const Rational& target, const Rational& bound);

struct RsBounds {
  double r_max = 0;
  double s_max = 0;
};

/// Bounds on r and s derived from the next three partial quotients
/// a_{m+1}, a_{m+2}, a_{m+3} and D = d / n^{1/4}.
RsBounds rs_bounds(const Nat& a_next, const Nat& a_next2, const Nat& a_next3, double d_ratio);

/// The quotient-free default: r, s < 4D.
RsBounds rs_bounds_fixed(double d_ratio);

}  // namespace wiener
