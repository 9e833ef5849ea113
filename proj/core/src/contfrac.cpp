#include "wiener/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace wiener {

Rational make_rational(const Nat& num, const Nat& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return make_rational(*num, *den);
  }
  const auto dot = text.find('.');
  std::string digits(text.substr(0, dot));
  std::size_t frac_len = 0;
  if (dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.empty()) return std::nullopt;
    digits += frac;
    frac_len = frac.size();
    if (dot == 0) digits.insert(digits.begin(), '0');
  }
  auto value = parse_decimal(digits);
  if (!value) return std::nullopt;
  Nat scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_len);
  return make_rational(*value, scale);
}

ContFrac ContFrac::expand(const Rational& x) {
  ContFrac cf;
  Nat num = x.get_num();
  Nat den = x.get_den();
  cf.p_ = {Nat(1)};
  cf.q_ = {Nat(0)};
  Nat p_prev2 = 0, q_prev2 = 1;  // p_{-2}, q_{-2}
  while (den != 0) {
    Nat a, rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Nat p = a * cf.p_.back() + p_prev2;
    Nat q = a * cf.q_.back() + q_prev2;
    p_prev2 = cf.p_.back();
    q_prev2 = cf.q_.back();
    cf.p_.push_back(std::move(p));
    cf.q_.push_back(std::move(q));
    cf.quotients_.push_back(std::move(a));
    num = std::move(den);
    den = std::move(rem);
  }
  return cf;
}

const Nat& ContFrac::a(int i) const noexcept {
  static const Nat zero = 0;
  if (i < 0 || i > last()) return zero;
  return quotients_[static_cast<std::size_t>(i)];
}

bool within_worley_bound(const Rational& x, const Rational& frac, const Rational& c) {
  const Nat& q = frac.get_den();
  Rational err = abs(x - frac);
  return err * q * q < c;
}

std::vector<WorleyCandidate> worley_enumerate(const Rational& x, const Rational& c) {
  if (sgn(c) <= 0) throw DomainError("worley_enumerate: c must be positive");
  const ContFrac cf = ContFrac::expand(x);
  const Rational two_c = 2 * c;

  std::vector<WorleyCandidate> out;
  std::set<std::pair<Nat, Nat>> seen;

  auto emit = [&](int m, const Nat& r, const Nat& s, Sign sign) {
    const int sg = sign == Sign::plus ? 1 : -1;
    Nat num = r * cf.p(m + 1) + sg * s * cf.p(m);
    Nat den = r * cf.q(m + 1) + sg * s * cf.q(m);
    if (sgn(den) <= 0) return;
    Rational frac = make_rational(num, den);
    if (!seen.emplace(frac.get_num(), frac.get_den()).second) return;
    const bool ok = within_worley_bound(x, frac, c);
    out.push_back({m, r, s, sign, std::move(frac), ok});
  };

  for (int m = -1; m < cf.last(); ++m) {
    // r = 0 or s = 0 reduces to a plain convergent for every multiplier.
    emit(m, 0, 1, Sign::plus);
    emit(m, 1, 0, Sign::plus);

    // Pairs with r, s >= 1 and r s < 2c, in increasing r s.
    std::vector<std::pair<Nat, Nat>> pairs;
    for (Nat r = 1; r < two_c; ++r) {
      for (Nat s = 1; r * s < two_c; ++s) pairs.emplace_back(r, s);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& lhs, const auto& rhs) {
      const Nat a = lhs.first * lhs.second;
      const Nat b = rhs.first * rhs.second;
      return a != b ? a < b : lhs.first < rhs.first;
    });
    for (const auto& [r, s] : pairs) {
      emit(m, r, s, Sign::plus);
      emit(m, r, s, Sign::minus);
    }
  }
  return out;
}

std::optional<int> locate_m_prime(const ContFrac& expansion, const Rational& target,
                                  const Rational& bound) {
  // For odd m the gap p_m/q_m - target is positive and shrinks as m grows,
  // so the indices clearing the bound form a prefix of the odd indices.
  auto clears = [&](int m) { return expansion.convergent(m) - target > bound; };
  const int odd_count = (expansion.last() + 1) / 2;  // odd m in [1, last]
  int lo = 0, hi = odd_count;                         // count of clearing odds
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (clears(2 * mid - 1)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (lo == 0) return std::nullopt;
  return 2 * lo - 1;
}

std::optional<int> locate_m_prime(const Rational& target, const Rational& bound) {
  return locate_m_prime(ContFrac::expand(target), target, bound);
}

RsBounds rs_bounds(const Nat& a_next, const Nat& a_next2, const Nat& a_next3, double d_ratio) {
  if (d_ratio < 0) throw DomainError("rs_bounds: D must be nonnegative");
  constexpr double kGap = 2.122;
  const double a1 = a_next.get_d();
  const double a2 = a_next2.get_d();
  const double a3 = a_next3.get_d();
  const double root3 = std::sqrt(kGap * (a3 + 2));
  const double root2 = std::sqrt(kGap * (a2 + 2));
  return {std::max(root3 * (a2 + 1) * d_ratio, root2 * d_ratio),
          std::max(2 * root3 * d_ratio, root2 * (a1 + 1) * d_ratio)};
}

RsBounds rs_bounds_fixed(double d_ratio) { return {4 * d_ratio, 4 * d_ratio}; }

}  // namespace wiener
