#pragma once

// Slow, obviously-correct reference computations for the tests. Nothing in
// here calls into the library's continued-fraction or attack code.

#include "wiener/numeric.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace wiener::oracle {

/// base^exp mod m by exp repeated multiplications.
inline std::uint64_t naive_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  for (std::uint64_t i = 0; i < exp; ++i) acc = static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(acc) * (base % m) % m);
  return acc;
}

/// Right-to-left square-and-multiply on mpz values, without mpz_powm.
inline mpz_class square_and_multiply(mpz_class base, mpz_class exp, const mpz_class& m) {
  mpz_class acc = 1;
  base %= m;
  while (exp > 0) {
    if (mpz_odd_p(exp.get_mpz_t())) acc = acc * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return acc % m;
}

/// Partial quotients of num/den (num >= 0, den > 0) by Euclid.
inline std::vector<long long> euclid_quotients(long long num, long long den) {
  std::vector<long long> out;
  while (den != 0) {
    out.push_back(num / den);
    const long long r = num % den;
    num = den;
    den = r;
  }
  return out;
}

/// All reduced p/q with 1 <= q <= q_max and |x - p/q| < c/q^2, exact.
inline std::set<std::pair<mpz_class, mpz_class>> brute_force_satisfiers(const mpq_class& x,
                                                                        const mpq_class& c,
                                                                        long q_max) {
  std::set<std::pair<mpz_class, mpz_class>> out;
  for (long q = 1; q <= q_max; ++q) {
    // |x q - p| < c / q, so p lies within c/q + 1 of x q.
    const mpq_class center = x * q;
    const mpq_class radius = c / q;
    mpz_class lo, hi;
    const mpq_class lo_q = center - radius - 1;
    const mpq_class hi_q = center + radius + 1;
    mpz_fdiv_q(lo.get_mpz_t(), lo_q.get_num_mpz_t(), lo_q.get_den_mpz_t());
    mpz_cdiv_q(hi.get_mpz_t(), hi_q.get_num_mpz_t(), hi_q.get_den_mpz_t());
    for (mpz_class p = lo; p <= hi; ++p) {
      mpz_class g;
      mpz_class qq = q;
      mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), qq.get_mpz_t());
      if (g != 1) continue;
      const mpq_class diff = abs(x - mpq_class(p, qq));
      if (diff * q * q < c) out.emplace(p, qq);
    }
  }
  return out;
}

/// Convergents p_m/q_m for m = -1..L of num/den, from the quotient list.
struct Convergents {
  std::vector<mpz_class> p, q;  // index m + 1
};

inline Convergents convergents_of(const mpz_class& num, const mpz_class& den) {
  Convergents c;
  c.p = {1};
  c.q = {0};
  mpz_class pp = 0, qp = 1;
  mpz_class a = num, b = den;
  while (b != 0) {
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class p = quot * c.p.back() + pp;
    mpz_class q = quot * c.q.back() + qp;
    pp = c.p.back();
    qp = c.q.back();
    c.p.push_back(p);
    c.q.push_back(q);
    a = b;
    b = rem;
  }
  return c;
}

/// Largest odd m with p_m/q_m - target > bound, by scanning every index.
inline std::optional<int> scan_m_prime(const mpq_class& target, const mpq_class& bound) {
  const auto c = convergents_of(target.get_num(), target.get_den());
  std::optional<int> best;
  for (std::size_t i = 1; i < c.p.size(); ++i) {
    const int m = static_cast<int>(i) - 1;
    if (m % 2 == 0) continue;
    if (mpq_class(c.p[i], c.q[i]) - target > bound) best = m;
  }
  return best;
}

/// Index m with k/d = p_m/q_m, if any.
inline std::optional<int> convergent_index(const mpq_class& x, const mpz_class& k,
                                           const mpz_class& d) {
  const auto c = convergents_of(x.get_num(), x.get_den());
  const mpq_class kd(k, d);
  for (std::size_t i = 1; i < c.p.size(); ++i) {
    if (mpq_class(c.p[i], c.q[i]) == kd) return static_cast<int>(i) - 1;
  }
  return std::nullopt;
}

/// Solve r q_{m+1} + s q_m = d, r p_{m+1} + s p_m = k for the expansion of x
/// (signed solution of the unimodular system).
inline std::pair<mpz_class, mpz_class> closed_form_rs(const mpq_class& x, int m,
                                                      const mpz_class& d, const mpz_class& k) {
  const auto c = convergents_of(x.get_num(), x.get_den());
  const auto& pm = c.p[static_cast<std::size_t>(m + 1)];
  const auto& qm = c.q[static_cast<std::size_t>(m + 1)];
  const auto& p1 = c.p[static_cast<std::size_t>(m + 2)];
  const auto& q1 = c.q[static_cast<std::size_t>(m + 2)];
  const mpz_class det = p1 * qm - pm * q1;  // +-1
  return {(d * pm - k * qm) * -det, (k * q1 - d * p1) * -det};
}

}  // namespace wiener::oracle
