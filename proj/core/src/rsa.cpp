#include "wiener/rsa.hpp"

#include <array>

namespace wiener {

namespace {

constexpr std::array<unsigned, 12> kSmallBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
constexpr int kRandomRounds = 64;
constexpr std::uint64_t kWitnessSeed = 0x9e3779b97f4a7c15ULL;
constexpr int kMaxPrimeDraws = 1 << 16;
constexpr int kMaxKeyDraws = 64;
constexpr int kMaxExponentDraws = 1 << 12;

bool strong_probable_prime(const Nat& n, const Nat& n_minus_1, const Nat& odd,
                           unsigned long twos, const Nat& base) {
  Nat x = mod_pow(base, odd, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < twos; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

Nat random_bits(unsigned bits, std::mt19937_64& rng) {
  Nat out = 0;
  for (unsigned done = 0; done < bits; done += 64) {
    out <<= 64;
    const std::uint64_t word = rng();
    Nat limb;
    mpz_import(limb.get_mpz_t(), 1, 1, sizeof word, 0, 0, &word);
    out += limb;
  }
  const unsigned excess = (bits + 63) / 64 * 64 - bits;
  out >>= excess;
  return out;
}

Nat random_prime(unsigned bits, std::mt19937_64& rng) {
  const Nat top = Nat(1) << (bits - 1);
  for (int i = 0; i < kMaxPrimeDraws; ++i) {
    Nat candidate = random_bits(bits, rng) | top | 1;
    if (is_probable_prime(candidate)) return candidate;
  }
  throw GenerationError("no prime found within the draw budget");
}

}  // namespace

bool is_probable_prime(const Nat& n) {
  if (n < 2) return false;
  for (unsigned p : kSmallBases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const Nat n_minus_1 = n - 1;
  const unsigned long twos = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  const Nat odd = n_minus_1 >> twos;

  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    for (unsigned base : kSmallBases) {
      if (!strong_probable_prime(n, n_minus_1, odd, twos, Nat(base))) return false;
    }
    return true;
  }
  std::mt19937_64 rng(kWitnessSeed);
  const Nat span = n - 3;
  for (int i = 0; i < kRandomRounds; ++i) {
    const Nat base = random_below(span, rng) + 2;
    if (!strong_probable_prime(n, n_minus_1, odd, twos, base)) return false;
  }
  return true;
}

Nat random_below(const Nat& bound, std::mt19937_64& rng) {
  if (sgn(bound) <= 0) throw DomainError("random_below: bound must be positive");
  const auto bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    Nat x = random_bits(bits, rng);
    if (x < bound) return x;
  }
}

Nat scaled_fourth_root(const Nat& n, double factor) {
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2) + 128;
  mpf_class root(n, bits);
  root = sqrt(root);
  root = sqrt(root);
  root *= mpf_class(factor, bits);
  return Nat(floor(root));
}

double d_ratio_of(const Nat& d, const Nat& n) {
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2) + 128;
  mpf_class root(n, bits);
  root = sqrt(sqrt(root));
  mpf_class ratio(d, bits);
  ratio /= root;
  return ratio.get_d();
}

KeyPair keygen_weak(unsigned modulus_bits, double d_ratio, std::uint64_t seed,
                    DWindow window) {
  if (modulus_bits < 32 || modulus_bits % 2 != 0)
    throw DomainError("keygen_weak: modulus bits must be even and >= 32");
  if (!(d_ratio >= 1.0 / 256)) throw DomainError("keygen_weak: D must be >= 2^-8");
  if (!(window.lo >= 0 && window.lo < window.hi))
    throw DomainError("keygen_weak: empty d window");

  std::mt19937_64 rng(seed);
  const unsigned half = modulus_bits / 2;

  for (int attempt = 0; attempt < kMaxKeyDraws; ++attempt) {
    Nat p = random_prime(half, rng);
    Nat q = random_prime(half, rng);
    if (p == q) continue;
    if (q < p) swap(p, q);
    if (q >= 2 * p) continue;

    const Nat n = p * q;
    const Nat phi = (p - 1) * (q - 1);
    Nat lo = scaled_fourth_root(n, window.lo * d_ratio);
    if (lo < 3) lo = 3;
    const Nat hi = scaled_fourth_root(n, window.hi * d_ratio);
    if (hi < lo) continue;

    const Nat width = hi - lo + 1;
    for (int draw = 0; draw < kMaxExponentDraws; ++draw) {
      Nat d = lo + random_below(width, rng);
      if (mpz_even_p(d.get_mpz_t())) {
        if (d + 1 <= hi) {
          ++d;
        } else {
          --d;
        }
      }
      if (d < lo || mpz_even_p(d.get_mpz_t())) continue;
      Nat g;
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), phi.get_mpz_t());
      if (g != 1) continue;
      Nat e = mod_inv(d, phi);
      if (e >= n) continue;
      return {{n, std::move(e)}, {std::move(p), std::move(q), std::move(d), phi}};
    }
  }
  throw GenerationError("keygen_weak: constraints unsatisfiable at this bit size");
}

std::string_view to_string(RejectStage stage) {
  switch (stage) {
    case RejectStage::accepted: return "accepted";
    case RejectStage::inexact_phi: return "inexact-phi";
    case RejectStage::negative_sum: return "negative-sum";
    case RejectStage::non_square: return "non-square";
    case RejectStage::product_mismatch: return "product-mismatch";
  }
  return "unknown";
}

Factorization method1_factor(const PublicKey& pub, const Nat& d, const Nat& k) {
  if (k < 1) throw DomainError("method1_factor: k must be >= 1");
  Factorization out;
  const Nat numerator = d * pub.e - 1;
  if (sgn(numerator) < 0 || !mpz_divisible_p(numerator.get_mpz_t(), k.get_mpz_t())) {
    out.stage = RejectStage::inexact_phi;
    return out;
  }
  Nat phi;
  mpz_divexact(phi.get_mpz_t(), numerator.get_mpz_t(), k.get_mpz_t());

  const Nat sum = pub.n + 1 - phi;
  if (sgn(sum) < 0) {
    out.stage = RejectStage::negative_sum;
    return out;
  }
  const auto diff = exact_sqrt(sum * sum - 4 * pub.n);
  if (!diff) {
    out.stage = RejectStage::non_square;
    return out;
  }
  const Nat twice_p = sum - *diff;
  if (mpz_odd_p(twice_p.get_mpz_t())) {
    out.stage = RejectStage::product_mismatch;
    return out;
  }
  Nat p = twice_p / 2;
  Nat q = (sum + *diff) / 2;
  if (p <= 1 || p * q != pub.n) {
    out.stage = RejectStage::product_mismatch;
    return out;
  }
  out.stage = RejectStage::accepted;
  out.p = std::move(p);
  out.q = std::move(q);
  out.phi = std::move(phi);
  return out;
}

bool method2_check(const PublicKey& pub, const Nat& d) {
  if (pub.n < 2 || sgn(d) < 0) return false;
  return mod_pow(mod_pow(2, pub.e, pub.n), d, pub.n) == 2 % pub.n;
}

}  // namespace wiener
