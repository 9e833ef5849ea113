#include "wiener/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace wiener {

namespace {

using Clock = std::chrono::steady_clock;

struct Hit {
  Nat d;
  Nat k;
  Factorization factors;
  std::optional<CandidateOrigin> origin;
};

std::optional<Hit> confirm(const PublicKey& pub, const Nat& d, const Nat& k,
                           AttackStats& stats) {
  if (sgn(d) <= 0 || k < 1) return std::nullopt;
  ++stats.method1_trials;
  auto factors = method1_factor(pub, d, k);
  if (!factors.accepted()) return std::nullopt;
  return Hit{d, k, std::move(factors), std::nullopt};
}

AttackResult make_recovered(Hit hit, AttackStats stats) {
  AttackResult out;
  out.outcome = Outcome::recovered;
  out.d = std::move(hit.d);
  out.k = std::move(hit.k);
  out.p = std::move(hit.factors.p);
  out.q = std::move(hit.factors.q);
  out.origin = hit.origin;
  out.stats = stats;
  return out;
}

// A non-trivial gcd with n exposes the factorization directly.
AttackResult make_gcd_break(const PublicKey& pub, const Nat& g, AttackStats stats) {
  AttackResult out;
  out.stats = stats;
  if (g <= 1 || g >= pub.n) return out;
  out.outcome = Outcome::gcd_break;
  Nat p = g;
  Nat q = pub.n / g;
  if (q < p) swap(p, q);
  const Nat phi = (p - 1) * (q - 1);
  try {
    Nat d = mod_inv(pub.e, phi);
    out.k = (d * pub.e - 1) / phi;
    out.d = std::move(d);
  } catch (const NotInvertible&) {
  } catch (const DomainError&) {
  }
  out.p = std::move(p);
  out.q = std::move(q);
  return out;
}

struct FormCoefficients {
  Nat d_per_s, d_per_r, k_per_s, k_per_r;
};

// d = s * d_per_s + r * d_per_r, and likewise for k.
FormCoefficients coefficients(const ContFrac& cf, int m, Form form) {
  switch (form) {
    case Form::plus:
      return {cf.q(m), cf.q(m + 1), cf.p(m), cf.p(m + 1)};
    case Form::minus:
      return {-cf.q(m), cf.q(m + 1), -cf.p(m), cf.p(m + 1)};
    case Form::cross:
      return {cf.q(m + 2), -cf.q(m + 1), cf.p(m + 2), -cf.p(m + 1)};
  }
  return {};
}

std::vector<Form> active_forms(const SearchSlot& slot) {
  std::vector<Form> forms;
  if (slot.plus) forms.push_back(Form::plus);
  if (slot.minus) forms.push_back(Form::minus);
  if (slot.cross) forms.push_back(Form::cross);
  return forms;
}

std::uint64_t checked_bound(double value, std::uint64_t cap) {
  if (!(value >= 1)) return 1;
  const double rounded = std::ceil(value);
  if (rounded >= static_cast<double>(cap)) return cap;
  return static_cast<std::uint64_t>(rounded);
}

void finish(AttackResult& result, Clock::time_point start) {
  result.stats.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
}

// Exhaustive scan of one slot for s in [s_lo, s_hi].
std::optional<Hit> scan_slot(const PublicKey& pub, const ContFrac& cf, const SearchSlot& slot,
                             std::uint64_t s_lo, std::uint64_t s_hi, AttackStats& stats,
                             const std::atomic<std::uint64_t>* stop_below) {
  const auto forms = active_forms(slot);
  std::vector<FormCoefficients> coeffs;
  std::vector<Nat> ed_step;
  for (Form f : forms) {
    coeffs.push_back(coefficients(cf, slot.m, f));
    ed_step.push_back(pub.e * coeffs.back().d_per_r);
  }

  Nat d, k, ed_minus_1;
  for (std::uint64_t s = s_lo; s <= s_hi; ++s) {
    if (stop_below != nullptr && stop_below->load(std::memory_order_relaxed) < s_lo) break;
    for (std::size_t fi = 0; fi < forms.size(); ++fi) {
      const auto& c = coeffs[fi];
      d = c.d_per_s * s;
      k = c.k_per_s * s;
      ed_minus_1 = pub.e * d - 1;
      for (std::uint64_t r = 0; r <= slot.r_max; ++r) {
        if (r > 0) {
          d += c.d_per_r;
          k += c.k_per_r;
          ed_minus_1 += ed_step[fi];
        }
        if (binary_gcd(r, s) != 1) continue;
        if (sgn(d) <= 0 || k < 1) continue;
        ++stats.method1_trials;
        if (!mpz_divisible_p(ed_minus_1.get_mpz_t(), k.get_mpz_t())) continue;
        auto factors = method1_factor(pub, d, k);
        if (factors.accepted())
          return Hit{d, k, std::move(factors), CandidateOrigin{slot.m, forms[fi], r, s}};
      }
    }
  }
  return std::nullopt;
}

std::optional<Hit> vvt_slot(const PublicKey& pub, const ContFrac& cf, const SearchSlot& slot,
                            unsigned threads, AttackStats& stats) {
  const std::uint64_t count = slot.s_max + 1;
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, count));
  if (threads == 1) return scan_slot(pub, cf, slot, 0, slot.s_max, stats, nullptr);

  // Chunks of s; the lowest chunk with a hit wins, so output matches the
  // single-threaded order.
  std::vector<std::optional<Hit>> hits(threads);
  std::vector<AttackStats> local(threads);
  std::atomic<std::uint64_t> best_lo{std::numeric_limits<std::uint64_t>::max()};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::uint64_t lo = count * t / threads;
        const std::uint64_t hi = count * (t + 1) / threads - 1;
        hits[t] = scan_slot(pub, cf, slot, lo, hi, local[t], &best_lo);
        if (hits[t]) {
          std::uint64_t cur = best_lo.load();
          while (lo < cur && !best_lo.compare_exchange_weak(cur, lo)) {
          }
        }
      });
    }
  }
  for (const auto& s : local) stats += s;
  for (auto& h : hits)
    if (h) return std::move(h);
  return std::nullopt;
}

std::optional<Hit> mitm_slot(const PublicKey& pub, const ContFrac& cf, const SearchSlot& slot,
                             const AttackConfig& cfg, AttackStats& stats) {
  const Nat& n = pub.n;
  const Nat two = 2;

  // Plain convergents (r = 0 or s = 0) are not in the table.
  std::vector<int> boundary = {slot.m, slot.m + 1};
  if (slot.cross) boundary.push_back(slot.m + 2);
  for (int idx : boundary) {
    if (idx < 0 || idx > cf.last()) continue;
    if (auto hit = confirm(pub, cf.q(idx), cf.p(idx), stats)) return hit;
  }

  const Nat a = mod_pow(two, pub.e * cf.q(slot.m + 1), n);
  ++stats.modpows;
  const auto width = fingerprint_width(slot.r_max, slot.s_max);
  const auto table = FingerprintTable::build(a, n, static_cast<std::uint32_t>(slot.r_max),
                                             cfg.row_primes, width, cfg.threads);
  stats.modmuls += table.modmuls();
  stats.modpows += table.setup_powers();
  stats.table_entries = std::max<std::uint64_t>(stats.table_entries, table.entries());
  stats.table_bytes = std::max<std::uint64_t>(stats.table_bytes, table.bytes());

  struct Stream {
    Form form;
    Nat step;
    Nat value;
  };
  std::vector<Stream> streams;
  const Nat lower = mod_pow(two, pub.e * cf.q(slot.m), n);
  ++stats.modpows;
  if (slot.plus) {
    Nat b = mod_inv(lower, n);
    ++stats.modpows;
    Nat start = two * b % n;
    streams.push_back({Form::plus, std::move(b), std::move(start)});
  }
  if (slot.minus) streams.push_back({Form::minus, lower, two * lower % n});
  if (slot.cross) {
    Nat g = mod_pow(two, pub.e * cf.q(slot.m + 2), n);
    const Nat half = mod_inv(two, n);
    stats.modpows += 2;
    Nat start = half * g % n;
    streams.push_back({Form::cross, std::move(g), std::move(start)});
  }

  ProbeStats probe_stats;
  std::vector<std::uint32_t> hits;
  std::optional<Hit> found;
  for (std::uint64_t s = 1; s <= slot.s_max && !found; ++s) {
    for (auto& stream : streams) {
      hits.clear();
      table.probe(stream.value, s, cfg.gcd_rows, hits, &probe_stats);
      for (std::uint32_t r : hits) {
        if (binary_gcd(r, s) == 1) {
          auto [d, k] = candidate_exponents(cf, slot.m, stream.form, Nat(r), Nat(s));
          if (auto hit = confirm(pub, d, k, stats)) {
            hit->origin = CandidateOrigin{slot.m, stream.form, r, s};
            found = std::move(hit);
            break;
          }
        }
        ++stats.collisions;
      }
      if (found) break;
    }
    if (found || s == slot.s_max) break;
    for (auto& stream : streams) {
      mpz_mul(stream.value.get_mpz_t(), stream.value.get_mpz_t(), stream.step.get_mpz_t());
      mpz_tdiv_r(stream.value.get_mpz_t(), stream.value.get_mpz_t(), n.get_mpz_t());
      ++stats.modmuls;
    }
  }
  stats.probes += probe_stats.row_lookups;
  stats.rows_skipped += probe_stats.rows_skipped;
  stats.entries_searched += probe_stats.entries_searched;
  stats.entries_skipped += probe_stats.entries_skipped;
  return found;
}

template <typename SlotSearch>
AttackResult run_search(const PublicKey& pub, const AttackConfig& cfg, SlotSearch&& search) {
  const auto start = Clock::now();
  AttackResult result = wiener_classic(pub);
  if (result.recovered()) {
    finish(result, start);
    return result;
  }
  AttackStats stats = result.stats;
  const SearchPlan plan = make_plan(pub, cfg);
  try {
    for (const auto& slot : plan.slots) {
      ++stats.slots;
      if (auto hit = search(plan.expansion, slot, stats)) {
        result = make_recovered(std::move(*hit), stats);
        result.anchor = plan.anchor;
        finish(result, start);
        return result;
      }
    }
  } catch (const NotInvertible& err) {
    result = make_gcd_break(pub, err.gcd(), stats);
    result.anchor = plan.anchor;
    finish(result, start);
    return result;
  }
  result = AttackResult{};
  result.stats = stats;
  result.anchor = plan.anchor;
  finish(result, start);
  return result;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::wiener: return "wiener";
    case Variant::vvt: return "vvt";
    case Variant::mitm: return "mitm";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::recovered: return "recovered";
    case Outcome::exhausted: return "exhausted";
    case Outcome::gcd_break: return "gcd-break";
  }
  return "unknown";
}

std::string_view to_string(Form f) {
  switch (f) {
    case Form::plus: return "plus";
    case Form::minus: return "minus";
    case Form::cross: return "cross";
  }
  return "unknown";
}

AttackStats& AttackStats::operator+=(const AttackStats& other) noexcept {
  modmuls += other.modmuls;
  modpows += other.modpows;
  probes += other.probes;
  rows_skipped += other.rows_skipped;
  entries_searched += other.entries_searched;
  entries_skipped += other.entries_skipped;
  collisions += other.collisions;
  method1_trials += other.method1_trials;
  slots += other.slots;
  table_entries = std::max(table_entries, other.table_entries);
  table_bytes = std::max(table_bytes, other.table_bytes);
  wall_time += other.wall_time;
  return *this;
}

ApproxTarget approximation_target(const PublicKey& pub, Approx mode) {
  if (pub.n < 2) throw DomainError("approximation_target: n must be >= 2");
  const Nat root = isqrt(pub.n);
  const Nat scaled = pub.n * root;
  if (mode == Approx::plain) {
    return {make_rational(pub.e, pub.n), make_rational(2122 * pub.e, 1000 * scaled)};
  }
  const Nat twice_root = isqrt_ceil(4 * pub.n);
  const Nat den = pub.n + 1 - twice_root;
  if (sgn(den) <= 0) throw DomainError("approximation_target: modulus too small");
  return {make_rational(pub.e, den), make_rational(1221 * pub.e, 10000 * scaled)};
}

SearchPlan make_plan(const PublicKey& pub, const AttackConfig& cfg) {
  SearchPlan plan{approximation_target(pub, cfg.approx), {}, std::nullopt, {}};
  plan.expansion = ContFrac::expand(plan.target.target);
  plan.anchor = locate_m_prime(plan.expansion, plan.target.target, plan.target.bound);
  const ContFrac& cf = plan.expansion;
  const int last = cf.last();

  std::vector<int> indices;
  if (cfg.m_candidates) {
    indices = *cfg.m_candidates;
  } else if (plan.anchor) {
    indices = {*plan.anchor, *plan.anchor + 1, *plan.anchor + 2};
  } else {
    for (int m = -1; m < last; ++m) indices.push_back(m);
  }

  if (cfg.bound_mode != BoundMode::explicit_bounds && !(cfg.d_ratio > 0))
    throw DomainError("bound mode needs a positive D");

  std::vector<int> used;
  for (int m : indices) {
    if (m < -1 || m + 1 > last) continue;
    if (std::find(used.begin(), used.end(), m) != used.end()) continue;
    used.push_back(m);

    SearchSlot slot;
    slot.m = m;
    switch (cfg.bound_mode) {
      case BoundMode::explicit_bounds:
        slot.r_max = cfg.r_max;
        slot.s_max = cfg.s_max;
        break;
      case BoundMode::fixed_4d: {
        const auto b = rs_bounds_fixed(cfg.d_ratio);
        slot.r_max = checked_bound(b.r_max, cfg.quotient_bound_cap);
        slot.s_max = checked_bound(b.s_max, cfg.quotient_bound_cap);
        break;
      }
      case BoundMode::quotient: {
        auto quotient = [&](int i) { return cf.a(i) < 1 ? Nat(1) : cf.a(i); };
        const auto b = rs_bounds(quotient(m + 1), quotient(m + 2), quotient(m + 3), cfg.d_ratio);
        slot.r_max = checked_bound(b.r_max, cfg.quotient_bound_cap);
        slot.s_max = checked_bound(b.s_max, cfg.quotient_bound_cap);
        break;
      }
    }
    if (slot.r_max < 1 || slot.s_max < 1) throw DomainError("r_max and s_max must be >= 1");
    if (slot.r_max > std::numeric_limits<std::uint32_t>::max())
      throw DomainError("r_max exceeds the table index range");
    slot.minus = cfg.probe_minus_form;
    slot.cross = cfg.probe_cross_form && m + 2 <= last && (!plan.anchor || m == *plan.anchor);
    plan.slots.push_back(slot);
  }
  return plan;
}

std::pair<Nat, Nat> candidate_exponents(const ContFrac& cf, int m, Form form, const Nat& r,
                                        const Nat& s) {
  const auto c = coefficients(cf, m, form);
  return {s * c.d_per_s + r * c.d_per_r, s * c.k_per_s + r * c.k_per_r};
}

AttackResult wiener_classic(const PublicKey& pub) {
  const auto start = Clock::now();
  AttackResult result;
  const ContFrac cf = ContFrac::expand(make_rational(pub.e, pub.n));
  for (int m = 0; m <= cf.last(); ++m) {
    if (cf.p(m) < 1) continue;
    if (auto hit = confirm(pub, cf.q(m), cf.p(m), result.stats)) {
      result = make_recovered(std::move(*hit), result.stats);
      break;
    }
  }
  finish(result, start);
  return result;
}

AttackResult vvt_exhaustive(const PublicKey& pub, const AttackConfig& cfg) {
  return run_search(pub, cfg, [&](const ContFrac& cf, const SearchSlot& slot, AttackStats& stats) {
    return vvt_slot(pub, cf, slot, cfg.threads, stats);
  });
}

AttackResult mitm_attack(const PublicKey& pub, const AttackConfig& cfg) {
  return run_search(pub, cfg, [&](const ContFrac& cf, const SearchSlot& slot, AttackStats& stats) {
    return mitm_slot(pub, cf, slot, cfg, stats);
  });
}

AttackResult run_attack(const PublicKey& pub, const AttackConfig& cfg) {
  switch (cfg.variant) {
    case Variant::wiener: return wiener_classic(pub);
    case Variant::vvt: return vvt_exhaustive(pub, cfg);
    case Variant::mitm: return mitm_attack(pub, cfg);
  }
  return {};
}

bool same_recovery(const AttackResult& lhs, const AttackResult& rhs) {
  return lhs.outcome == rhs.outcome && lhs.d == rhs.d && lhs.k == rhs.k && lhs.p == rhs.p &&
         lhs.q == rhs.q;
}

}  // namespace wiener
