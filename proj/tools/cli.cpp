#include "cli.hpp"

#include "wiener/attack.hpp"
#include "wiener/bench.hpp"
#include "wiener/contfrac.hpp"
#include "wiener/keyfile.hpp"
#include "wiener/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace wiener::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeygenArgs {
  unsigned bits = 0;
  double d_ratio = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::vector<double> window;
};

struct CfArgs {
  std::string num;
  std::string den;
  std::string c;
};

struct AttackArgs {
  std::string key;
  std::string variant = "mitm";
  std::uint64_t r_max = 256;
  std::uint64_t s_max = 256;
  std::string bound_mode = "explicit";
  double d_ratio = 0;
  bool improved = false;
  bool gcd_rows = false;
  bool minus_form = false;
  bool cross_form = false;
  std::vector<int> indices;
  bool stats = false;
  unsigned threads = 1;
};

struct SuccessArgs {
  unsigned bits = 128;
  double d_ratio = 16;
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
  bool improved = false;
  bool plus_only = false;
  bool json = false;
  unsigned threads = 1;
};

struct BoundsArgs {
  std::vector<int> rows = {512, 768, 1024, 2048};
  bool json = false;
};

int do_keygen(const KeygenArgs& a, std::ostream& out) {
  DWindow window;
  if (!a.window.empty()) {
    if (a.window.size() != 2) throw UsageError("--d-window takes LO,HI");
    window = {a.window[0], a.window[1]};
  }
  const auto key = keygen_weak(a.bits, a.d_ratio, a.seed, window);
  if (a.output.empty()) {
    write_key(out, key.pub, &key.priv);
  } else {
    write_key(a.output, key.pub, &key.priv);
  }
  return kExitOk;
}

Nat parse_nat_arg(const std::string& text, const char* flag) {
  auto value = parse_decimal(text);
  if (!value) throw UsageError(std::string(flag) + " must be a nonnegative decimal integer");
  return *value;
}

int do_cf(const CfArgs& a, std::ostream& out) {
  const Nat num = parse_nat_arg(a.num, "--num");
  const Nat den = parse_nat_arg(a.den, "--den");
  if (den == 0) throw UsageError("--den must be positive");
  const Rational x = make_rational(num, den);
  const auto cf = ContFrac::expand(x);

  out << "quotients [";
  for (int i = 0; i <= cf.last(); ++i) out << (i == 0 ? "" : i == 1 ? ";" : ",") << cf.a(i);
  out << "]\n";
  out << "convergents\n";
  for (int m = 0; m <= cf.last(); ++m) out << m << ' ' << cf.p(m) << '/' << cf.q(m) << '\n';

  if (!a.c.empty()) {
    const auto c = parse_rational(a.c);
    if (!c || sgn(*c) <= 0) throw UsageError("--c must be a positive decimal or p/q");
    out << "worley c=" << c->get_num() << '/' << c->get_den() << '\n';
    for (const auto& cand : worley_enumerate(x, *c)) {
      out << "candidate m=" << cand.m << " r=" << cand.r << " s=" << cand.s
          << " sign=" << (cand.sign == Sign::plus ? '+' : '-') << " frac=" << cand.frac.get_num()
          << '/' << cand.frac.get_den() << " satisfies=" << (cand.satisfies ? "yes" : "no")
          << '\n';
    }
  }
  return kExitOk;
}

void print_stats(const AttackResult& result, std::ostream& err) {
  const auto& s = result.stats;
  const auto total = s.entries_searched + s.entries_skipped;
  err << "stats outcome=" << to_string(result.outcome)
      << " anchor=" << (result.anchor ? std::to_string(*result.anchor) : "none")
      << " slots=" << s.slots << " modmuls=" << s.modmuls << " modpows=" << s.modpows
      << " probes=" << s.probes << " rows_skipped=" << s.rows_skipped << " skip_fraction="
      << (total == 0 ? 0.0 : static_cast<double>(s.entries_skipped) / static_cast<double>(total))
      << " collisions=" << s.collisions << " method1_trials=" << s.method1_trials
      << " table_entries=" << s.table_entries << " table_bytes=" << s.table_bytes << '\n';
  if (result.origin) {
    err << "stats origin m=" << result.origin->m << " form=" << to_string(result.origin->form)
        << " r=" << result.origin->r << " s=" << result.origin->s << '\n';
  }
  const auto ms = std::chrono::duration<double, std::milli>(s.wall_time).count();
  err << "stats wall_time_ms=" << ms << '\n';
}

int do_attack(const AttackArgs& a, std::ostream& out, std::ostream& err) {
  KeyFile key;
  try {
    key = read_key(a.key);
  } catch (const KeyParseError& e) {
    throw UsageError(a.key + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }

  AttackConfig cfg;
  static const std::map<std::string, Variant> variants = {
      {"wiener", Variant::wiener}, {"vvt", Variant::vvt}, {"mitm", Variant::mitm}};
  static const std::map<std::string, BoundMode> modes = {
      {"fixed4d", BoundMode::fixed_4d},
      {"quotient", BoundMode::quotient},
      {"explicit", BoundMode::explicit_bounds}};
  cfg.variant = variants.at(a.variant);
  cfg.r_max = a.r_max;
  cfg.s_max = a.s_max;
  cfg.bound_mode = modes.at(a.bound_mode);
  cfg.d_ratio = a.d_ratio;
  cfg.approx = a.improved ? Approx::improved : Approx::plain;
  cfg.gcd_rows = a.gcd_rows;
  cfg.probe_minus_form = a.minus_form;
  cfg.probe_cross_form = a.cross_form;
  if (!a.indices.empty()) cfg.m_candidates = a.indices;
  cfg.threads = std::max(1u, a.threads);
  if (cfg.bound_mode != BoundMode::explicit_bounds && !(cfg.d_ratio > 0))
    throw UsageError("--bound-mode fixed4d|quotient needs --d-ratio");

  const auto result = run_attack(key.pub, cfg);
  if (a.stats) print_stats(result, err);
  if (result.outcome == Outcome::exhausted) {
    err << "no key recovered\n";
    return kExitExhausted;
  }
  if (result.d) write_field(out, "d", *result.d);
  if (result.k) write_field(out, "k", *result.k);
  write_field(out, "p", *result.p);
  write_field(out, "q", *result.q);
  return kExitOk;
}

int do_success(const SuccessArgs& a, std::ostream& out) {
  SuccessParams params;
  params.bits = a.bits;
  params.d_ratio = a.d_ratio;
  params.trials = a.trials;
  params.seed = a.seed;
  params.threads = std::max(1u, a.threads);
  params.approx = a.improved ? Approx::improved : Approx::plain;
  params.three_form = !a.plus_only;
  const auto rows = success_table(params);
  write_success_report(out, params, rows, a.json);
  return kExitOk;
}

int do_bounds(const BoundsArgs& a, std::ostream& out) {
  write_bound_report(out, bound_table(a.rows), a.json);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-private-exponent RSA cryptanalysis", "wiener"};
  app.set_version_flag("--version", std::string("wiener ") + kVersion);
  app.require_subcommand(1);

  KeygenArgs keygen_args;
  auto* keygen = app.add_subcommand("keygen", "Generate a deliberately weak RSA key");
  keygen->add_option("--bits", keygen_args.bits, "Modulus size in bits (even, >= 32)")->required();
  keygen->add_option("--d-ratio", keygen_args.d_ratio, "D = d / n^(1/4)")->required();
  keygen->add_option("--seed", keygen_args.seed, "Generator seed");
  keygen->add_option("-o,--output", keygen_args.output, "Key file (stdout when omitted)");
  keygen->add_option("--d-window", keygen_args.window, "Window for d as LO,HI multiples of D n^(1/4)")
      ->delimiter(',')
      ->expected(2);

  CfArgs cf_args;
  auto* cf = app.add_subcommand("cf", "Continued fraction of num/den");
  cf->add_option("--num", cf_args.num, "Numerator")->required();
  cf->add_option("--den", cf_args.den, "Denominator")->required();
  cf->add_option("--c", cf_args.c, "List candidates with |x - p/q| < c/q^2");

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "Recover d from a public key");
  attack->add_option("--key", attack_args.key, "Key file with at least n and e")->required();
  attack->add_option("--variant", attack_args.variant, "wiener | vvt | mitm")
      ->check(CLI::IsMember({"wiener", "vvt", "mitm"}));
  attack->add_option("--rmax", attack_args.r_max, "Bound on r (explicit mode)");
  attack->add_option("--smax", attack_args.s_max, "Bound on s (explicit mode)");
  attack->add_option("--bound-mode", attack_args.bound_mode, "fixed4d | quotient | explicit")
      ->check(CLI::IsMember({"fixed4d", "quotient", "explicit"}));
  attack->add_option("--d-ratio", attack_args.d_ratio, "Assumed D for derived bounds");
  attack->add_flag("--improved-approx", attack_args.improved, "Approximate k/d by e/(n+1-2 sqrt n)");
  attack->add_flag("--gcd-rows", attack_args.gcd_rows, "Skip table rows incompatible with gcd(r,s)=1");
  attack->add_flag("--minus-form", attack_args.minus_form, "Also probe d = r q_{m+1} - s q_m");
  attack->add_flag("--cross-form", attack_args.cross_form, "Also probe d = s q_{m+2} - r q_{m+1} at m'");
  attack->add_option("--m", attack_args.indices, "Explicit convergent indices")->delimiter(',');
  attack->add_flag("--stats", attack_args.stats, "Print search statistics to stderr");
  attack->add_option("--threads", attack_args.threads, "Worker threads");

  auto* bench = app.add_subcommand("bench", "Reproduce the success-rate and bound tables");
  bench->require_subcommand(1);
  SuccessArgs success_args;
  auto* success = bench->add_subcommand("success", "Success rate per (r, s) bound pair");
  success->add_option("--bits", success_args.bits, "Modulus size in bits");
  success->add_option("--d-ratio", success_args.d_ratio, "D");
  success->add_option("--trials", success_args.trials, "Keys per row");
  success->add_option("--seed", success_args.seed, "Seed");
  success->add_flag("--improved-approx", success_args.improved, "Use the improved approximation");
  success->add_flag("--plus-only", success_args.plus_only, "Probe only the plus form at m', m'+1, m'+2");
  success->add_flag("--json", success_args.json, "Machine-readable output");
  success->add_option("--threads", success_args.threads, "Worker threads");
  BoundsArgs bounds_args;
  auto* bounds = bench->add_subcommand("bounds", "Bound comparison table");
  bounds->add_option("--rows", bounds_args.rows, "Modulus sizes")->delimiter(',');
  bounds->add_flag("--json", bounds_args.json, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*keygen) return do_keygen(keygen_args, out);
    if (*cf) return do_cf(cf_args, out);
    if (*attack) return do_attack(attack_args, out, err);
    if (*success) return do_success(success_args, out);
    if (*bounds) return do_bounds(bounds_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace wiener::cli
