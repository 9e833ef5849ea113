#include "wiener/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

namespace wiener {

const std::vector<BoundPair>& standard_bound_pairs() {
  static const std::vector<BoundPair> rows = {
      {{4, "4D"}, {4, "4D"}},     {{2, "2D"}, {2, "2D"}},   {{1, "D"}, {1, "D"}},
      {{1, "D"}, {4, "4D"}},      {{4, "4D"}, {1, "D"}},    {{0.5, "D/2"}, {2, "2D"}},
      {{2, "2D"}, {0.5, "D/2"}},  {{0.25, "D/4"}, {4, "4D"}}, {{4, "4D"}, {0.25, "D/4"}},
  };
  return rows;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AttackConfig success_config(const SuccessParams& params, const BoundPair& bounds) {
  auto bound = [&](double factor) {
    const double value = std::floor(factor * params.d_ratio);
    return value < 1 ? std::uint64_t{1} : static_cast<std::uint64_t>(value);
  };
  AttackConfig cfg;
  cfg.variant = Variant::mitm;
  cfg.bound_mode = BoundMode::explicit_bounds;
  cfg.r_max = bound(bounds.r.factor);
  cfg.s_max = bound(bounds.s.factor);
  cfg.approx = params.approx;
  cfg.probe_cross_form = params.three_form;
  return cfg;
}

std::vector<SuccessRow> success_table(const SuccessParams& params,
                                      std::span<const BoundPair> rows) {
  if (params.trials < 1) throw DomainError("success_table: trials must be >= 1");
  std::vector<AttackConfig> configs;
  for (const auto& row : rows) configs.push_back(success_config(params, row));

  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(params.threads, 1, params.trials));
  std::vector<std::vector<std::uint64_t>> counts(threads,
                                                 std::vector<std::uint64_t>(rows.size(), 0));
  auto work = [&](unsigned t) {
    for (std::uint64_t i = t; i < params.trials; i += threads) {
      const auto key = keygen_weak(params.bits, params.d_ratio, trial_seed(params.seed, i),
                                   params.window);
      for (std::size_t j = 0; j < configs.size(); ++j) {
        if (mitm_attack(key.pub, configs[j]).recovered()) ++counts[t][j];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  std::vector<SuccessRow> out;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    SuccessRow row{rows[j], params.trials, 0};
    for (const auto& c : counts) row.successes += c[j];
    out.push_back(row);
  }
  return out;
}

std::vector<SuccessRow> success_table(const SuccessParams& params) {
  return success_table(params, standard_bound_pairs());
}

BoundRow bound_row(int log2n) {
  const double bits = log2n;
  return {log2n, static_cast<int>(std::lround(30 + 0.25 * bits)),
          static_cast<int>(std::lround(0.292 * bits))};
}

std::vector<BoundRow> bound_table(std::span<const int> log2n) {
  std::vector<BoundRow> out;
  for (int bits : log2n) out.push_back(bound_row(bits));
  return out;
}

void write_success_report(std::ostream& out, const SuccessParams& params,
                          std::span<const SuccessRow> rows, bool json) {
  const char* approx = params.approx == Approx::plain ? "plain" : "improved";
  if (json) {
    nlohmann::json doc;
    doc["bits"] = params.bits;
    doc["d_ratio"] = params.d_ratio;
    doc["trials"] = params.trials;
    doc["seed"] = params.seed;
    doc["approx"] = approx;
    doc["d_window"] = {params.window.lo, params.window.hi};
    doc["forms"] = params.three_form ? "three" : "plus";
    auto& list = doc["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
      list.push_back({{"r_bound", row.bounds.r.label},
                      {"s_bound", row.bounds.s.label},
                      {"trials", row.trials},
                      {"successes", row.successes},
                      {"rate", row.rate()}});
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# success bits=" << params.bits << " d_ratio=" << params.d_ratio
      << " trials=" << params.trials << " seed=" << params.seed << " approx=" << approx
      << " d_window=" << params.window.lo << ".." << params.window.hi
      << " forms=" << (params.three_form ? "three" : "plus") << '\n';
  out << "r_bound\ts_bound\ttrials\tsuccesses\trate\n";
  for (const auto& row : rows) {
    out << row.bounds.r.label << '\t' << row.bounds.s.label << '\t' << row.trials << '\t'
        << row.successes << '\t' << std::fixed << std::setprecision(3) << row.rate()
        << std::defaultfloat << '\n';
  }
}

void write_bound_report(std::ostream& out, std::span<const BoundRow> rows, bool json) {
  if (json) {
    auto list = nlohmann::json::array();
    for (const auto& row : rows)
      list.push_back({{"log2n", row.log2n}, {"mitm_bits", row.mitm_bits},
                      {"lll_bits", row.lll_bits}});
    out << list.dump(2) << '\n';
    return;
  }
  out << "log2n\tmitm_bits\tlll_bits\n";
  for (const auto& row : rows)
    out << row.log2n << '\t' << row.mitm_bits << '\t' << row.lll_bits << '\n';
}

}  // namespace wiener
