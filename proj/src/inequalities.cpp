#include "emergence/inequalities.hpp"

#include <algorithm>

namespace emergence {

namespace {

void record(SuiteReport& report, const std::string& name, bool ok, const std::string& detail) {
  ++report.checks[name];
  report.violations.try_emplace(name, 0);
  if (ok) return;
  ++report.violations[name];
  if (report.examples.size() < 8) report.examples.push_back(name + ": " + detail);
}

std::string describe(const DiscreteMeasure& mu) {
  std::string s = "{";
  for (const auto& a : mu.atoms()) {
    if (s.size() > 1) s += ", ";
    s += word_to_string(a.word) + ":" + to_string(a.weight);
  }
  return s + "}";
}

std::string describe(const FiniteClosedSet& b) {
  std::string s = "{";
  for (const auto& w : b.points()) {
    if (s.size() > 1) s += ", ";
    s += word_to_string(w);
  }
  return s + "}";
}

// Hoelder comparisons under one ground metric; power[p] = W_p^p.
void holder_checks(const DiscreteMeasure& mu, const DiscreteMeasure& nu, std::optional<BowenContext> ctx,
                   const Rational& diam, const std::string& where, SuiteReport& report) {
  Rational power[4];
  for (int p = 1; p <= 3; ++p) power[p] = wasserstein(mu, nu, p, ctx).power_cost;
  const Rational lp = levy_prokhorov(mu, nu, ctx);
  const std::string pair = describe(mu) + " vs " + describe(nu) + " " + where;
  for (unsigned q = 1; q <= 3; ++q)
    for (unsigned p = q; p <= 3; ++p) {
      // W_q <= W_p  <=>  (W_q^q)^p <= (W_p^p)^q
      const bool lower = pow(power[q], p) <= pow(power[p], q);
      // W_p <= D^(1 - q/p) W_q^(q/p)  <=>  W_p^p <= D^(p - q) W_q^q
      const bool upper = power[p] <= pow(diam, p - q) * power[q];
      record(report, "wasserstein_holder", lower && upper,
             pair + " q=" + std::to_string(q) + " p=" + std::to_string(p));
    }
  for (unsigned p = 1; p <= 3; ++p) {
    // LP^(1 + 1/p) <= W_p  <=>  LP^(p + 1) <= W_p^p
    const bool lower = pow(lp, p + 1) <= power[p];
    // W_p <= (1 + D^p)^(1/p) LP^(1/p)  <=>  W_p^p <= (1 + D^p) LP
    const bool upper = power[p] <= (1 + pow(diam, p)) * lp;
    record(report, "lp_holder", lower && upper, pair + " p=" + std::to_string(p) + " LP=" + to_string(lp));
  }
}

}  // namespace

std::size_t SuiteReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& [name, count] : violations) total += count;
  return total;
}

void check_measure_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n, SuiteReport& report) {
  const Rational diam = mu.system()->diameter();
  const BowenContext ctx{n, MetricMode::bowen};
  holder_checks(mu, nu, std::nullopt, diam, "under d", report);
  holder_checks(mu, nu, ctx, diam, "under d_" + std::to_string(n), report);

  const std::string pair = describe(mu) + " vs " + describe(nu) + " n=" + std::to_string(n);
  for (int p = 1; p <= 3; ++p) {
    const Rational orbit = bowen_orbit_wasserstein_power(mu, nu, p, n);
    const Rational lifted = wasserstein(mu, nu, p, ctx).power_cost;
    record(report, "bowen_wasserstein", orbit <= lifted, pair + " p=" + std::to_string(p));
  }
  const Rational orbit_lp = bowen_orbit_levy_prokhorov(mu, nu, n);
  const Rational lifted_lp = levy_prokhorov(mu, nu, ctx);
  record(report, "bowen_lp", orbit_lp <= lifted_lp,
         pair + " LP_n=" + to_string(orbit_lp) + " LP^n=" + to_string(lifted_lp));
}

void check_set_pair(const FiniteClosedSet& b, const FiniteClosedSet& c, int n, SuiteReport& report) {
  const BowenContext ctx{n, MetricMode::bowen};
  const Rational orbit = bowen_orbit_hausdorff(b, c, n);
  const Rational lifted = hausdorff(b, c, ctx);
  const Rational spread = std::max(set_diameter(b, ctx), set_diameter(c, ctx));
  record(report, "hausdorff_bowen", orbit <= lifted && lifted <= orbit + spread,
         describe(b) + " vs " + describe(c) + " n=" + std::to_string(n) + " H_n=" + to_string(orbit) +
             " H^n=" + to_string(lifted));
}

SuiteReport run_metric_suite(const SystemHandle& system, const SuiteOptions& options) {
  if (options.max_support < 1 || options.max_length < 2) throw InvalidArgument("suite needs support >= 1, length >= 2");
  SuiteReport report;
  std::mt19937_64 rng(options.seed);
  auto draw_length = [&] { return 2 + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(options.max_length - 1))); };
  for (std::size_t k = 0; k < options.measure_pairs; ++k) {
    const int length = draw_length();
    const int n = 1 + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(length)));
    DiscreteMeasure mu = random_measure(system, rng, options.max_support, length);
    DiscreteMeasure nu = random_measure(system, rng, options.max_support, length);
    check_measure_pair(mu, nu, n, report);
  }
  for (std::size_t k = 0; k < options.set_pairs; ++k) {
    const int length = draw_length();
    const int n = 1 + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(length)));
    auto random_set = [&] {
      std::vector<Word> words;
      const auto size = 1 + draw_below(rng, static_cast<std::uint64_t>(options.max_support));
      for (std::uint64_t i = 0; i < size; ++i) words.push_back(random_word(*system, length, rng));
      return FiniteClosedSet(system, std::move(words));
    };
    FiniteClosedSet b = random_set();
    FiniteClosedSet c = random_set();
    check_set_pair(b, c, n, report);
  }
  return report;
}

}  // namespace emergence
