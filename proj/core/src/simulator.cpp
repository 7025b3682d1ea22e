#include "wxbits/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include "wxbits/engine.hpp"
#include "wxbits/error.hpp"

namespace wxbits {

namespace {

constexpr double kTailMass = 1e-7;
constexpr double kTraceChance = 0.3;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> normalized(std::vector<double> v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
  return v;
}

// Masses of round(x) on the integer lattice [lo, hi] for a continuous cdf
// in lattice units; the end cells absorb the tails.
TruthDistribution discretize(VariableKind kind, std::int64_t lo, std::int64_t hi,
                             const auto& cdf) {
  TruthDistribution t;
  t.variable = VariableSpec::of(kind);
  for (auto k = lo; k <= hi; ++k) {
    const double a = k == lo ? 0.0 : cdf(static_cast<double>(k) - 0.5);
    const double b = k == hi ? 1.0 : cdf(static_cast<double>(k) + 0.5);
    t.steps.push_back(k);
    t.probs.push_back(std::max(b - a, 0.0));
  }
  t.probs = normalized(std::move(t.probs));
  return t;
}

TruthDistribution gaussian_truth(VariableKind kind, double mean, double sd) {
  const auto lo = static_cast<std::int64_t>(std::floor(mean - 6.0 * sd));
  const auto hi = static_cast<std::int64_t>(std::ceil(mean + 6.0 * sd));
  return discretize(kind, lo, hi, [&](double x) { return normal_cdf((x - mean) / sd); });
}

TruthDistribution wind_truth(double shape, double scale) {
  const auto cdf = [&](double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-std::pow(x / scale, shape));
  };
  const double top = scale * std::pow(-std::log(kTailMass), 1.0 / shape);
  return discretize(VariableKind::WindMax, 0, static_cast<std::int64_t>(std::ceil(top)), cdf);
}

// Dry with probability `dry`, else exponential with `mean` inches; lattice in
// hundredths.
TruthDistribution precip_truth(double dry, double mean) {
  const double hundredths = mean * 100.0;
  const auto cdf = [&](double x) {
    const double wet = x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / hundredths);
    return dry + (1.0 - dry) * wet;
  };
  const double top = -hundredths * std::log(kTailMass);
  return discretize(VariableKind::PrecipAccum, 0,
                    static_cast<std::int64_t>(std::ceil(top)), cdf);
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct DayPlan {
  UtcDay day;
  BaselineSet baseline;
  std::vector<Submission> submissions;
  std::vector<Observation> observations;
};

DayPlan plan_day(const SeasonConfig& config, const std::vector<SyntheticPlayer>& players,
                 int index) {
  const auto seed = config.seed;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);

  DayPlan plan;
  plan.day = config.start_day + std::chrono::days{index};
  const auto run_time = UtcTime{plan.day} - std::chrono::hours{12};
  const auto truth = draw_truth(rng);
  const auto members = draw_members(truth, config.members, config.member_bias, run_time, rng);
  plan.baseline = build_baseline_set(members, config.clamp_factor);
  for (const auto& t : truth.variables) {
    plan.observations.push_back(draw_observation(t, plan.day, rng));
  }
  for (const auto& p : players) {
    auto sub = make_player_submission(p, truth, plan.baseline, rng);
    plan.submissions.push_back(std::move(sub));
  }
  return plan;
}

std::vector<DayPlan> plan_season(const SeasonConfig& config,
                                 const std::vector<SyntheticPlayer>& players) {
  std::vector<DayPlan> plans(static_cast<std::size_t>(config.days));
  std::vector<std::exception_ptr> errors(plans.size());
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(plans.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (auto i = next++; i < plans.size(); i = next++) {
      try {
        plans[i] = plan_day(config, players, static_cast<int>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return plans;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Honest: return "honest";
    case Strategy::Hedger: return "hedger";
    case Strategy::AllIn: return "allin";
  }
  return "honest";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::Honest, Strategy::Hedger, Strategy::AllIn}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::ConfigError, "unknown strategy '" + std::string(name) + "'");
}

std::vector<double> TruthDistribution::over_under(double threshold) const {
  const auto t = to_steps(threshold, variable);
  double over = 0.0;
  double under = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] > t) over += probs[i];
    if (steps[i] < t) under += probs[i];
  }
  if (over + under <= 0.0) return {0.5, 0.5};
  return {over / (over + under), under / (over + under)};
}

std::vector<double> TruthDistribution::bin_masses(const BaselineSpec& spec) const {
  std::vector<double> out(kBinArity, 0.0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Observation at{variable, from_steps(steps[i], variable), false, {}};
    out[spec.bin_index(at)] += probs[i];
  }
  return out;
}

double TruthDistribution::sample(double u) const {
  double cum = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    cum += probs[i];
    if (u < cum) return from_steps(steps[i], variable);
  }
  return from_steps(steps.back(), variable);
}

const TruthDistribution& DayTruth::at(VariableKind kind) const {
  for (const auto& t : variables) {
    if (t.variable.kind == kind) return t;
  }
  throw Error(ErrorCode::Internal, "no truth for " + std::string(to_string(kind)));
}

void SeasonConfig::validate() const {
  WXBITS_REQUIRE(players >= 1, ErrorCode::ConfigError, "need at least one player");
  WXBITS_REQUIRE(days >= 1, ErrorCode::ConfigError, "need at least one day");
  WXBITS_REQUIRE(members >= 10, ErrorCode::ConfigError, "need at least 10 members");
  WXBITS_REQUIRE(clamp_factor > 0.0 && std::isfinite(clamp_factor), ErrorCode::ConfigError,
                 "clamp factor must be positive");
  WXBITS_REQUIRE(std::isfinite(member_bias), ErrorCode::ConfigError,
                 "member bias must be finite");
  WXBITS_REQUIRE(threads >= 0, ErrorCode::ConfigError, "threads must not be negative");
  WXBITS_REQUIRE(!site.empty(), ErrorCode::ConfigError, "site must not be empty");
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<SyntheticPlayer> make_population(const SeasonConfig& config) {
  config.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0xfeedu};
  std::mt19937_64 rng(seq);
  std::vector<SyntheticPlayer> out;
  for (int i = 0; i < config.players; ++i) {
    SyntheticPlayer p;
    p.strategy = static_cast<Strategy>(i % 3);
    char id[32];
    std::snprintf(id, sizeof id, "%s-%03d", std::string(to_string(p.strategy)).c_str(), i);
    p.id = id;
    const double lambda = 0.8 + 0.4 * uniform01(rng);
    const double sigma = 0.3 * uniform01(rng);
    if (p.strategy != Strategy::AllIn) {
      p.lambda = lambda;
      p.sigma = sigma;
    }
    out.push_back(std::move(p));
  }
  return out;
}

DayTruth draw_truth(std::mt19937_64& rng) {
  DayTruth truth;
  const double t_max = 40.0 + 50.0 * uniform01(rng);
  const double sd_max = 2.0 + 4.0 * uniform01(rng);
  const double t_min = t_max - (10.0 + 15.0 * uniform01(rng));
  const double sd_min = 2.0 + 3.0 * uniform01(rng);
  const double shape = 1.6 + 1.2 * uniform01(rng);
  const double scale = 6.0 + 16.0 * uniform01(rng);
  const double dry = 0.2 + 0.6 * uniform01(rng);
  const double wet_mean = 0.05 + 0.55 * uniform01(rng);
  truth.variables.push_back(gaussian_truth(VariableKind::TempMax, t_max, sd_max));
  truth.variables.push_back(gaussian_truth(VariableKind::TempMin, t_min, sd_min));
  truth.variables.push_back(wind_truth(shape, scale));
  truth.variables.push_back(precip_truth(dry, wet_mean));
  return truth;
}

std::vector<SuperensembleSample> draw_members(const DayTruth& truth, int members,
                                              double bias, UtcTime run_time,
                                              std::mt19937_64& rng) {
  std::vector<SuperensembleSample> out;
  for (const auto& t : truth.variables) {
    for (int m = 1; m <= members; ++m) {
      double v = t.sample(uniform01(rng)) + bias;
      if (t.variable.non_negative) v = std::max(v, 0.0);
      SuperensembleSample s;
      s.model = "sim";
      s.member = m;
      s.variable = t.variable;
      s.value = quantize_to_resolution(v, t.variable);
      s.run_time = run_time;
      out.push_back(std::move(s));
    }
  }
  return out;
}

Observation draw_observation(const TruthDistribution& truth, UtcDay day,
                             std::mt19937_64& rng) {
  Observation obs;
  obs.variable = truth.variable;
  obs.value = truth.sample(uniform01(rng));
  const bool trace_draw = uniform01(rng) < kTraceChance;
  obs.trace = truth.variable.kind == VariableKind::PrecipAccum && obs.value == 0.0 &&
              trace_draw;
  obs.valid_day = format_utc_day(day);
  return obs;
}

std::vector<double> geometric_mix(std::span<const double> baseline,
                                  std::span<const double> truth, double lambda) {
  WXBITS_REQUIRE(baseline.size() == truth.size(), ErrorCode::ArityMismatch,
                 "baseline and truth differ in arity");
  if (lambda == 1.0) return {truth.begin(), truth.end()};
  if (lambda == 0.0) return {baseline.begin(), baseline.end()};
  std::vector<double> mix(truth.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < mix.size(); ++k) {
    mix[k] = std::pow(baseline[k], 1.0 - lambda) * std::pow(truth[k], lambda);
    sum += mix[k];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) return {truth.begin(), truth.end()};
  for (auto& x : mix) x /= sum;
  return mix;
}

std::vector<double> issued_pmf(const SyntheticPlayer& player, std::span<const double> truth,
                               std::span<const double> baseline, std::mt19937_64& rng) {
  auto pmf = geometric_mix(baseline, truth, player.lambda);
  if (player.sigma > 0.0) {
    std::vector<double> logits(pmf.size(), 0.0);
    double top = -INFINITY;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      const double z = standard_normal(rng);
      if (pmf[k] > 0.0) {
        logits[k] = std::log(pmf[k]) + player.sigma * z;
        top = std::max(top, logits[k]);
      }
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      pmf[k] = pmf[k] > 0.0 ? std::exp(logits[k] - top) : 0.0;
      sum += pmf[k];
    }
    for (auto& x : pmf) x /= sum;
  }
  switch (player.strategy) {
    case Strategy::Honest:
      break;
    case Strategy::Hedger:
      for (auto& x : pmf) x = 0.5 * x + 0.5 / static_cast<double>(pmf.size());
      break;
    case Strategy::AllIn: {
      const auto top = argmax(pmf);
      std::fill(pmf.begin(), pmf.end(), 0.0);
      pmf[top] = 1.0;
      break;
    }
  }
  return pmf;
}

std::vector<int> largest_remainder_credits(std::span<const double> pmf) {
  WXBITS_REQUIRE(!pmf.empty(), ErrorCode::EmptyInput, "empty pmf");
  std::vector<int> credits(pmf.size());
  std::vector<double> remainder(pmf.size());
  int total = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    WXBITS_REQUIRE(pmf[k] >= 0.0 && std::isfinite(pmf[k]), ErrorCode::DomainError,
                   "pmf entries must be finite and non-negative");
    const double scaled = pmf[k] * kCreditBudget;
    const double whole = std::floor(scaled + 1e-9);
    credits[k] = static_cast<int>(whole);
    remainder[k] = scaled - whole;
    total += credits[k];
  }
  std::vector<std::size_t> order(pmf.size());
  std::iota(order.begin(), order.end(), 0);
  if (total < kCreditBudget) {
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; total < kCreditBudget; i = (i + 1) % order.size(), ++total) {
      ++credits[order[i]];
    }
  } else if (total > kCreditBudget) {
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return remainder[a] < remainder[b]; });
    for (std::size_t i = 0; total > kCreditBudget; i = (i + 1) % order.size()) {
      if (credits[order[i]] > 0) {
        --credits[order[i]];
        --total;
      }
    }
  }
  return credits;
}

std::vector<double> empirical_over_under(const Game1Threshold& threshold, int n_members) {
  const double n = n_members;
  return {threshold.members_over / n, (n_members - threshold.members_over) / n};
}

std::vector<double> empirical_bins(const BaselineSpec& spec) {
  std::vector<double> out;
  const double n = spec.n_members;
  for (const auto& bin : spec.bins) out.push_back(bin.members / n);
  return out;
}

Submission make_player_submission(const SyntheticPlayer& player, const DayTruth& truth,
                                  const BaselineSet& baseline, std::mt19937_64& rng) {
  Submission sub;
  sub.player = player.id;
  for (const auto& spec : baseline.variables) {
    const auto& t = truth.at(spec.variable.kind);
    auto& allocs = sub.game1[spec.variable.kind];
    for (const auto& threshold : spec.thresholds) {
      const auto pmf = issued_pmf(player, t.over_under(threshold.value),
                                  empirical_over_under(threshold, spec.n_members), rng);
      allocs.emplace_back(largest_remainder_credits(pmf));
    }
    if (spec.has_bins()) {
      const auto pmf = issued_pmf(player, t.bin_masses(spec), empirical_bins(spec), rng);
      sub.game2.emplace(spec.variable.kind, CreditAllocation(largest_remainder_credits(pmf)));
    }
  }
  return sub;
}

SeasonResult simulate_season(const SeasonConfig& config) {
  return simulate_season(config, make_population(config));
}

SeasonResult simulate_season(const SeasonConfig& config,
                             const std::vector<SyntheticPlayer>& players) {
  config.validate();
  WXBITS_REQUIRE(!players.empty(), ErrorCode::ConfigError, "need at least one player");
  std::set<std::string> ids;
  for (const auto& p : players) {
    WXBITS_REQUIRE(ids.insert(p.id).second, ErrorCode::ConfigError,
                   "duplicate player id " + p.id);
    WXBITS_REQUIRE(p.lambda >= 0.0 && p.lambda <= 2.0, ErrorCode::ConfigError,
                   "lambda must be in [0, 2]");
    WXBITS_REQUIRE(p.sigma >= 0.0 && std::isfinite(p.sigma), ErrorCode::ConfigError,
                   "sigma must be non-negative");
  }

  const auto plans = plan_season(config, players);

  UtcTime now{};
  Engine engine([&now] { return now; });
  for (const auto& plan : plans) {
    const auto id = "sim-" + format_utc_day(plan.day);
    const auto deadline = UtcTime{plan.day};
    now = deadline - std::chrono::hours{12};
    engine.create_game(id, config.site, plan.day);
    engine.publish_baseline(id, plan.baseline);
    engine.open(id);
    now = deadline - std::chrono::hours{6};
    for (const auto& sub : plan.submissions) engine.submit(id, sub);
    now = deadline;
    engine.lock(id);
    now = deadline + std::chrono::hours{30};
    engine.verify(id, plan.observations);
  }

  SeasonResult result;
  result.players = players;
  result.events = engine.events();
  result.scores = engine.all_scores();
  result.leaderboard = wxbits::leaderboard(result.scores);
  return result;
}

}  // namespace wxbits
