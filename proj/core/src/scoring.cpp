#include "wxbits/scoring.hpp"

#include <cmath>
#include <cstdlib>

#include "wxbits/error.hpp"

namespace wxbits {

double brier(double f, bool observed) {
  WXBITS_REQUIRE(f >= 0.0 && f <= 1.0, ErrorCode::DomainError,
                 "forecast probability outside [0, 1]");
  const double o = observed ? 1.0 : 0.0;
  return (f - o) * (f - o);
}

double ignorance(double f) {
  WXBITS_REQUIRE(f > 0.0 && f <= 1.0, ErrorCode::DomainError,
                 "ignorance needs a probability in (0, 1]");
  return -std::log2(f);
}

double info_gain(double f, double b) {
  WXBITS_REQUIRE(f > 0.0 && f <= 1.0 && b > 0.0 && b <= 1.0,
                 ErrorCode::DomainError,
                 "information gain needs probabilities in (0, 1]");
  return std::log2(f / b);
}

double info_gain(double f, double b, const Clamp& clamp) {
  WXBITS_REQUIRE(clamp.contains(f) && clamp.contains(b),
                 ErrorCode::DomainError,
                 "probability outside clamp bounds");
  return info_gain(f, b);
}

double contingency_cell(double f, double b, bool observed) {
  const double ig = info_gain(f, b);
  return observed ? ig : -ig;
}

BinaryEventScore score_over_under(const Pmf& issued, double threshold,
                                  const Pmf& baseline, const Observation& obs) {
  WXBITS_REQUIRE(issued.arity() == kOverUnderArity &&
                     baseline.arity() == kOverUnderArity,
                 ErrorCode::ArityMismatch, "over/under pmfs must have arity 2");
  obs.validate();
  const auto obs_steps = to_steps(obs.value, obs.variable);
  const auto threshold_steps = to_steps(threshold, obs.variable);

  BinaryEventScore score;
  if (obs_steps == threshold_steps) {
    score.pushed = true;
    return score;
  }
  const std::size_t side = obs_steps > threshold_steps ? kOver : kUnder;
  score.verified_side = side;
  score.f = issued[side];
  score.b = baseline[side];
  score.ig_bits = info_gain(score.f, score.b, issued.clamp());
  return score;
}

BinaryEventScore score_over_under(const CreditAllocation& alloc,
                                  double threshold, double b_over,
                                  const Observation& obs, const Clamp& clamp) {
  WXBITS_REQUIRE(alloc.arity() == kOverUnderArity, ErrorCode::ArityMismatch,
                 "over/under allocation must have arity 2");
  WXBITS_REQUIRE(clamp.contains(b_over), ErrorCode::DomainError,
                 "baseline exceedance probability outside clamp bounds");
  const Pmf baseline({b_over, 1.0 - b_over}, clamp);
  return score_over_under(credits_to_pmf(alloc, clamp), threshold, baseline,
                          obs);
}

RankedScore ranked_info_gain(const Pmf& pmf, const Pmf& baseline,
                             std::size_t observed_bin) {
  WXBITS_REQUIRE(pmf.arity() == kBinArity && baseline.arity() == kBinArity,
                 ErrorCode::ArityMismatch, "ranked scoring needs 10 bins");
  WXBITS_REQUIRE(observed_bin < kBinArity, ErrorCode::DomainError,
                 "observed bin out of range");
  RankedScore score;
  score.observed_bin = observed_bin;
  score.per_bin_bits.resize(kBinArity);
  for (std::size_t k = 0; k < kBinArity; ++k) {
    score.per_bin_bits[k] = contingency_cell(pmf[k], baseline[k],
                                             k == observed_bin);
    score.total_bits += score.per_bin_bits[k];
  }
  return score;
}

namespace {

// Tenths of a point per hundredth of an inch, for the hundredth ending at
// `hundredths`.
int precip_rate_tenths(std::int64_t hundredths) {
  if (hundredths <= 10) return 4;
  if (hundredths <= 25) return 3;
  if (hundredths <= 50) return 2;
  return 1;
}

}  // namespace

LegacyScore legacy_error_points(double forecast, const Observation& obs,
                                const VariableSpec& spec) {
  WXBITS_REQUIRE(obs.variable.kind == spec.kind && obs.variable.unit == spec.unit,
                 ErrorCode::UnitMismatch,
                 "observation variable does not match the scoring spec");
  obs.validate();
  const auto f = to_steps(forecast, spec);
  const auto o = to_steps(obs.trace ? 0.0 : obs.value, spec);

  LegacyScore score{0.0, spec};
  switch (spec.kind) {
    case VariableKind::TempMax:
    case VariableKind::TempMin:
      score.error_points = static_cast<double>(std::llabs(f - o));
      break;
    case VariableKind::WindMax:
      score.error_points = 0.5 * static_cast<double>(std::llabs(f - o));
      break;
    case VariableKind::PrecipAccum: {
      WXBITS_REQUIRE(f >= 0, ErrorCode::DomainError,
                     "precipitation forecast must be non-negative");
      long tenths = 0;
      for (auto h = std::min(f, o) + 1; h <= std::max(f, o); ++h) {
        tenths += precip_rate_tenths(h);
      }
      score.error_points = static_cast<double>(tenths) / 10.0;
      break;
    }
  }
  return score;
}

double total_bits(std::span<const BinaryEventScore> events) {
  double sum = 0.0;
  for (const auto& e : events) sum += e.pushed ? 0.0 : e.ig_bits;
  return sum;
}

std::optional<double> mean_bits(std::span<const BinaryEventScore> events) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : events) {
    if (e.pushed) continue;
    sum += e.ig_bits;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace wxbits
