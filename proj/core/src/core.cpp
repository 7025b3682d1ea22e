#include "wxbits/core.hpp"

#include <cmath>
#include <numeric>

#include "wxbits/error.hpp"

namespace wxbits {

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::TempMax: return "temp_max";
    case VariableKind::TempMin: return "temp_min";
    case VariableKind::WindMax: return "wind_max";
    case VariableKind::PrecipAccum: return "precip_accum";
  }
  return "temp_max";
}

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::DegF: return "degF";
    case Unit::Knot: return "knot";
    case Unit::Inch: return "inch";
  }
  return "degF";
}

VariableKind parse_variable_kind(std::string_view name) {
  for (auto kind : kAllVariables) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::ParseError,
              "unknown variable kind '" + std::string(name) + "'");
}

Unit parse_unit(std::string_view name) {
  for (auto unit : {Unit::DegF, Unit::Knot, Unit::Inch}) {
    if (to_string(unit) == name) return unit;
  }
  throw Error(ErrorCode::ParseError, "unknown unit '" + std::string(name) + "'");
}

VariableSpec VariableSpec::of(VariableKind kind) {
  switch (kind) {
    case VariableKind::TempMax:
    case VariableKind::TempMin:
      return {kind, Unit::DegF, 1.0, 1, false, false};
    case VariableKind::WindMax:
      return {kind, Unit::Knot, 1.0, 1, true, true};
    case VariableKind::PrecipAccum:
      return {kind, Unit::Inch, 0.01, 100, true, true};
  }
  throw Error(ErrorCode::Internal, "unhandled variable kind");
}

std::int64_t to_steps(double value, const VariableSpec& spec) {
  WXBITS_REQUIRE(std::isfinite(value), ErrorCode::DomainError,
                 "value is not finite");
  const double scaled = value * static_cast<double>(spec.steps_per_unit);
  // The nudge resolves representation error on exact halves (0.115 is
  // stored as 0.11499999...) in favour of away-from-zero.
  return static_cast<std::int64_t>(
      std::round(scaled + std::copysign(1e-9, scaled)));
}

double from_steps(std::int64_t steps, const VariableSpec& spec) {
  return static_cast<double>(steps) / static_cast<double>(spec.steps_per_unit);
}

double quantize_to_resolution(double value, const VariableSpec& spec) {
  return from_steps(to_steps(value, spec), spec);
}

void Observation::validate() const {
  WXBITS_REQUIRE(std::isfinite(value), ErrorCode::DomainError,
                 "observation value is not finite");
  if (variable.non_negative) {
    WXBITS_REQUIRE(value >= 0.0, ErrorCode::DomainError,
                   std::string(to_string(variable.kind)) +
                       " observation must be non-negative");
  }
  if (trace) {
    WXBITS_REQUIRE(variable.kind == VariableKind::PrecipAccum,
                   ErrorCode::DomainError,
                   "trace flag is only valid for precipitation");
    WXBITS_REQUIRE(value == 0.0, ErrorCode::DomainError,
                   "trace precipitation must carry value 0");
  }
}

CreditAllocation::CreditAllocation(std::vector<int> credits)
    : credits_(std::move(credits)) {
  WXBITS_REQUIRE(arity() == kOverUnderArity || arity() == kBinArity,
                 ErrorCode::InvalidAllocation,
                 "allocation must have 2 or 10 entries, got " +
                     std::to_string(arity()));
  long total = 0;
  for (int c : credits_) {
    WXBITS_REQUIRE(c >= 0 && c <= kCreditBudget, ErrorCode::InvalidAllocation,
                   "credits must be integers in [0, 100]");
    total += c;
  }
  WXBITS_REQUIRE(total == kCreditBudget, ErrorCode::InvalidAllocation,
                 "credits must sum to 100, got " + std::to_string(total));
}

CreditAllocation CreditAllocation::all_in(std::size_t arity,
                                          std::size_t index) {
  WXBITS_REQUIRE(index < arity, ErrorCode::InvalidAllocation,
                 "all-in index out of range");
  std::vector<int> credits(arity, 0);
  credits[index] = kCreditBudget;
  return CreditAllocation(std::move(credits));
}

Clamp Clamp::for_arity(double p_min, std::size_t arity) {
  WXBITS_REQUIRE(arity >= 2, ErrorCode::ArityMismatch, "arity must be >= 2");
  Clamp clamp{p_min, 1.0 - static_cast<double>(arity - 1) * p_min};
  clamp.check_feasible(arity);
  return clamp;
}

Clamp Clamp::for_members(int members, std::size_t arity, double factor) {
  WXBITS_REQUIRE(members > 0, ErrorCode::ConfigError,
                 "member count must be positive");
  WXBITS_REQUIRE(factor > 0.0 && std::isfinite(factor), ErrorCode::ConfigError,
                 "clamp factor must be positive");
  return for_arity(1.0 / (factor * members), arity);
}

namespace {
constexpr double kBoundSlack = 1e-12;
constexpr double kSumTolerance = 1e-12;
}  // namespace

bool Clamp::contains(double p) const {
  return p >= p_min - kBoundSlack && p <= p_max + kBoundSlack;
}

void Clamp::check_feasible(std::size_t arity) const {
  const double n = static_cast<double>(arity);
  WXBITS_REQUIRE(p_min >= 0.0 && p_min * n < 1.0, ErrorCode::InfeasibleClamp,
                 "p_min * arity must be below 1");
  WXBITS_REQUIRE(p_max <= 1.0 && p_max * n > 1.0 - kBoundSlack &&
                     p_max >= p_min,
                 ErrorCode::InfeasibleClamp, "p_max leaves no feasible pmf");
}

Pmf::Pmf(std::vector<double> probs, Clamp clamp)
    : probs_(std::move(probs)), clamp_(clamp) {
  WXBITS_REQUIRE(probs_.size() >= 2, ErrorCode::ArityMismatch,
                 "pmf needs at least two outcomes");
  double sum = 0.0;
  for (double p : probs_) {
    WXBITS_REQUIRE(std::isfinite(p) && clamp_.contains(p),
                   ErrorCode::DomainError, "pmf entry outside clamp bounds");
    sum += p;
  }
  WXBITS_REQUIRE(std::abs(sum - 1.0) <= kSumTolerance, ErrorCode::DomainError,
                 "pmf does not sum to 1");
}

Pmf clamp_pmf(std::span<const double> input, const Clamp& clamp) {
  const std::size_t n = input.size();
  WXBITS_REQUIRE(n >= 2, ErrorCode::ArityMismatch,
                 "pmf needs at least two outcomes");
  clamp.check_feasible(n);

  double sum = 0.0;
  bool in_bounds = true;
  for (double p : input) {
    WXBITS_REQUIRE(std::isfinite(p) && p >= 0.0, ErrorCode::DomainError,
                   "probabilities must be finite and non-negative");
    sum += p;
    in_bounds = in_bounds && p >= clamp.p_min && p <= clamp.p_max;
  }
  WXBITS_REQUIRE(sum > 0.0, ErrorCode::DomainError, "pmf has zero mass");
  if (in_bounds && std::abs(sum - 1.0) <= kSumTolerance) {
    return Pmf({input.begin(), input.end()}, clamp);
  }

  std::vector<double> p(input.begin(), input.end());
  for (double& v : p) v /= sum;
  std::vector<bool> pinned(n, false);

  // Each pass pins at least one entry, so n passes suffice.
  for (std::size_t pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) continue;
      if (p[i] < clamp.p_min) {
        p[i] = clamp.p_min;
        pinned[i] = changed = true;
      } else if (p[i] > clamp.p_max) {
        p[i] = clamp.p_max;
        pinned[i] = changed = true;
      }
    }
    if (!changed) break;

    double pinned_mass = 0.0;
    double free_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) (pinned[i] ? pinned_mass : free_mass) += p[i];
    if (free_mass == 0.0) {
      WXBITS_REQUIRE(std::abs(pinned_mass - 1.0) <= kSumTolerance,
                     ErrorCode::InfeasibleClamp,
                     "clamp bounds cannot be met with unit mass");
      break;
    }
    const double scale = (1.0 - pinned_mass) / free_mass;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pinned[i]) p[i] *= scale;
    }
  }
  return Pmf(std::move(p), clamp);
}

Pmf credits_to_pmf(const CreditAllocation& alloc, const Clamp& clamp) {
  WXBITS_REQUIRE(alloc.arity() >= 2, ErrorCode::InvalidAllocation,
                 "empty allocation");
  std::vector<double> probs(alloc.arity());
  for (std::size_t i = 0; i < alloc.arity(); ++i) {
    probs[i] = static_cast<double>(alloc[i]) / kCreditBudget;
  }
  return clamp_pmf(probs, clamp);
}

}  // namespace wxbits
