#pragma once

// Domain types shared by every module: contest variables, observations,
// credit allocations and the clamped probability mass functions they map to.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wxbits {

enum class VariableKind { TempMax, TempMin, WindMax, PrecipAccum };
enum class Unit { DegF, Knot, Inch };

inline constexpr std::array<VariableKind, 4> kAllVariables = {
    VariableKind::TempMax, VariableKind::TempMin, VariableKind::WindMax,
    VariableKind::PrecipAccum};

std::string_view to_string(VariableKind kind);
std::string_view to_string(Unit unit);
VariableKind parse_variable_kind(std::string_view name);  // throws ParseError
Unit parse_unit(std::string_view name);

struct VariableSpec {
  VariableKind kind = VariableKind::TempMax;
  Unit unit = Unit::DegF;
  // Reporting precision: 1 degF, 1 kt, 0.01 in.
  double resolution = 1.0;
  // Steps of `resolution` per unit; 1 or 100. Integer arithmetic on values
  // goes through this to avoid binary drift.
  std::int64_t steps_per_unit = 1;
  bool open_ended_high = false;
  // Lower end of the physical support (0 for wind and precipitation).
  bool non_negative = false;

  static VariableSpec of(VariableKind kind);

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

// Value rounded half-away-from-zero to the variable's resolution.
double quantize_to_resolution(double value, const VariableSpec& spec);
// The same, expressed as an integer count of resolution steps.
std::int64_t to_steps(double value, const VariableSpec& spec);
double from_steps(std::int64_t steps, const VariableSpec& spec);

struct Observation {
  VariableSpec variable;
  double value = 0.0;
  bool trace = false;
  // UTC date (YYYY-MM-DD) of the 0000-2400 UTC verification window.
  std::string valid_day;

  // Throws DomainError unless trace => precip with value 0, precip >= 0 and
  // value finite.
  void validate() const;
};

inline constexpr int kCreditBudget = 100;
inline constexpr std::size_t kOverUnderArity = 2;
inline constexpr std::size_t kBinArity = 10;

// A player's integer split of 100 confidence credits over 2 or 10 outcomes.
class CreditAllocation {
 public:
  CreditAllocation() = default;
  // Throws InvalidAllocation unless arity is 2 or 10, every entry is in
  // [0, 100] and the entries sum to exactly 100.
  explicit CreditAllocation(std::vector<int> credits);

  // Everything on one outcome.
  static CreditAllocation all_in(std::size_t arity, std::size_t index);

  std::span<const int> credits() const { return credits_; }
  std::size_t arity() const { return credits_.size(); }
  int operator[](std::size_t i) const { return credits_[i]; }

  friend bool operator==(const CreditAllocation&,
                         const CreditAllocation&) = default;

 private:
  std::vector<int> credits_;
};

// Probability bounds applied to every issued and baseline pmf.
struct Clamp {
  double p_min = 0.0;
  double p_max = 1.0;

  // p_min = 1 / (factor * members); p_max is the feasibility bound for the
  // arity: 1 - p_min for two outcomes, 1 - (arity - 1) * p_min otherwise.
  static Clamp for_members(int members, std::size_t arity,
                           double factor = 4.0);
  static Clamp for_arity(double p_min, std::size_t arity);

  bool contains(double p) const;
  // Throws InfeasibleClamp when no pmf of the arity fits the bounds.
  void check_feasible(std::size_t arity) const;
};

class Pmf {
 public:
  Pmf() = default;
  // Takes already-clamped probabilities; validates bounds and unit sum.
  Pmf(std::vector<double> probs, Clamp clamp);

  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t arity() const { return probs_.size(); }
  const Clamp& clamp() const { return clamp_; }

 private:
  std::vector<double> probs_;
  Clamp clamp_;
};

// Water-filling clamp: entries below p_min are raised (entries above p_max
// lowered) and pinned, the free entries are rescaled to carry the remaining
// mass, repeated until every entry is within bounds. Input must be
// non-negative with a positive sum; it is normalised first. An input that is
// already in bounds and sums to 1 within 1e-12 is returned unchanged.
Pmf clamp_pmf(std::span<const double> probs, const Clamp& clamp);

// credits / 100, then clamped.
Pmf credits_to_pmf(const CreditAllocation& alloc, const Clamp& clamp);

}  // namespace wxbits
