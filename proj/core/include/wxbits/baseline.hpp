#pragma once

// Superensemble baselines: Game 1 over/under thresholds at the 50th and 90th
// percentiles and Game 2 decile bins, each with empirical, clamped
// probabilities.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wxbits/core.hpp"
#include "wxbits/text.hpp"

namespace wxbits {

// One member's point forecast for one variable, from a 1200 UTC run.
struct SuperensembleSample {
  std::string model;
  int member = 0;
  VariableSpec variable;
  double value = 0.0;
  bool trace = false;
  UtcTime run_time;
  std::string lead_window = "12-36h";

  std::string member_id() const;
};

inline constexpr std::array<double, 2> kGame1Percentiles = {0.50, 0.90};
inline constexpr double kDefaultClampFactor = 4.0;

struct Game1Threshold {
  double percentile = 0.5;
  double value = 0.0;       // quantized threshold
  int members_over = 0;     // members strictly above `value`
  Pmf baseline;             // {b_over, b_under}, clamped

  double b_over() const { return baseline[0]; }
};

struct Game2Bin {
  std::optional<double> low;   // nullopt: unbounded below
  std::optional<double> high;  // nullopt: unbounded above
  int members = 0;

  // low <= value < high.
  bool contains(double value) const;
};

struct BaselineSpec {
  VariableSpec variable;
  int n_members = 0;
  double clamp_factor = kDefaultClampFactor;
  UtcTime run_time;
  std::vector<Game1Threshold> thresholds;
  // Empty when the ensemble is degenerate for bins (Game 2 void for this
  // variable); otherwise exactly ten.
  std::vector<Game2Bin> bins;
  Pmf bin_masses;

  double p_min() const { return 1.0 / (clamp_factor * n_members); }
  Clamp binary_clamp() const { return Clamp::for_arity(p_min(), kOverUnderArity); }
  Clamp bin_clamp() const { return Clamp::for_arity(p_min(), kBinArity); }
  bool has_bins() const { return !bins.empty(); }

  // Bin holding the observation; trace precipitation maps to bin 0.
  std::size_t bin_index(const Observation& obs) const;
};

// Baselines for every variable of one run, as published to a game.
struct BaselineSet {
  UtcTime run_time;
  UtcTime published_at;
  std::vector<BaselineSpec> variables;  // canonical variable order

  const BaselineSpec* find(VariableKind kind) const;
};

// Linear interpolation at rank q * (n - 1) of the sorted values.
double percentile(std::span<const double> values, double q);

std::vector<Game1Threshold> build_game1_baseline(
    std::span<const SuperensembleSample> samples,
    double clamp_factor = kDefaultClampFactor);

struct Game2Baseline {
  std::vector<Game2Bin> bins;
  Pmf masses;
};

// Throws DegenerateEnsemble with fewer than 10 members or 2 distinct values.
Game2Baseline build_game2_bins(std::span<const SuperensembleSample> samples,
                               double clamp_factor = kDefaultClampFactor);

// Thresholds plus bins for one variable. A degenerate ensemble leaves the
// bins empty instead of failing.
BaselineSpec build_baseline(std::span<const SuperensembleSample> samples,
                            double clamp_factor = kDefaultClampFactor);

// Groups by variable; every sample must share one run time.
BaselineSet build_baseline_set(std::span<const SuperensembleSample> samples,
                               double clamp_factor = kDefaultClampFactor);

struct IngestResult {
  std::vector<SuperensembleSample> samples;
  std::map<VariableKind, std::size_t> counts;
};

// CSV with header `run_time,model,member,variable,value,trace`.
IngestResult parse_members(std::istream& in);
IngestResult ingest_members(const std::string& path);

}  // namespace wxbits
