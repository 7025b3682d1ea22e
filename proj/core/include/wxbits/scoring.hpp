#pragma once

// Scoring kernel. All quantities in bits (base-2 logarithms).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wxbits/core.hpp"

namespace wxbits {

// (f - o)^2 for one binary event.
double brier(double f, bool observed);

// -log2(f): surprise on verification. f must be in (0, 1].
double ignorance(double f);

// log2(f / b). Positive iff the forecast beat the baseline on the verified
// outcome. The two-argument form only requires f, b in (0, 1]; the clamped
// form additionally requires both inside the clamp bounds.
double info_gain(double f, double b);
double info_gain(double f, double b, const Clamp& clamp);

// One cell of the information-gain contingency table: +log2(f/b) when the
// category was observed, -log2(f/b) when it was not.
double contingency_cell(double f, double b, bool observed);

// Over/under outcome index: 0 = over, 1 = under.
inline constexpr std::size_t kOver = 0;
inline constexpr std::size_t kUnder = 1;

struct BinaryEventScore {
  double f = 0.0;  // issued probability of the verified side
  double b = 0.0;  // baseline probability of the verified side
  double ig_bits = 0.0;
  bool pushed = false;
  // kOver or kUnder; unset when pushed.
  std::optional<std::size_t> verified_side;
};

// Observation exactly on the (quantized) threshold is a push: zero bits,
// excluded from means.
BinaryEventScore score_over_under(const Pmf& issued, double threshold,
                                  const Pmf& baseline, const Observation& obs);
BinaryEventScore score_over_under(const CreditAllocation& alloc,
                                  double threshold, double b_over,
                                  const Observation& obs, const Clamp& clamp);

struct RankedScore {
  std::vector<double> per_bin_bits;
  double total_bits = 0.0;
  std::size_t observed_bin = 0;
};

// Sum over bins of g_k * log2(f_k / b_k), g_k = +1 on the observed bin and
// -1 elsewhere.
RankedScore ranked_info_gain(const Pmf& pmf, const Pmf& baseline,
                             std::size_t observed_bin);

struct LegacyScore {
  double error_points = 0.0;
  VariableSpec variable;
};

// Deterministic contest points. Temperature 1 point/degF, wind 0.5
// point/kt, precipitation accumulated piecewise across the tiers
// (trace, 0.10] 0.4, (0.10, 0.25] 0.3, (0.25, 0.50] 0.2, above 0.1 per
// hundredth. Trace counts as 0.00.
LegacyScore legacy_error_points(double forecast, const Observation& obs,
                                const VariableSpec& spec);

// Sum of bits over events, pushes contribute zero.
double total_bits(std::span<const BinaryEventScore> events);
// Mean over non-pushed events; nullopt when every event pushed.
std::optional<double> mean_bits(std::span<const BinaryEventScore> events);

}  // namespace wxbits
