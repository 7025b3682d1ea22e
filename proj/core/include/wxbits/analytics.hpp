#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wxbits {

// One issued probability for a binary event and whether it occurred.
struct ForecastRecord {
  double f = 0.5;
  bool observed = false;
};

// Information-theoretic decomposition of mean ignorance:
// mean_ign = rel - dsc + unc.
struct Decomposition {
  double rel_bits = 0.0;
  double dsc_bits = 0.0;
  double unc_bits = 0.0;
  double mean_ign_bits = 0.0;
  std::size_t n_events = 0;
};

struct ReliabilityPoint {
  double f = 0.0;         // issued probability
  double obs_freq = 0.0;  // observed relative frequency
  std::size_t n = 0;
};

// Binary KL divergence d(p || q) in bits with 0 log 0 = 0.
double binary_kl_bits(double p, double q);
// Binary entropy in bits.
double binary_entropy_bits(double p);

// Records are grouped by exact issued probability. Throws EmptyInput on an
// empty set and DomainError for f outside (0, 1).
Decomposition decompose(std::span<const ForecastRecord> records);
std::vector<ReliabilityPoint> reliability_curve(
    std::span<const ForecastRecord> records);

}  // namespace wxbits
