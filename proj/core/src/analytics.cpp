#include "wxbits/analytics.hpp"

#include <cmath>
#include <map>

#include "wxbits/error.hpp"

namespace wxbits {

namespace {

// p * log2(p / q), 0 when p == 0.
double kl_term(double p, double q) {
  return p == 0.0 ? 0.0 : p * std::log2(p / q);
}

struct Group {
  std::size_t n = 0;
  std::size_t hits = 0;
};

std::map<double, Group> group_by_probability(
    std::span<const ForecastRecord> records) {
  WXBITS_REQUIRE(!records.empty(), ErrorCode::EmptyInput,
                 "no forecast records");
  std::map<double, Group> groups;
  for (const auto& r : records) {
    WXBITS_REQUIRE(r.f > 0.0 && r.f < 1.0, ErrorCode::DomainError,
                   "issued probability must be inside (0, 1)");
    auto& g = groups[r.f];
    ++g.n;
    g.hits += r.observed ? 1 : 0;
  }
  return groups;
}

}  // namespace

double binary_kl_bits(double p, double q) {
  return kl_term(p, q) + kl_term(1.0 - p, 1.0 - q);
}

double binary_entropy_bits(double p) {
  return -kl_term(p, 1.0) - kl_term(1.0 - p, 1.0);
}

Decomposition decompose(std::span<const ForecastRecord> records) {
  const auto groups = group_by_probability(records);
  const double total = static_cast<double>(records.size());

  std::size_t hits = 0;
  for (const auto& [f, g] : groups) hits += g.hits;
  const double base_rate = static_cast<double>(hits) / total;

  Decomposition d;
  d.n_events = records.size();
  for (const auto& [f, g] : groups) {
    const double n = static_cast<double>(g.n);
    const double freq = static_cast<double>(g.hits) / n;
    d.rel_bits += n * binary_kl_bits(freq, f);
    d.dsc_bits += n * binary_kl_bits(freq, base_rate);
  }
  d.rel_bits /= total;
  d.dsc_bits /= total;
  d.unc_bits = binary_entropy_bits(base_rate);

  for (const auto& r : records) {
    d.mean_ign_bits -= std::log2(r.observed ? r.f : 1.0 - r.f);
  }
  d.mean_ign_bits /= total;
  return d;
}

std::vector<ReliabilityPoint> reliability_curve(
    std::span<const ForecastRecord> records) {
  std::vector<ReliabilityPoint> curve;
  for (const auto& [f, g] : group_by_probability(records)) {
    curve.push_back({f, static_cast<double>(g.hits) / static_cast<double>(g.n), g.n});
  }
  return curve;
}

}  // namespace wxbits
