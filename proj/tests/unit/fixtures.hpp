#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "support.hpp"
#include "wxbits/baseline.hpp"
#include "wxbits/codec.hpp"
#include "wxbits/engine.hpp"

namespace wxbits::testing {

// Forecast day of the fixture member file (run 2024-03-01 1200 UTC).
inline UtcDay fixture_day() { return parse_utc_day("2024-03-02"); }
inline UtcTime fixture_deadline() { return UtcTime{fixture_day()}; }

// A clock the test moves by hand.
struct ManualClock {
  UtcTime now = fixture_deadline() - std::chrono::hours{6};
  Clock fn() {
    return [this] { return now; };
  }
};

inline BaselineSet fixture_baseline() {
  return build_baseline_set(ingest_members(data_path("members.csv")).samples);
}

inline Submission fixture_submission(const std::string& player) {
  auto sub = submission_from_json(Json::parse(read_file(data_path("submission.json"))));
  sub.player = player;
  return sub;
}

inline std::vector<Observation> fixture_observations() {
  std::vector<Observation> out;
  const auto doc = Json::parse(read_file(data_path("observations.json")));
  for (const auto& o : doc.at("observations")) out.push_back(observation_from_json(o));
  return out;
}

// Twenty evenly spaced members per variable: every empirical probability is
// a multiple of 5%, so baseline-equal allocations exist on the credit lattice.
inline BaselineSet even_baseline() {
  const auto run = UtcTime{fixture_day()} - std::chrono::hours{12};
  std::vector<SuperensembleSample> samples;
  for (auto kind : kAllVariables) {
    const auto spec = VariableSpec::of(kind);
    for (int i = 0; i < 20; ++i) {
      double v = 0.0;
      switch (kind) {
        case VariableKind::TempMax: v = 60 + i; break;
        case VariableKind::TempMin: v = 40 + i; break;
        case VariableKind::WindMax: v = 5 + i; break;
        case VariableKind::PrecipAccum: v = i / 100.0; break;
      }
      samples.push_back({"GEFS", i, spec, v, false, run});
    }
  }
  return build_baseline_set(samples);
}

// Allocations that reproduce the published baseline.
inline Submission baseline_submission(const BaselineSet& set, const std::string& player) {
  Submission sub;
  sub.player = player;
  for (const auto& spec : set.variables) {
    for (const auto& t : spec.thresholds) {
      const int over = static_cast<int>(std::lround(100.0 * t.b_over()));
      sub.game1[spec.variable.kind].push_back(CreditAllocation({over, 100 - over}));
    }
    if (spec.has_bins()) {
      std::vector<int> credits;
      for (double p : spec.bin_masses.probs()) {
        credits.push_back(static_cast<int>(std::lround(100.0 * p)));
      }
      sub.game2.emplace(spec.variable.kind, CreditAllocation(credits));
    }
  }
  return sub;
}

// Engine whose fixture game "day1" is in `state` (Draft through Verified),
// with one submission from alice once open.
inline void advance(Engine& engine, const std::string& id, GameState state) {
  engine.create_game(id, "KOUN", fixture_day());
  if (state == GameState::Draft) return;
  engine.publish_baseline(id, fixture_baseline());
  if (state == GameState::BaselinePublished) return;
  engine.open(id);
  engine.submit(id, fixture_submission("alice"));
  if (state == GameState::Open) return;
  engine.lock(id);
  if (state == GameState::Locked) return;
  engine.verify(id, fixture_observations());
}

}  // namespace wxbits::testing
