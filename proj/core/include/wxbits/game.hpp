#pragma once

// Value types for one contest day: the game, player submissions, score
// records and the persisted event envelope.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wxbits/baseline.hpp"
#include "wxbits/core.hpp"
#include "wxbits/text.hpp"

namespace wxbits {

using Json = nlohmann::ordered_json;

enum class GameState { Draft, BaselinePublished, Open, Locked, Verified };

std::string_view to_string(GameState state);
GameState parse_game_state(std::string_view name);

struct OptOut {
  bool game1 = false;
  bool game2 = false;

  friend bool operator==(const OptOut&, const OptOut&) = default;
};

struct Submission {
  std::string player;
  std::string game_id;
  // One arity-2 allocation per published threshold, in percentile order.
  std::map<VariableKind, std::vector<CreditAllocation>> game1;
  std::map<VariableKind, CreditAllocation> game2;
  // Deterministic forecasts for legacy points, quantized.
  std::map<VariableKind, double> deterministic;
  OptOut opted_out;
  // Server receive time.
  UtcTime submitted_at;
};

enum class EventKind { OverUnder, Bins, Legacy };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);

// One scored (player, variable, event) triple.
struct ScoreRecord {
  std::string game_id;
  std::string player;
  VariableKind variable = VariableKind::TempMax;
  EventKind kind = EventKind::OverUnder;
  // Over/under only.
  double percentile = 0.0;
  double threshold = 0.0;
  // Issued and baseline pmfs (arity 2: over, under; arity 10: bins). Empty
  // for legacy records.
  std::vector<double> issued;
  std::vector<double> baseline;
  // Verified side or observed bin; unset for pushes and legacy records.
  std::optional<std::size_t> outcome;
  double bits = 0.0;
  bool pushed = false;
  std::vector<double> per_bin_bits;  // bins only
  double legacy_points = 0.0;        // legacy only

  // "q50", "q90", "bins" or "legacy".
  std::string event_label() const;
  // Counted in information-gain means.
  bool counts_for_bits() const { return kind != EventKind::Legacy && !pushed; }
};

struct Game {
  std::string id;
  std::string site;
  UtcDay forecast_day;
  GameState state = GameState::Draft;
  std::optional<BaselineSet> baseline;
  std::map<std::string, Submission> submissions;
  std::map<VariableKind, Observation> observations;
  std::vector<ScoreRecord> scores;

  // Submissions close at 0000 UTC starting the verification day; the
  // baseline comes from the 1200 UTC run twelve hours earlier.
  UtcTime deadline() const { return UtcTime{forecast_day}; }
  UtcTime baseline_run_time() const { return deadline() - std::chrono::hours{12}; }
};

enum class GameEventKind {
  Created,
  BaselineSet,
  Opened,
  SubmissionAccepted,
  Locked,
  ObservationSet,
  Scored,
};

std::string_view to_string(GameEventKind kind);
GameEventKind parse_game_event_kind(std::string_view name);

struct GameEvent {
  std::uint64_t seq = 0;
  GameEventKind kind = GameEventKind::Created;
  Json payload;
  UtcTime ts;
};

}  // namespace wxbits
