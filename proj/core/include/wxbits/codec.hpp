#pragma once

// Canonical JSON encodings. Decimals travel as strings (shortest round-trip
// form), keys are emitted in a fixed order so equal values serialize to
// identical bytes. Decoders throw ValidationError on malformed structure and
// the domain error of the type on invalid content.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wxbits/analytics.hpp"
#include "wxbits/baseline.hpp"
#include "wxbits/game.hpp"
#include "wxbits/standings.hpp"

namespace wxbits {

Json to_json(const VariableSpec& spec);
VariableSpec variable_spec_from_json(const Json& j);

Json to_json(const Observation& obs);
// `default_day` fills a missing valid_day.
Observation observation_from_json(const Json& j,
                                  std::optional<UtcDay> default_day = std::nullopt);

Json to_json(const CreditAllocation& alloc);
CreditAllocation allocation_from_json(const Json& j);

Json to_json(const BaselineSpec& spec);
BaselineSpec baseline_spec_from_json(const Json& j);
Json to_json(const BaselineSet& set);
BaselineSet baseline_set_from_json(const Json& j);

Json to_json(const Submission& sub);
Submission submission_from_json(const Json& j);

Json to_json(const ScoreRecord& record);
ScoreRecord score_record_from_json(const Json& j);
Json scores_to_json(std::span<const ScoreRecord> records);
std::vector<ScoreRecord> scores_from_json(const Json& j);

// Public view of a game: no submissions or scores.
Json game_view_json(const Game& game);
// Everything, used for state hashing.
Json game_state_json(const Game& game);

Json to_json(const GameEvent& event);
GameEvent game_event_from_json(const Json& j);

Json to_json(const Decomposition& d);
Json to_json(const ReliabilityPoint& p);
Json to_json(const PlayerDiagnostics& d);
Json leaderboard_to_json(std::span<const LeaderboardRow> rows, RankBy by);

}  // namespace wxbits
