#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wxbits/analytics.hpp"
#include "wxbits/game.hpp"

namespace wxbits {

enum class RankBy { AllGames, Game1, Game2 };

std::string_view to_string(RankBy by);
RankBy parse_rank_by(std::string_view name);

struct LeaderboardRow {
  std::size_t rank = 0;
  std::string player;
  // Means over non-pushed events; nullopt when the player has none.
  std::optional<double> mean_bits;
  std::optional<double> mean_bits_game1;
  std::optional<double> mean_bits_game2;
  std::size_t n_events = 0;
  std::size_t n_game1 = 0;
  std::size_t n_game2 = 0;
};

// Players rank by descending mean bits on the chosen key (players without a
// mean on that key last), then by more events, then by player id. Unplayed
// events are simply absent, never zero-filled. Means are summed in sorted
// order so they do not depend on record order.
std::vector<LeaderboardRow> leaderboard(std::span<const ScoreRecord> records,
                                        RankBy by = RankBy::AllGames);

// Game 1 stream: one record per non-pushed over/under event, issued
// probability of "over". Game 2 stream: ten one-vs-rest records per
// non-pushed bin event.
std::vector<ForecastRecord> game1_stream(std::span<const ScoreRecord> records);
std::vector<ForecastRecord> game2_stream(std::span<const ScoreRecord> records);

struct StreamDiagnostics {
  Decomposition decomposition;
  std::vector<ReliabilityPoint> reliability;
};

struct PlayerDiagnostics {
  std::string player;
  std::optional<StreamDiagnostics> game1;
  std::optional<StreamDiagnostics> game2;
};

// Throws PlayerNotFound when the player has no scored events.
PlayerDiagnostics diagnose_player(std::span<const ScoreRecord> records,
                                  const std::string& player);

}  // namespace wxbits
