#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "wxbits/baseline.hpp"
#include "wxbits/game.hpp"
#include "wxbits/standings.hpp"

namespace wxbits {

using Clock = std::function<UtcTime()>;
// Receives each event before it is committed; throwing aborts the operation.
using EventSink = std::function<void(const GameEvent&)>;

UtcTime system_now();

// Game lifecycle Draft -> BaselinePublished -> Open -> Locked -> Verified.
//
// Every mutation is expressed as a GameEvent; the event is applied to a copy
// of the game, handed to the sink, then committed. Replaying the same events
// rebuilds the same state. Mutations are serialized; reads share the lock.
class Engine {
 public:
  explicit Engine(Clock clock = system_now, EventSink sink = {});

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Throws CorruptLog on a sequence gap and ConflictingEvent when an event is
  // not legal in the replayed state. The sink is not called during replay.
  void replay(std::span<const GameEvent> log);

  Game create_game(const std::string& id, const std::string& site, UtcDay forecast_day);
  void publish_baseline(const std::string& id, const BaselineSet& baseline);
  void open(const std::string& id);
  // Stores the submission (last write wins per player) with the server
  // receive time and returns the stored, opt-out-resolved form.
  Submission submit(const std::string& id, Submission submission);
  void lock(const std::string& id);
  void set_observations(const std::string& id, const std::vector<Observation>& observations);
  std::vector<ScoreRecord> verify(const std::string& id);
  std::vector<ScoreRecord> verify(const std::string& id,
                                  const std::vector<Observation>& observations);

  Game game(const std::string& id) const;
  bool has_game(const std::string& id) const;
  std::vector<std::string> game_ids() const;
  std::vector<ScoreRecord> scores(const std::string& id) const;
  // Scores of every verified game.
  std::vector<ScoreRecord> all_scores() const;
  std::vector<LeaderboardRow> leaderboard(RankBy by = RankBy::AllGames) const;
  PlayerDiagnostics diagnostics(const std::string& player) const;

  std::vector<GameEvent> events() const;
  // FNV-1a over the canonical JSON of every game.
  std::uint64_t state_hash() const;

 private:
  void record(GameEventKind kind, Json payload);
  void apply(const GameEvent& event, bool live);
  const Game& require_game(const std::string& id) const;

  mutable std::shared_mutex mu_;
  Clock clock_;
  EventSink sink_;
  std::map<std::string, Game> games_;
  std::vector<GameEvent> log_;
};

// Scores every submission of a locked game against its observations. Pure.
std::vector<ScoreRecord> score_game(const Game& game);

}  // namespace wxbits
