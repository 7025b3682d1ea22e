#include "wxbits/standings.hpp"

#include <algorithm>
#include <map>

#include "wxbits/error.hpp"

namespace wxbits {

std::string_view to_string(RankBy by) {
  switch (by) {
    case RankBy::AllGames: return "all";
    case RankBy::Game1: return "game1";
    case RankBy::Game2: return "game2";
  }
  return "all";
}

RankBy parse_rank_by(std::string_view name) {
  for (auto by : {RankBy::AllGames, RankBy::Game1, RankBy::Game2}) {
    if (to_string(by) == name) return by;
  }
  throw Error(ErrorCode::ValidationError,
              "rank key must be all, game1 or game2");
}

namespace {

std::optional<double> order_free_mean(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct Tally {
  std::vector<double> game1;
  std::vector<double> game2;
};

}  // namespace

std::vector<LeaderboardRow> leaderboard(std::span<const ScoreRecord> records,
                                        RankBy by) {
  std::map<std::string, Tally> tallies;
  for (const auto& r : records) {
    if (r.kind == EventKind::Legacy) continue;
    auto& t = tallies[r.player];
    if (r.pushed) continue;
    (r.kind == EventKind::OverUnder ? t.game1 : t.game2).push_back(r.bits);
  }

  std::vector<LeaderboardRow> rows;
  for (auto& [player, t] : tallies) {
    LeaderboardRow row;
    row.player = player;
    row.n_game1 = t.game1.size();
    row.n_game2 = t.game2.size();
    row.n_events = row.n_game1 + row.n_game2;
    std::vector<double> all = t.game1;
    all.insert(all.end(), t.game2.begin(), t.game2.end());
    row.mean_bits = order_free_mean(std::move(all));
    row.mean_bits_game1 = order_free_mean(std::move(t.game1));
    row.mean_bits_game2 = order_free_mean(std::move(t.game2));
    rows.push_back(std::move(row));
  }

  auto key = [by](const LeaderboardRow& row) {
    switch (by) {
      case RankBy::Game1: return row.mean_bits_game1;
      case RankBy::Game2: return row.mean_bits_game2;
      case RankBy::AllGames: break;
    }
    return row.mean_bits;
  };
  std::sort(rows.begin(), rows.end(),
            [&](const LeaderboardRow& a, const LeaderboardRow& b) {
              const auto ka = key(a);
              const auto kb = key(b);
              if (ka.has_value() != kb.has_value()) return ka.has_value();
              if (ka && *ka != *kb) return *ka > *kb;
              if (a.n_events != b.n_events) return a.n_events > b.n_events;
              return a.player < b.player;
            });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
  return rows;
}

std::vector<ForecastRecord> game1_stream(std::span<const ScoreRecord> records) {
  std::vector<ForecastRecord> out;
  for (const auto& r : records) {
    if (r.kind != EventKind::OverUnder || r.pushed || !r.outcome) continue;
    out.push_back({r.issued.at(0), *r.outcome == 0});
  }
  return out;
}

std::vector<ForecastRecord> game2_stream(std::span<const ScoreRecord> records) {
  std::vector<ForecastRecord> out;
  for (const auto& r : records) {
    if (r.kind != EventKind::Bins || !r.outcome) continue;
    for (std::size_t k = 0; k < r.issued.size(); ++k) {
      out.push_back({r.issued[k], *r.outcome == k});
    }
  }
  return out;
}

namespace {

std::optional<StreamDiagnostics> diagnose_stream(
    const std::vector<ForecastRecord>& stream) {
  if (stream.empty()) return std::nullopt;
  return StreamDiagnostics{decompose(stream), reliability_curve(stream)};
}

}  // namespace

PlayerDiagnostics diagnose_player(std::span<const ScoreRecord> records,
                                  const std::string& player) {
  std::vector<ScoreRecord> mine;
  std::copy_if(records.begin(), records.end(), std::back_inserter(mine),
               [&](const ScoreRecord& r) { return r.player == player; });
  WXBITS_REQUIRE(!mine.empty(), ErrorCode::PlayerNotFound,
                 "no scored events for player '" + player + "'");
  return {player, diagnose_stream(game1_stream(mine)),
          diagnose_stream(game2_stream(mine))};
}

}  // namespace wxbits
