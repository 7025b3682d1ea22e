#include "wxbits/engine.hpp"

#include <algorithm>
#include <mutex>
#include <regex>

#include "wxbits/codec.hpp"
#include "wxbits/error.hpp"
#include "wxbits/scoring.hpp"

namespace wxbits {

UtcTime system_now() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

namespace {

const std::regex& id_pattern() {
  static const std::regex re("[A-Za-z0-9][A-Za-z0-9_.-]{0,63}");
  return re;
}

void check_id(const std::string& id, const char* what) {
  WXBITS_REQUIRE(std::regex_match(id, id_pattern()), ErrorCode::ValidationError,
                 std::string(what) + " id must match [A-Za-z0-9][A-Za-z0-9_.-]{0,63}");
}

void require_state(const Game& game, GameState expected) {
  if (game.state == expected) return;
  if (game.state == GameState::Verified) {
    throw Error(ErrorCode::AlreadyVerified, "game " + game.id + " is already verified");
  }
  throw Error(ErrorCode::WrongState,
              "game " + game.id + " is " + std::string(to_string(game.state)) +
                  ", operation needs " + std::string(to_string(expected)));
}

void require_accepting(const Game& game) {
  switch (game.state) {
    case GameState::Open: return;
    case GameState::Locked:
    case GameState::Verified:
      throw Error(ErrorCode::GameLocked, "game " + game.id + " is locked");
    default:
      throw Error(ErrorCode::GameNotOpen, "game " + game.id + " is not open");
  }
}

// Allocations must cover exactly the published events.
void check_complete(const BaselineSet& baseline, const Submission& sub) {
  for (const auto& [kind, allocs] : sub.game1) {
    const auto* spec = baseline.find(kind);
    WXBITS_REQUIRE(spec != nullptr, ErrorCode::InvalidAllocation,
                   "no baseline for " + std::string(to_string(kind)));
    WXBITS_REQUIRE(allocs.size() == spec->thresholds.size(),
                   ErrorCode::InvalidAllocation,
                   "need one over/under allocation per threshold for " +
                       std::string(to_string(kind)));
    for (const auto& a : allocs) {
      WXBITS_REQUIRE(a.arity() == kOverUnderArity, ErrorCode::InvalidAllocation,
                     "over/under allocations have 2 entries");
    }
  }
  for (const auto& [kind, alloc] : sub.game2) {
    const auto* spec = baseline.find(kind);
    WXBITS_REQUIRE(spec != nullptr && spec->has_bins(), ErrorCode::InvalidAllocation,
                   "no bins published for " + std::string(to_string(kind)));
    WXBITS_REQUIRE(alloc.arity() == kBinArity, ErrorCode::InvalidAllocation,
                   "bin allocations have 10 entries");
  }
  for (const auto& spec : baseline.variables) {
    const auto name = std::string(to_string(spec.variable.kind));
    WXBITS_REQUIRE(sub.game1.count(spec.variable.kind) == 1,
                   ErrorCode::InvalidAllocation,
                   "missing over/under allocations for " + name);
    if (spec.has_bins()) {
      WXBITS_REQUIRE(sub.game2.count(spec.variable.kind) == 1,
                     ErrorCode::InvalidAllocation, "missing bin allocation for " + name);
    }
  }
  for (const auto& [kind, value] : sub.deterministic) {
    WXBITS_REQUIRE(baseline.find(kind) != nullptr, ErrorCode::ValidationError,
                   "deterministic forecast for unpublished variable");
    Observation as_obs{VariableSpec::of(kind), value, false, {}};
    as_obs.validate();
  }
}

// Opted-out players put everything on one category: the side or bin of
// their deterministic forecast when on file, else the baseline favourite.
Submission resolve_opt_outs(const BaselineSet& baseline, Submission sub) {
  for (auto& [kind, value] : sub.deterministic) {
    value = quantize_to_resolution(value, VariableSpec::of(kind));
  }
  if (sub.opted_out.game1) {
    sub.game1.clear();
    for (const auto& spec : baseline.variables) {
      const auto det = sub.deterministic.find(spec.variable.kind);
      auto& allocs = sub.game1[spec.variable.kind];
      for (const auto& t : spec.thresholds) {
        bool over = t.b_over() > 0.5;
        if (det != sub.deterministic.end()) {
          over = to_steps(det->second, spec.variable) > to_steps(t.value, spec.variable);
        }
        allocs.push_back(CreditAllocation::all_in(kOverUnderArity, over ? kOver : kUnder));
      }
    }
  }
  if (sub.opted_out.game2) {
    sub.game2.clear();
    for (const auto& spec : baseline.variables) {
      if (!spec.has_bins()) continue;
      const auto det = sub.deterministic.find(spec.variable.kind);
      std::size_t bin = 0;
      if (det != sub.deterministic.end()) {
        bin = spec.bin_index(Observation{spec.variable, det->second, false, {}});
      } else {
        const auto probs = spec.bin_masses.probs();
        bin = static_cast<std::size_t>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
      }
      sub.game2.emplace(spec.variable.kind, CreditAllocation::all_in(kBinArity, bin));
    }
  }
  return sub;
}

std::vector<double> to_vector(const Pmf& pmf) {
  return {pmf.probs().begin(), pmf.probs().end()};
}

}  // namespace

std::vector<ScoreRecord> score_game(const Game& game) {
  WXBITS_REQUIRE(game.baseline.has_value(), ErrorCode::WrongState,
                 "game " + game.id + " has no baseline");
  const auto& baseline = *game.baseline;
  for (const auto& spec : baseline.variables) {
    WXBITS_REQUIRE(game.observations.count(spec.variable.kind) == 1,
                   ErrorCode::MissingObservation,
                   "missing observation for " + std::string(to_string(spec.variable.kind)));
  }

  std::vector<ScoreRecord> out;
  for (const auto& [player, sub] : game.submissions) {
    for (const auto& spec : baseline.variables) {
      const auto kind = spec.variable.kind;
      const auto& obs = game.observations.at(kind);
      ScoreRecord base;
      base.game_id = game.id;
      base.player = player;
      base.variable = kind;

      const auto& allocs = sub.game1.at(kind);
      for (std::size_t j = 0; j < spec.thresholds.size(); ++j) {
        const auto& t = spec.thresholds[j];
        const auto issued = credits_to_pmf(allocs[j], spec.binary_clamp());
        const auto s = score_over_under(issued, t.value, t.baseline, obs);
        ScoreRecord r = base;
        r.kind = EventKind::OverUnder;
        r.percentile = t.percentile;
        r.threshold = t.value;
        r.issued = to_vector(issued);
        r.baseline = to_vector(t.baseline);
        r.outcome = s.verified_side;
        r.bits = s.ig_bits;
        r.pushed = s.pushed;
        out.push_back(std::move(r));
      }

      if (spec.has_bins()) {
        const auto issued = credits_to_pmf(sub.game2.at(kind), spec.bin_clamp());
        const auto rs = ranked_info_gain(issued, spec.bin_masses, spec.bin_index(obs));
        ScoreRecord r = base;
        r.kind = EventKind::Bins;
        r.issued = to_vector(issued);
        r.baseline = to_vector(spec.bin_masses);
        r.outcome = rs.observed_bin;
        r.bits = rs.total_bits;
        r.per_bin_bits = rs.per_bin_bits;
        out.push_back(std::move(r));
      }

      if (const auto det = sub.deterministic.find(kind); det != sub.deterministic.end()) {
        ScoreRecord r = base;
        r.kind = EventKind::Legacy;
        r.legacy_points = legacy_error_points(det->second, obs, spec.variable).error_points;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

Engine::Engine(Clock clock, EventSink sink)
    : clock_(std::move(clock)), sink_(std::move(sink)) {}

void Engine::replay(std::span<const GameEvent> log) {
  std::unique_lock lock(mu_);
  for (const auto& event : log) {
    WXBITS_REQUIRE(event.seq == log_.size() + 1, ErrorCode::CorruptLog,
                   "event sequence gap: expected " + std::to_string(log_.size() + 1) +
                       ", found " + std::to_string(event.seq));
    try {
      apply(event, false);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptLog) throw;
      throw Error(ErrorCode::ConflictingEvent,
                  "event " + std::to_string(event.seq) + " (" +
                      std::string(to_string(event.kind)) + "): " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::CorruptLog,
                  "event " + std::to_string(event.seq) + " has a malformed payload: " +
                      e.what());
    }
  }
}

void Engine::record(GameEventKind kind, Json payload) {
  GameEvent event{log_.size() + 1, kind, std::move(payload), clock_()};
  apply(event, true);
}

void Engine::apply(const GameEvent& event, bool live) {
  WXBITS_REQUIRE(event.payload.contains("game") && event.payload["game"].is_string(),
                 ErrorCode::CorruptLog, "event payload lacks a game id");
  const auto id = event.payload["game"].get<std::string>();
  const auto& p = event.payload;

  Game next;
  if (event.kind == GameEventKind::Created) {
    WXBITS_REQUIRE(games_.count(id) == 0, ErrorCode::GameExists,
                   "game " + id + " already exists");
    next.id = id;
    next.site = p.at("site").get<std::string>();
    next.forecast_day = parse_utc_day(p.at("forecast_day").get<std::string>());
  } else {
    next = require_game(id);
  }

  switch (event.kind) {
    case GameEventKind::Created:
      break;
    case GameEventKind::BaselineSet: {
      require_state(next, GameState::Draft);
      auto baseline = baseline_set_from_json(p.at("baseline"));
      WXBITS_REQUIRE(baseline.run_time == next.baseline_run_time(),
                     ErrorCode::BaselineTiming,
                     "baseline must come from the " +
                         format_utc_time(next.baseline_run_time()) + " run, got " +
                         format_utc_time(baseline.run_time));
      next.baseline = std::move(baseline);
      next.state = GameState::BaselinePublished;
      break;
    }
    case GameEventKind::Opened:
      require_state(next, GameState::BaselinePublished);
      next.state = GameState::Open;
      break;
    case GameEventKind::SubmissionAccepted: {
      require_accepting(next);
      auto sub = submission_from_json(p.at("submission"));
      WXBITS_REQUIRE(sub.submitted_at < next.deadline(), ErrorCode::DeadlinePassed,
                     "submission received at " + format_utc_time(sub.submitted_at) +
                         ", deadline " + format_utc_time(next.deadline()));
      check_complete(*next.baseline, sub);
      next.submissions[sub.player] = std::move(sub);
      break;
    }
    case GameEventKind::Locked:
      require_state(next, GameState::Open);
      next.state = GameState::Locked;
      break;
    case GameEventKind::ObservationSet: {
      require_state(next, GameState::Locked);
      for (const auto& oj : p.at("observations")) {
        auto obs = observation_from_json(oj, next.forecast_day);
        WXBITS_REQUIRE(next.baseline->find(obs.variable.kind) != nullptr,
                       ErrorCode::ValidationError,
                       "no baseline for observed " +
                           std::string(to_string(obs.variable.kind)));
        WXBITS_REQUIRE(obs.valid_day == format_utc_day(next.forecast_day),
                       ErrorCode::ValidationError,
                       "observation valid_day does not match the game day");
        next.observations[obs.variable.kind] = std::move(obs);
      }
      break;
    }
    case GameEventKind::Scored: {
      require_state(next, GameState::Locked);
      auto scores = score_game(next);
      WXBITS_REQUIRE(scores_to_json(scores) == p.at("scores"),
                     ErrorCode::ConflictingEvent,
                     "recorded scores differ from recomputed scores");
      next.scores = std::move(scores);
      next.state = GameState::Verified;
      break;
    }
  }

  if (live && sink_) sink_(event);
  games_[id] = std::move(next);
  log_.push_back(event);
}

const Game& Engine::require_game(const std::string& id) const {
  const auto it = games_.find(id);
  WXBITS_REQUIRE(it != games_.end(), ErrorCode::GameNotFound, "unknown game " + id);
  return it->second;
}

Game Engine::create_game(const std::string& id, const std::string& site,
                         UtcDay forecast_day) {
  check_id(id, "game");
  WXBITS_REQUIRE(!site.empty(), ErrorCode::ValidationError, "site must not be empty");
  std::unique_lock lock(mu_);
  record(GameEventKind::Created,
         {{"game", id}, {"site", site}, {"forecast_day", format_utc_day(forecast_day)}});
  return games_.at(id);
}

void Engine::publish_baseline(const std::string& id, const BaselineSet& baseline) {
  std::unique_lock lock(mu_);
  require_state(require_game(id), GameState::Draft);
  record(GameEventKind::BaselineSet, {{"game", id}, {"baseline", to_json(baseline)}});
}

void Engine::open(const std::string& id) {
  std::unique_lock lock(mu_);
  record(GameEventKind::Opened, {{"game", id}});
}

Submission Engine::submit(const std::string& id, Submission submission) {
  check_id(submission.player, "player");
  std::unique_lock lock(mu_);
  const auto& game = require_game(id);
  require_accepting(game);
  submission.game_id = id;
  submission.submitted_at = clock_();
  WXBITS_REQUIRE(submission.submitted_at < game.deadline(), ErrorCode::DeadlinePassed,
                 "submissions closed at " + format_utc_time(game.deadline()));
  auto resolved = resolve_opt_outs(*game.baseline, std::move(submission));
  check_complete(*game.baseline, resolved);
  record(GameEventKind::SubmissionAccepted,
         {{"game", id}, {"submission", to_json(resolved)}});
  return resolved;
}

void Engine::lock(const std::string& id) {
  std::unique_lock lock(mu_);
  record(GameEventKind::Locked, {{"game", id}});
}

void Engine::set_observations(const std::string& id,
                              const std::vector<Observation>& observations) {
  WXBITS_REQUIRE(!observations.empty(), ErrorCode::ValidationError,
                 "no observations given");
  std::unique_lock lock(mu_);
  const auto& game = require_game(id);
  require_state(game, GameState::Locked);
  Json arr = Json::array();
  for (auto obs : observations) {
    if (obs.valid_day.empty()) obs.valid_day = format_utc_day(game.forecast_day);
    obs.validate();
    arr.push_back(to_json(obs));
  }
  record(GameEventKind::ObservationSet, {{"game", id}, {"observations", std::move(arr)}});
}

std::vector<ScoreRecord> Engine::verify(const std::string& id) {
  std::unique_lock lock(mu_);
  const auto& game = require_game(id);
  require_state(game, GameState::Locked);
  const auto scores = score_game(game);
  record(GameEventKind::Scored, {{"game", id}, {"scores", scores_to_json(scores)}});
  return scores;
}

std::vector<ScoreRecord> Engine::verify(const std::string& id,
                                        const std::vector<Observation>& observations) {
  set_observations(id, observations);
  return verify(id);
}

Game Engine::game(const std::string& id) const {
  std::shared_lock lock(mu_);
  return require_game(id);
}

bool Engine::has_game(const std::string& id) const {
  std::shared_lock lock(mu_);
  return games_.count(id) == 1;
}

std::vector<std::string> Engine::game_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, g] : games_) ids.push_back(id);
  return ids;
}

std::vector<ScoreRecord> Engine::scores(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto& game = require_game(id);
  WXBITS_REQUIRE(game.state == GameState::Verified, ErrorCode::WrongState,
                 "game " + id + " has not been verified");
  return game.scores;
}

std::vector<ScoreRecord> Engine::all_scores() const {
  std::shared_lock lock(mu_);
  std::vector<ScoreRecord> out;
  for (const auto& [id, g] : games_) {
    if (g.state == GameState::Verified) out.insert(out.end(), g.scores.begin(), g.scores.end());
  }
  return out;
}

std::vector<LeaderboardRow> Engine::leaderboard(RankBy by) const {
  const auto scores = all_scores();
  return wxbits::leaderboard(scores, by);
}

PlayerDiagnostics Engine::diagnostics(const std::string& player) const {
  const auto scores = all_scores();
  return diagnose_player(scores, player);
}

std::vector<GameEvent> Engine::events() const {
  std::shared_lock lock(mu_);
  return log_;
}

std::uint64_t Engine::state_hash() const {
  std::shared_lock lock(mu_);
  Json games = Json::array();
  for (const auto& [id, g] : games_) games.push_back(game_state_json(g));
  const auto text = games.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace wxbits
