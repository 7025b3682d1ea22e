#include "wxbits_tools/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "wxbits/api.hpp"
#include "wxbits/codec.hpp"
#include "wxbits/engine.hpp"
#include "wxbits/event_log.hpp"
#include "wxbits/schema.hpp"
#include "wxbits/scoring.hpp"
#include "wxbits/simulator.hpp"
#include "wxbits_tools/http_server.hpp"

namespace wxbits::tools {

namespace {

struct Globals {
  std::string log = "wxbits-events.jsonl";
  bool json = false;
  std::string at;
};

struct Args {
  std::string game;
  std::string site;
  std::string day;
  std::string members;
  std::string player;
  std::string file;
  std::string obs;
  std::string rank_by = "all";
  std::string events;
  std::string host = "127.0.0.1";
  int port = 8080;
  bool dev = false;
  double clamp_factor = kDefaultClampFactor;
  SeasonConfig season;
  std::uint64_t seed = 7;
};

// Engine rebuilt from the event log; new events are appended to it.
class Session {
 public:
  explicit Session(const Globals& g)
      : path_(g.log),
        engine_(make_clock(g.at), [this](const GameEvent& e) { writer().append(e); }) {
    engine_.replay(read_event_log(path_));
  }

  Engine& engine() { return engine_; }

 private:
  static Clock make_clock(const std::string& at) {
    if (at.empty()) return system_now;
    const auto fixed = parse_utc_time(at);
    return [fixed] { return fixed; };
  }

  EventLogWriter& writer() {
    if (!writer_) writer_ = std::make_unique<EventLogWriter>(path_);
    return *writer_;
  }

  std::string path_;
  std::unique_ptr<EventLogWriter> writer_;
  Engine engine_;
};

Json read_json_file(const std::string& path, std::string_view schema_name) {
  std::ifstream in(path);
  WXBITS_REQUIRE(in.is_open(), ErrorCode::SchemaError, "cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, path + " is not JSON: " + e.what());
  }
  validate_against(doc, schema_name);
  return doc;
}

std::vector<Observation> read_observations(const std::string& path) {
  const auto doc = read_json_file(path, "observations");
  std::vector<Observation> out;
  for (const auto& oj : doc.at("observations")) out.push_back(observation_from_json(oj));
  return out;
}

std::string fixed4(std::optional<double> v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("-");
}

std::string outcome_label(const ScoreRecord& r) {
  switch (r.kind) {
    case EventKind::OverUnder:
      if (r.pushed) return "push";
      return *r.outcome == kOver ? "over" : "under";
    case EventKind::Bins:
      return fmt::format("bin {}", *r.outcome);
    case EventKind::Legacy:
      return "-";
  }
  return "-";
}

void print_scores(std::ostream& out, const std::string& game,
                  const std::vector<ScoreRecord>& scores) {
  fmt::print(out, "scores for {}\n", game);
  fmt::print(out, "{:<16} {:<13} {:<7} {:<8} {:>10}\n", "player", "variable", "event",
             "outcome", "value");
  for (const auto& r : scores) {
    const auto value = r.kind == EventKind::Legacy
                           ? fmt::format("{:.1f} pts", r.legacy_points)
                           : (r.pushed ? std::string("-") : fmt::format("{:.4f}", r.bits));
    fmt::print(out, "{:<16} {:<13} {:<7} {:<8} {:>10}\n", r.player, to_string(r.variable),
               r.event_label(), outcome_label(r), value);
  }
}

void print_leaderboard(std::ostream& out, const std::vector<LeaderboardRow>& rows) {
  fmt::print(out, "{:>4} {:<16} {:>10} {:>10} {:>10} {:>8}\n", "rank", "player", "mean",
             "game1", "game2", "events");
  for (const auto& r : rows) {
    fmt::print(out, "{:>4} {:<16} {:>10} {:>10} {:>10} {:>8}\n", r.rank, r.player,
               fixed4(r.mean_bits), fixed4(r.mean_bits_game1), fixed4(r.mean_bits_game2),
               r.n_events);
  }
}

void print_game(std::ostream& out, const Game& g) {
  fmt::print(out, "game {} at {} for {}: {}\n", g.id, g.site, format_utc_day(g.forecast_day),
             to_string(g.state));
}

void print_diagnostics(std::ostream& out, const PlayerDiagnostics& d) {
  fmt::print(out, "diagnostics for {}\n", d.player);
  const auto stream = [&](const char* name, const std::optional<StreamDiagnostics>& s) {
    if (!s) {
      fmt::print(out, "{}: no events\n", name);
      return;
    }
    const auto& dec = s->decomposition;
    fmt::print(out, "{}: n={} ign={:.4f} rel={:.4f} dsc={:.4f} unc={:.4f}\n", name,
               dec.n_events, dec.mean_ign_bits, dec.rel_bits, dec.dsc_bits, dec.unc_bits);
  };
  stream("game1", d.game1);
  stream("game2", d.game2);
}

void emit(std::ostream& out, const Globals& g, const Json& doc,
          const std::function<void()>& human) {
  if (g.json) {
    out << render(doc);
  } else {
    human();
  }
}

int run_command(const CLI::App* sub, const Globals& g, Args& a, std::ostream& out) {
  const std::string name = sub->get_name();

  if (name == "ingest") {
    const auto r = ingest_members(a.members);
    Json j;
    j["rows"] = r.samples.size();
    j["run_time"] = format_utc_time(r.samples.front().run_time);
    Json counts = Json::object();
    for (const auto& [kind, n] : r.counts) counts[std::string(to_string(kind))] = n;
    j["variables"] = counts;
    emit(out, g, j, [&] {
      fmt::print(out, "{} rows from the {} run\n", r.samples.size(),
                 format_utc_time(r.samples.front().run_time));
      for (const auto& [kind, n] : r.counts) fmt::print(out, "  {:<13} {}\n", to_string(kind), n);
    });
    return 0;
  }

  if (name == "simulate") {
    a.season.seed = a.seed;
    const auto result = simulate_season(a.season);
    if (!a.events.empty()) {
      std::ofstream f(a.events, std::ios::binary | std::ios::trunc);
      WXBITS_REQUIRE(f.is_open(), ErrorCode::Internal, "cannot write " + a.events);
      f << to_json_lines(result.events);
    }
    emit(out, g, leaderboard_to_json(result.leaderboard, RankBy::AllGames),
         [&] { print_leaderboard(out, result.leaderboard); });
    return 0;
  }

  Session session(g);
  auto& engine = session.engine();

  if (name == "baseline") {
    const auto r = ingest_members(a.members);
    const auto set = build_baseline_set(r.samples, a.clamp_factor);
    if (!engine.has_game(a.game)) {
      const auto day = a.day.empty()
                           ? std::chrono::floor<std::chrono::days>(set.run_time +
                                                                   std::chrono::hours{12})
                           : parse_utc_day(a.day);
      engine.create_game(a.game, a.site, day);
    }
    engine.publish_baseline(a.game, set);
    out << render(to_json(set));
    return 0;
  }
  if (name == "create") {
    const auto game = engine.create_game(a.game, a.site, parse_utc_day(a.day));
    emit(out, g, game_view_json(game), [&] { print_game(out, game); });
    return 0;
  }
  if (name == "show") {
    const auto game = engine.game(a.game);
    emit(out, g, game_view_json(game), [&] { print_game(out, game); });
    return 0;
  }
  if (name == "open" || name == "lock") {
    name == "open" ? engine.open(a.game) : engine.lock(a.game);
    const auto game = engine.game(a.game);
    emit(out, g, game_view_json(game), [&] { print_game(out, game); });
    return 0;
  }
  if (name == "submit") {
    auto sub = submission_from_json(read_json_file(a.file, "submission"));
    if (!a.player.empty()) sub.player = a.player;
    const auto stored = engine.submit(a.game, std::move(sub));
    emit(out, g, to_json(stored), [&] {
      fmt::print(out, "stored submission for {} in {} at {}\n", stored.player, a.game,
                 format_utc_time(stored.submitted_at));
    });
    return 0;
  }
  if (name == "observe") {
    engine.set_observations(a.game, read_observations(a.obs));
    const auto game = engine.game(a.game);
    emit(out, g, game_view_json(game), [&] {
      fmt::print(out, "{} observations on file for {}\n", game.observations.size(), a.game);
    });
    return 0;
  }
  if (name == "verify") {
    const auto scores = a.obs.empty() ? engine.verify(a.game)
                                      : engine.verify(a.game, read_observations(a.obs));
    emit(out, g, scores_document(a.game, scores), [&] { print_scores(out, a.game, scores); });
    return 0;
  }
  if (name == "scores") {
    const auto scores = engine.scores(a.game);
    emit(out, g, scores_document(a.game, scores), [&] { print_scores(out, a.game, scores); });
    return 0;
  }
  if (name == "leaderboard") {
    const auto by = parse_rank_by(a.rank_by);
    const auto rows = engine.leaderboard(by);
    emit(out, g, leaderboard_to_json(rows, by), [&] { print_leaderboard(out, rows); });
    return 0;
  }
  if (name == "diagnostics") {
    const auto d = engine.diagnostics(a.player);
    emit(out, g, to_json(d), [&] { print_diagnostics(out, d); });
    return 0;
  }
  if (name == "serve") {
    Api api(engine, ApiOptions{a.dev, a.clamp_factor});
    HttpServer server(api);
    fmt::print(out, "serving /v1 on {}:{}\n", a.host, a.port);
    out.flush();
    server.run(a.host, a.port);
    return 0;
  }
  throw Error(ErrorCode::Internal, "unhandled command " + name);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"wxbits: information-gain scoring for weather forecast contests"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Args a;
  app.add_option("--log", g.log, "Event log (JSON lines)")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--at", g.at, "Clock override, YYYY-MM-DDTHH:MM:SSZ");

  const auto game_opt = [&a](CLI::App* s) {
    s->add_option("--game", a.game, "Game id")->required();
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a superensemble member CSV");
  ingest->add_option("--members", a.members, "Member CSV")->required();

  auto* baseline = app.add_subcommand("baseline", "Build and publish a game's baseline");
  baseline->add_option("--members", a.members, "Member CSV")->required();
  game_opt(baseline);
  baseline->add_option("--site", a.site, "Site, when the game is created here")
      ->default_val("unspecified");
  baseline->add_option("--day", a.day, "Forecast day, when the game is created here");
  baseline->add_option("--clamp-factor", a.clamp_factor, "p_min = 1 / (factor * members)")
      ->capture_default_str();

  auto* create = app.add_subcommand("create", "Create a game in Draft");
  game_opt(create);
  create->add_option("--site", a.site, "Station")->required();
  create->add_option("--day", a.day, "Forecast day YYYY-MM-DD")->required();

  game_opt(app.add_subcommand("show", "Show a game"));
  game_opt(app.add_subcommand("open", "Open a game for submissions"));
  game_opt(app.add_subcommand("lock", "Close a game to submissions"));

  auto* submit = app.add_subcommand("submit", "Store a submission from a JSON file");
  game_opt(submit);
  submit->add_option("--file", a.file, "Submission JSON")->required();
  submit->add_option("--player", a.player, "Player id, overriding the file");

  auto* observe = app.add_subcommand("observe", "Record observations from a JSON file");
  game_opt(observe);
  observe->add_option("--obs", a.obs, "Observations JSON")->required();

  auto* verify = app.add_subcommand("verify", "Score a locked game");
  game_opt(verify);
  verify->add_option("--obs", a.obs, "Observations JSON to record first");

  game_opt(app.add_subcommand("scores", "Print a verified game's scores"));

  auto* board = app.add_subcommand("leaderboard", "Rank players over verified games");
  board->add_option("--rank-by", a.rank_by, "all, game1 or game2")
      ->check(CLI::IsMember({"all", "game1", "game2"}))
      ->capture_default_str();

  auto* diag = app.add_subcommand("diagnostics", "Reliability diagnostics for a player");
  diag->add_option("--player", a.player, "Player id")->required();

  auto* sim = app.add_subcommand("simulate", "Run a synthetic season");
  sim->add_option("--players", a.season.players, "Population size")->capture_default_str();
  sim->add_option("--days", a.season.days, "Season length")->capture_default_str();
  sim->add_option("--seed", a.seed, "RNG seed")->capture_default_str();
  sim->add_option("--members", a.season.members, "Members per variable")
      ->capture_default_str();
  sim->add_option("--bias", a.season.member_bias, "Shift added to every member")
      ->capture_default_str();
  sim->add_option("--threads", a.season.threads, "Worker threads, 0 for all cores")
      ->capture_default_str();
  sim->add_option("--events", a.events, "Write the season's event log here");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  serve->add_option("--host", a.host, "Bind address")->capture_default_str();
  serve->add_option("--port", a.port, "Port")->capture_default_str();
  serve->add_flag("--dev", a.dev, "Accept members_path uploads");
  serve->add_option("--clamp-factor", a.clamp_factor, "p_min = 1 / (factor * members)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return run_command(app.get_subcommands().front(), g, a, out);
  } catch (const std::exception& e) {
    const auto error = to_api_error(e);
    fmt::print(err, "error: {}: {}\n", error.code, error.message);
    return error.code == "CorruptLog" || error.code == "Internal" ? 3 : 1;
  }
}

}  // namespace wxbits::tools
