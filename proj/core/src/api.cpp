#include "wxbits/api.hpp"

#include <sstream>
#include <vector>

#include "wxbits/codec.hpp"
#include "wxbits/schema.hpp"

namespace wxbits {

namespace {

// Routing failures that are not library errors.
struct RouteError {
  int status;
  std::string code;
  std::string message;
};

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

Json parse_body(const ApiRequest& request) {
  if (request.body.empty()) return Json::object();
  try {
    return Json::parse(request.body);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("request body is not JSON: ") + e.what());
  }
}

Json validated_body(const ApiRequest& request, std::string_view schema_name) {
  auto body = parse_body(request);
  validate_against(body, schema_name);
  return body;
}

bool is_csv(const std::string& content_type) {
  return content_type.rfind("text/csv", 0) == 0 ||
         content_type.rfind("text/plain", 0) == 0;
}

std::vector<Observation> observations_from(const Json& body) {
  std::vector<Observation> out;
  for (const auto& oj : body.at("observations")) out.push_back(observation_from_json(oj));
  return out;
}

[[noreturn]] void method_not_allowed(const ApiRequest& request) {
  throw RouteError{405, "MethodNotAllowed",
                   request.method + " is not supported on " + request.path};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::GameNotFound:
    case ErrorCode::PlayerNotFound:
      return 404;
    case ErrorCode::GameExists:
    case ErrorCode::WrongState:
    case ErrorCode::GameNotOpen:
    case ErrorCode::MissingObservation:
    case ErrorCode::AlreadyVerified:
    case ErrorCode::ConflictingEvent:
      return 409;
    case ErrorCode::GameLocked:
    case ErrorCode::DeadlinePassed:
      return 423;
    case ErrorCode::CorruptLog:
    case ErrorCode::Internal:
      return 500;
    default:
      return 400;
  }
}

ApiError to_api_error(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {std::string(to_string(err->code())), err->what(), http_status(err->code()),
            err->line()};
  }
  return {std::string(to_string(ErrorCode::Internal)), e.what(), 500, std::nullopt};
}

Json to_json(const ApiError& error) {
  Json j;
  j["code"] = error.code;
  j["message"] = error.message;
  j["http_status"] = error.http_status;
  if (error.line) j["line"] = *error.line;
  return j;
}

Json scores_document(const std::string& game_id, std::span<const ScoreRecord> records) {
  Json j;
  j["game"] = game_id;
  j["scores"] = scores_to_json(records);
  return j;
}

std::string render(const Json& document) { return document.dump(2) + "\n"; }

Api::Api(Engine& engine, ApiOptions options) : engine_(engine), options_(options) {}

ApiResponse Api::handle(const ApiRequest& request) const {
  ApiResponse response;
  try {
    int status = 200;
    const auto body = dispatch(request, status);
    response.status = status;
    response.body = render(body);
  } catch (const RouteError& e) {
    response.status = e.status;
    response.body = render(to_json(ApiError{e.code, e.message, e.status, std::nullopt}));
  } catch (const std::exception& e) {
    const auto error = to_api_error(e);
    response.status = error.http_status;
    response.body = render(to_json(error));
  }
  return response;
}

Json Api::dispatch(const ApiRequest& request, int& status) const {
  const auto parts = split_path(request.path);
  const auto& method = request.method;
  if (parts.empty() || parts[0] != "v1") {
    throw RouteError{404, "NotFound", "no route for " + request.path};
  }
  const std::size_t n = parts.size();

  if (n == 2 && parts[1] == "games") {
    if (method != "POST") method_not_allowed(request);
    const auto body = validated_body(request, "create_game");
    const auto game = engine_.create_game(body.at("id").get<std::string>(),
                                          body.at("site").get<std::string>(),
                                          parse_utc_day(body.at("forecast_day").get<std::string>()));
    status = 201;
    return game_view_json(game);
  }

  if (n == 2 && parts[1] == "leaderboard") {
    if (method != "GET") method_not_allowed(request);
    auto by = RankBy::AllGames;
    if (const auto it = request.query.find("rank_by"); it != request.query.end()) {
      by = parse_rank_by(it->second);
    }
    return leaderboard_to_json(engine_.leaderboard(by), by);
  }

  if (n == 4 && parts[1] == "players" && parts[3] == "diagnostics") {
    if (method != "GET") method_not_allowed(request);
    return to_json(engine_.diagnostics(parts[2]));
  }

  if (n >= 3 && parts[1] == "games") {
    const auto& id = parts[2];
    if (n == 3) {
      if (method != "GET") method_not_allowed(request);
      return game_view_json(engine_.game(id));
    }
    const auto& action = parts[3];
    if (n == 5 && action == "submissions") {
      if (method != "PUT") method_not_allowed(request);
      const auto body = validated_body(request, "submission");
      auto sub = submission_from_json(body);
      WXBITS_REQUIRE(sub.player.empty() || sub.player == parts[4],
                     ErrorCode::ValidationError, "player in body does not match the URL");
      WXBITS_REQUIRE(sub.game_id.empty() || sub.game_id == id, ErrorCode::ValidationError,
                     "game in body does not match the URL");
      sub.player = parts[4];
      return to_json(engine_.submit(id, std::move(sub)));
    }
    if (n != 4) throw RouteError{404, "NotFound", "no route for " + request.path};

    if (action == "scores") {
      if (method != "GET") method_not_allowed(request);
      return scores_document(id, engine_.scores(id));
    }
    if (method != "POST") method_not_allowed(request);
    if (action == "baseline") {
      IngestResult ingested;
      if (is_csv(request.content_type)) {
        std::istringstream in(request.body);
        ingested = parse_members(in);
      } else {
        const auto body = parse_body(request);
        WXBITS_REQUIRE(options_.dev_mode && body.contains("members_path") &&
                           body["members_path"].is_string(),
                       ErrorCode::ValidationError,
                       "baseline upload must be a text/csv members file");
        ingested = ingest_members(body["members_path"].get<std::string>());
      }
      const auto baseline = build_baseline_set(ingested.samples, options_.clamp_factor);
      engine_.publish_baseline(id, baseline);
      return to_json(baseline);
    }
    if (action == "open") {
      engine_.open(id);
      return game_view_json(engine_.game(id));
    }
    if (action == "lock") {
      engine_.lock(id);
      return game_view_json(engine_.game(id));
    }
    if (action == "observations") {
      const auto body = validated_body(request, "observations");
      engine_.set_observations(id, observations_from(body));
      return game_view_json(engine_.game(id));
    }
    if (action == "verify") {
      const auto body = parse_body(request);
      if (body.contains("observations")) {
        validate_against(body, "observations");
        return scores_document(id, engine_.verify(id, observations_from(body)));
      }
      return scores_document(id, engine_.verify(id));
    }
  }
  throw RouteError{404, "NotFound", "no route for " + request.path};
}

}  // namespace wxbits
