#pragma once

// Transport-independent /v1 JSON API over an Engine. The HTTP server and the
// tests both go through Api::handle.

#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "wxbits/engine.hpp"
#include "wxbits/error.hpp"

namespace wxbits {

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::string content_type;
  std::map<std::string, std::string> query;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ApiError {
  std::string code;
  std::string message;
  int http_status = 500;
  std::optional<std::size_t> line;
};

int http_status(ErrorCode code);
// Library errors keep their code; anything else is Internal / 500.
ApiError to_api_error(const std::exception& e);
Json to_json(const ApiError& error);

// Payload of GET /v1/games/{id}/scores; the CLI prints the same document.
Json scores_document(const std::string& game_id, std::span<const ScoreRecord> records);
// Pretty-printed with a trailing newline.
std::string render(const Json& document);

struct ApiOptions {
  // Accept {"members_path": ...} for baseline uploads.
  bool dev_mode = false;
  double clamp_factor = kDefaultClampFactor;
};

class Api {
 public:
  explicit Api(Engine& engine, ApiOptions options = {});

  // Never throws; failures become error responses.
  ApiResponse handle(const ApiRequest& request) const;

 private:
  Json dispatch(const ApiRequest& request, int& status) const;

  Engine& engine_;
  ApiOptions options_;
};

}  // namespace wxbits
