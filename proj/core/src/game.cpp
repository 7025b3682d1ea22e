#include "wxbits/game.hpp"

#include <array>
#include <utility>

#include "wxbits/error.hpp"

namespace wxbits {

namespace {

template <class Enum, std::size_t N>
Enum parse_named(const std::array<std::pair<Enum, std::string_view>, N>& names,
                 std::string_view text, std::string_view what) {
  for (const auto& [value, name] : names) {
    if (name == text) return value;
  }
  throw Error(ErrorCode::ValidationError,
              "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

template <class Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& names,
                         Enum value) {
  for (const auto& [v, name] : names) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<GameState, std::string_view>, 5> kStateNames{{
    {GameState::Draft, "Draft"},
    {GameState::BaselinePublished, "BaselinePublished"},
    {GameState::Open, "Open"},
    {GameState::Locked, "Locked"},
    {GameState::Verified, "Verified"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 3> kEventKindNames{{
    {EventKind::OverUnder, "over_under"},
    {EventKind::Bins, "bins"},
    {EventKind::Legacy, "legacy"},
}};

constexpr std::array<std::pair<GameEventKind, std::string_view>, 7> kGameEventNames{{
    {GameEventKind::Created, "Created"},
    {GameEventKind::BaselineSet, "BaselineSet"},
    {GameEventKind::Opened, "Opened"},
    {GameEventKind::SubmissionAccepted, "SubmissionAccepted"},
    {GameEventKind::Locked, "Locked"},
    {GameEventKind::ObservationSet, "ObservationSet"},
    {GameEventKind::Scored, "Scored"},
}};

}  // namespace

std::string_view to_string(GameState state) { return name_of(kStateNames, state); }
GameState parse_game_state(std::string_view name) {
  return parse_named(kStateNames, name, "game state");
}

std::string_view to_string(EventKind kind) { return name_of(kEventKindNames, kind); }
EventKind parse_event_kind(std::string_view name) {
  return parse_named(kEventKindNames, name, "score kind");
}

std::string_view to_string(GameEventKind kind) {
  return name_of(kGameEventNames, kind);
}
GameEventKind parse_game_event_kind(std::string_view name) {
  return parse_named(kGameEventNames, name, "event kind");
}

std::string ScoreRecord::event_label() const {
  switch (kind) {
    case EventKind::OverUnder:
      return "q" + std::to_string(static_cast<int>(percentile * 100.0 + 0.5));
    case EventKind::Bins: return "bins";
    case EventKind::Legacy: return "legacy";
  }
  return "?";
}

}  // namespace wxbits
