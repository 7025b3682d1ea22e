#include "wxbits/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wxbits/codec.hpp"
#include "wxbits/error.hpp"

namespace wxbits {

std::string to_json_line(const GameEvent& event) {
  return to_json(event).dump() + "\n";
}

std::string to_json_lines(std::span<const GameEvent> events) {
  std::string out;
  for (const auto& e : events) out += to_json_line(e);
  return out;
}

std::vector<GameEvent> parse_event_log(std::istream& in) {
  std::vector<GameEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    GameEvent event;
    try {
      event = game_event_from_json(Json::parse(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::CorruptLog, e.what(), line_no);
    }
    WXBITS_REQUIRE(event.seq == events.size() + 1, ErrorCode::CorruptLog,
                   "line " + std::to_string(line_no) + ": sequence gap, expected " +
                       std::to_string(events.size() + 1) + " got " +
                       std::to_string(event.seq));
    events.push_back(std::move(event));
  }
  return events;
}

std::vector<GameEvent> read_event_log(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) return {};
  return parse_event_log(in);
}

EventLogWriter::EventLogWriter(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  WXBITS_REQUIRE(fd_ >= 0, ErrorCode::Internal,
                 "cannot open event log '" + path + "': " + std::strerror(errno));
}

EventLogWriter::~EventLogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLogWriter::append(const GameEvent& event) {
  const auto line = to_json_line(event);
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    WXBITS_REQUIRE(n > 0, ErrorCode::Internal,
                   "write to event log '" + path_ + "' failed: " + std::strerror(errno));
    written += static_cast<std::size_t>(n);
  }
  WXBITS_REQUIRE(::fsync(fd_) == 0, ErrorCode::Internal,
                 "fsync of event log '" + path_ + "' failed");
}

}  // namespace wxbits
