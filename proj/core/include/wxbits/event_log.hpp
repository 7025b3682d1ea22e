#pragma once

// Append-only JSON-lines event log: one object per line with fields
// seq, kind, payload, ts.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wxbits/game.hpp"

namespace wxbits {

std::string to_json_line(const GameEvent& event);
std::string to_json_lines(std::span<const GameEvent> events);

// Throws CorruptLog on malformed lines or a sequence gap.
std::vector<GameEvent> parse_event_log(std::istream& in);
// A missing file is an empty log.
std::vector<GameEvent> read_event_log(const std::string& path);

// Appends and fsyncs one line per event. Not copyable; one writer per file.
class EventLogWriter {
 public:
  explicit EventLogWriter(const std::string& path);
  ~EventLogWriter();
  EventLogWriter(const EventLogWriter&) = delete;
  EventLogWriter& operator=(const EventLogWriter&) = delete;

  void append(const GameEvent& event);

 private:
  std::string path_;
  int fd_ = -1;
};

}  // namespace wxbits
