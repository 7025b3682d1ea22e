#include "wxbits/codec.hpp"

#include <utility>

#include "wxbits/error.hpp"
#include "wxbits/scoring.hpp"

namespace wxbits {

namespace {

Json dec(double v) { return format_decimal(v); }

Json opt_dec(const std::optional<double>& v) {
  return v ? dec(*v) : Json(nullptr);
}

Json dec_array(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(dec(v));
  return out;
}

const Json& field(const Json& j, const char* key) {
  WXBITS_REQUIRE(j.is_object(), ErrorCode::ValidationError,
                 "expected a JSON object");
  const auto it = j.find(key);
  WXBITS_REQUIRE(it != j.end(), ErrorCode::ValidationError,
                 std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const Json& j, const char* key) {
  const auto& v = field(j, key);
  WXBITS_REQUIRE(v.is_string(), ErrorCode::ValidationError,
                 std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double as_decimal(const Json& v, const char* what) {
  WXBITS_REQUIRE(v.is_string(), ErrorCode::ValidationError,
                 std::string(what) + " must be a decimal string");
  return parse_decimal(v.get<std::string>());
}

double get_decimal(const Json& j, const char* key) {
  return as_decimal(field(j, key), key);
}

std::optional<double> get_opt_decimal(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return as_decimal(v, key);
}

std::vector<double> get_decimal_array(const Json& j, const char* key) {
  const auto& v = field(j, key);
  WXBITS_REQUIRE(v.is_array(), ErrorCode::ValidationError,
                 std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_decimal(e, key));
  return out;
}

bool get_bool(const Json& j, const char* key, std::optional<bool> fallback = {}) {
  if (fallback && (!j.is_object() || !j.contains(key))) return *fallback;
  const auto& v = field(j, key);
  WXBITS_REQUIRE(v.is_boolean(), ErrorCode::ValidationError,
                 std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

template <class Int>
Int get_int(const Json& j, const char* key) {
  const auto& v = field(j, key);
  WXBITS_REQUIRE(v.is_number_integer(), ErrorCode::ValidationError,
                 std::string("field '") + key + "' must be an integer");
  return v.get<Int>();
}

// Runs a decoder, converting library exceptions into ValidationError.
template <class F>
auto decoding(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ValidationError,
                std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const VariableSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["unit"] = to_string(spec.unit);
  j["resolution"] = dec(spec.resolution);
  j["open_ended_high"] = spec.open_ended_high;
  return j;
}

VariableSpec variable_spec_from_json(const Json& j) {
  return decoding("variable", [&] {
    const auto spec = VariableSpec::of(parse_variable_kind(get_string(j, "kind")));
    if (j.contains("unit")) {
      WXBITS_REQUIRE(parse_unit(get_string(j, "unit")) == spec.unit,
                     ErrorCode::UnitMismatch,
                     "unit does not match variable " +
                         std::string(to_string(spec.kind)));
    }
    return spec;
  });
}

Json to_json(const Observation& obs) {
  Json j;
  j["variable"] = to_string(obs.variable.kind);
  j["value"] = dec(obs.value);
  j["trace"] = obs.trace;
  j["valid_day"] = obs.valid_day;
  return j;
}

Observation observation_from_json(const Json& j, std::optional<UtcDay> default_day) {
  return decoding("observation", [&] {
    Observation obs;
    obs.variable = VariableSpec::of(parse_variable_kind(get_string(j, "variable")));
    obs.value = get_decimal(j, "value");
    obs.trace = get_bool(j, "trace", false);
    if (j.contains("valid_day")) {
      obs.valid_day = format_utc_day(parse_utc_day(get_string(j, "valid_day")));
    } else if (default_day) {
      obs.valid_day = format_utc_day(*default_day);
    }
    obs.validate();
    return obs;
  });
}

Json to_json(const CreditAllocation& alloc) {
  Json j = Json::array();
  for (int c : alloc.credits()) j.push_back(c);
  return j;
}

CreditAllocation allocation_from_json(const Json& j) {
  WXBITS_REQUIRE(j.is_array(), ErrorCode::InvalidAllocation,
                 "allocation must be an array of integer credits");
  std::vector<int> credits;
  for (const auto& c : j) {
    WXBITS_REQUIRE(c.is_number_integer(), ErrorCode::InvalidAllocation,
                   "credits must be integers");
    const auto v = c.get<long long>();
    WXBITS_REQUIRE(v >= 0 && v <= kCreditBudget, ErrorCode::InvalidAllocation,
                   "credits must be integers in [0, 100]");
    credits.push_back(static_cast<int>(v));
  }
  return CreditAllocation(std::move(credits));
}

Json to_json(const BaselineSpec& spec) {
  Json j;
  j["variable"] = to_json(spec.variable);
  j["n_members"] = spec.n_members;
  j["run_time"] = format_utc_time(spec.run_time);
  Json clamp;
  clamp["factor"] = dec(spec.clamp_factor);
  clamp["p_min"] = dec(spec.p_min());
  clamp["p_max_binary"] = dec(spec.binary_clamp().p_max);
  clamp["p_max_bins"] = dec(spec.bin_clamp().p_max);
  j["clamp"] = clamp;
  Json thresholds = Json::array();
  for (const auto& t : spec.thresholds) {
    Json tj;
    tj["percentile"] = dec(t.percentile);
    tj["value"] = dec(t.value);
    tj["members_over"] = t.members_over;
    tj["b_over"] = dec(t.baseline[kOver]);
    tj["b_under"] = dec(t.baseline[kUnder]);
    thresholds.push_back(std::move(tj));
  }
  j["thresholds"] = std::move(thresholds);
  Json bins = Json::array();
  for (std::size_t k = 0; k < spec.bins.size(); ++k) {
    const auto& bin = spec.bins[k];
    Json bj;
    bj["low"] = opt_dec(bin.low);
    bj["high"] = opt_dec(bin.high);
    bj["members"] = bin.members;
    bj["b"] = dec(spec.bin_masses[k]);
    bins.push_back(std::move(bj));
  }
  j["bins"] = std::move(bins);
  return j;
}

BaselineSpec baseline_spec_from_json(const Json& j) {
  return decoding("baseline", [&] {
    BaselineSpec spec;
    spec.variable = variable_spec_from_json(field(j, "variable"));
    spec.n_members = get_int<int>(j, "n_members");
    WXBITS_REQUIRE(spec.n_members >= 2, ErrorCode::InsufficientMembers,
                   "baseline needs at least 2 members");
    spec.run_time = parse_utc_time(get_string(j, "run_time"));
    spec.clamp_factor = get_decimal(field(j, "clamp"), "factor");
    WXBITS_REQUIRE(spec.clamp_factor > 0.0, ErrorCode::ConfigError,
                   "clamp factor must be positive");
    const auto binary = spec.binary_clamp();
    for (const auto& tj : field(j, "thresholds")) {
      Game1Threshold t;
      t.percentile = get_decimal(tj, "percentile");
      t.value = get_decimal(tj, "value");
      t.members_over = get_int<int>(tj, "members_over");
      t.baseline = Pmf({get_decimal(tj, "b_over"), get_decimal(tj, "b_under")}, binary);
      spec.thresholds.push_back(std::move(t));
    }
    WXBITS_REQUIRE(!spec.thresholds.empty(), ErrorCode::ValidationError,
                   "baseline has no thresholds");
    std::vector<double> masses;
    for (const auto& bj : field(j, "bins")) {
      Game2Bin bin;
      bin.low = get_opt_decimal(bj, "low");
      bin.high = get_opt_decimal(bj, "high");
      bin.members = get_int<int>(bj, "members");
      masses.push_back(get_decimal(bj, "b"));
      spec.bins.push_back(bin);
    }
    if (!spec.bins.empty()) {
      WXBITS_REQUIRE(spec.bins.size() == kBinArity, ErrorCode::ArityMismatch,
                     "baseline must publish exactly 10 bins");
      spec.bin_masses = Pmf(std::move(masses), spec.bin_clamp());
    }
    return spec;
  });
}

Json to_json(const BaselineSet& set) {
  Json j;
  j["run_time"] = format_utc_time(set.run_time);
  j["published_at"] = format_utc_time(set.published_at);
  Json vars = Json::array();
  for (const auto& spec : set.variables) vars.push_back(to_json(spec));
  j["variables"] = std::move(vars);
  return j;
}

BaselineSet baseline_set_from_json(const Json& j) {
  return decoding("baseline set", [&] {
    BaselineSet set;
    set.run_time = parse_utc_time(get_string(j, "run_time"));
    set.published_at = parse_utc_time(get_string(j, "published_at"));
    for (const auto& vj : field(j, "variables")) {
      auto spec = baseline_spec_from_json(vj);
      WXBITS_REQUIRE(spec.run_time == set.run_time, ErrorCode::SchemaError,
                     "baseline variables come from different runs");
      WXBITS_REQUIRE(set.find(spec.variable.kind) == nullptr,
                     ErrorCode::ValidationError, "duplicate baseline variable");
      set.variables.push_back(std::move(spec));
    }
    WXBITS_REQUIRE(!set.variables.empty(), ErrorCode::ValidationError,
                   "baseline set has no variables");
    return set;
  });
}

Json to_json(const Submission& sub) {
  Json j;
  j["player"] = sub.player;
  j["game"] = sub.game_id;
  j["submitted_at"] = format_utc_time(sub.submitted_at);
  j["opted_out"] = {{"game1", sub.opted_out.game1}, {"game2", sub.opted_out.game2}};
  Json g1 = Json::object();
  for (const auto& [kind, allocs] : sub.game1) {
    Json arr = Json::array();
    for (const auto& a : allocs) arr.push_back(to_json(a));
    g1[std::string(to_string(kind))] = std::move(arr);
  }
  j["game1"] = std::move(g1);
  Json g2 = Json::object();
  for (const auto& [kind, alloc] : sub.game2) {
    g2[std::string(to_string(kind))] = to_json(alloc);
  }
  j["game2"] = std::move(g2);
  Json det = Json::object();
  for (const auto& [kind, value] : sub.deterministic) {
    det[std::string(to_string(kind))] = dec(value);
  }
  j["deterministic"] = std::move(det);
  return j;
}

Submission submission_from_json(const Json& j) {
  return decoding("submission", [&] {
    WXBITS_REQUIRE(j.is_object(), ErrorCode::ValidationError,
                   "submission must be an object");
    Submission sub;
    if (j.contains("player")) sub.player = get_string(j, "player");
    if (j.contains("game")) sub.game_id = get_string(j, "game");
    if (j.contains("submitted_at")) {
      sub.submitted_at = parse_utc_time(get_string(j, "submitted_at"));
    }
    if (j.contains("opted_out")) {
      const auto& o = field(j, "opted_out");
      sub.opted_out.game1 = get_bool(o, "game1", false);
      sub.opted_out.game2 = get_bool(o, "game2", false);
    }
    if (j.contains("game1")) {
      for (const auto& [name, arr] : field(j, "game1").items()) {
        WXBITS_REQUIRE(arr.is_array(), ErrorCode::InvalidAllocation,
                       "game1 entries must be arrays of allocations");
        auto& allocs = sub.game1[parse_variable_kind(name)];
        for (const auto& a : arr) allocs.push_back(allocation_from_json(a));
      }
    }
    if (j.contains("game2")) {
      for (const auto& [name, a] : field(j, "game2").items()) {
        sub.game2.emplace(parse_variable_kind(name), allocation_from_json(a));
      }
    }
    if (j.contains("deterministic")) {
      for (const auto& [name, v] : field(j, "deterministic").items()) {
        sub.deterministic[parse_variable_kind(name)] = as_decimal(v, "deterministic");
      }
    }
    return sub;
  });
}

Json to_json(const ScoreRecord& r) {
  Json j;
  j["game"] = r.game_id;
  j["player"] = r.player;
  j["variable"] = to_string(r.variable);
  j["event"] = r.event_label();
  j["kind"] = to_string(r.kind);
  if (r.kind == EventKind::OverUnder) {
    j["percentile"] = dec(r.percentile);
    j["threshold"] = dec(r.threshold);
  }
  if (r.kind != EventKind::Legacy) {
    j["issued"] = dec_array(r.issued);
    j["baseline"] = dec_array(r.baseline);
    j["outcome"] = r.outcome ? Json(*r.outcome) : Json(nullptr);
    j["bits"] = dec(r.bits);
    j["pushed"] = r.pushed;
  }
  if (r.kind == EventKind::Bins) j["per_bin_bits"] = dec_array(r.per_bin_bits);
  if (r.kind == EventKind::Legacy) j["legacy_points"] = dec(r.legacy_points);
  return j;
}

ScoreRecord score_record_from_json(const Json& j) {
  return decoding("score record", [&] {
    ScoreRecord r;
    r.game_id = get_string(j, "game");
    r.player = get_string(j, "player");
    r.variable = parse_variable_kind(get_string(j, "variable"));
    r.kind = parse_event_kind(get_string(j, "kind"));
    if (r.kind == EventKind::OverUnder) {
      r.percentile = get_decimal(j, "percentile");
      r.threshold = get_decimal(j, "threshold");
    }
    if (r.kind != EventKind::Legacy) {
      r.issued = get_decimal_array(j, "issued");
      r.baseline = get_decimal_array(j, "baseline");
      const auto& outcome = field(j, "outcome");
      if (!outcome.is_null()) r.outcome = outcome.get<std::size_t>();
      r.bits = get_decimal(j, "bits");
      r.pushed = get_bool(j, "pushed");
    }
    if (r.kind == EventKind::Bins) r.per_bin_bits = get_decimal_array(j, "per_bin_bits");
    if (r.kind == EventKind::Legacy) r.legacy_points = get_decimal(j, "legacy_points");
    return r;
  });
}

Json scores_to_json(std::span<const ScoreRecord> records) {
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr;
}

std::vector<ScoreRecord> scores_from_json(const Json& j) {
  WXBITS_REQUIRE(j.is_array(), ErrorCode::ValidationError,
                 "scores must be an array");
  std::vector<ScoreRecord> out;
  for (const auto& r : j) out.push_back(score_record_from_json(r));
  return out;
}

Json game_view_json(const Game& game) {
  Json j;
  j["id"] = game.id;
  j["site"] = game.site;
  j["forecast_day"] = format_utc_day(game.forecast_day);
  j["state"] = to_string(game.state);
  j["baseline_run_time"] = format_utc_time(game.baseline_run_time());
  j["deadline"] = format_utc_time(game.deadline());
  j["baseline"] = game.baseline ? to_json(*game.baseline) : Json(nullptr);
  Json players = Json::array();
  for (const auto& [player, sub] : game.submissions) players.push_back(player);
  j["players"] = std::move(players);
  Json obs = Json::array();
  for (const auto& [kind, o] : game.observations) obs.push_back(to_json(o));
  j["observations"] = std::move(obs);
  return j;
}

Json game_state_json(const Game& game) {
  Json j = game_view_json(game);
  Json subs = Json::array();
  for (const auto& [player, sub] : game.submissions) subs.push_back(to_json(sub));
  j["submissions"] = std::move(subs);
  j["scores"] = scores_to_json(game.scores);
  return j;
}

Json to_json(const GameEvent& event) {
  Json j;
  j["seq"] = event.seq;
  j["kind"] = to_string(event.kind);
  j["payload"] = event.payload;
  j["ts"] = format_utc_time(event.ts);
  return j;
}

GameEvent game_event_from_json(const Json& j) {
  return decoding("event", [&] {
    GameEvent e;
    e.seq = get_int<std::uint64_t>(j, "seq");
    e.kind = parse_game_event_kind(get_string(j, "kind"));
    e.payload = field(j, "payload");
    WXBITS_REQUIRE(e.payload.is_object(), ErrorCode::ValidationError,
                   "event payload must be an object");
    e.ts = parse_utc_time(get_string(j, "ts"));
    return e;
  });
}

Json to_json(const Decomposition& d) {
  Json j;
  j["rel_bits"] = dec(d.rel_bits);
  j["dsc_bits"] = dec(d.dsc_bits);
  j["unc_bits"] = dec(d.unc_bits);
  j["mean_ign_bits"] = dec(d.mean_ign_bits);
  j["n_events"] = d.n_events;
  return j;
}

Json to_json(const ReliabilityPoint& p) {
  Json j;
  j["f"] = dec(p.f);
  j["obs_freq"] = dec(p.obs_freq);
  j["n"] = p.n;
  return j;
}

namespace {

Json stream_json(const std::optional<StreamDiagnostics>& s) {
  if (!s) return nullptr;
  Json j;
  j["decomposition"] = to_json(s->decomposition);
  Json curve = Json::array();
  for (const auto& p : s->reliability) curve.push_back(to_json(p));
  j["reliability"] = std::move(curve);
  return j;
}

}  // namespace

Json to_json(const PlayerDiagnostics& d) {
  Json j;
  j["player"] = d.player;
  j["game1"] = stream_json(d.game1);
  j["game2"] = stream_json(d.game2);
  return j;
}

Json leaderboard_to_json(std::span<const LeaderboardRow> rows, RankBy by) {
  Json j;
  j["rank_by"] = to_string(by);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json rj;
    rj["rank"] = r.rank;
    rj["player"] = r.player;
    rj["mean_bits"] = opt_dec(r.mean_bits);
    rj["mean_bits_game1"] = opt_dec(r.mean_bits_game1);
    rj["mean_bits_game2"] = opt_dec(r.mean_bits_game2);
    rj["n_events"] = r.n_events;
    rj["n_game1"] = r.n_game1;
    rj["n_game2"] = r.n_game2;
    arr.push_back(std::move(rj));
  }
  j["rows"] = std::move(arr);
  return j;
}

}  // namespace wxbits
