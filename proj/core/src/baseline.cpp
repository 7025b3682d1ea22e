#include "wxbits/baseline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include "wxbits/error.hpp"

namespace wxbits {

std::string SuperensembleSample::member_id() const {
  return model + "-" + std::to_string(member);
}

bool Game2Bin::contains(double value) const {
  return (!low || value >= *low) && (!high || value < *high);
}

std::size_t BaselineSpec::bin_index(const Observation& obs) const {
  WXBITS_REQUIRE(has_bins(), ErrorCode::DegenerateEnsemble,
                 "no bins were published for " +
                     std::string(to_string(variable.kind)));
  WXBITS_REQUIRE(obs.variable.kind == variable.kind, ErrorCode::UnitMismatch,
                 "observation variable does not match the baseline");
  if (obs.trace) return 0;
  const auto steps = to_steps(obs.value, variable);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const auto& bin = bins[k];
    const bool above_low = !bin.low || steps >= to_steps(*bin.low, variable);
    const bool below_high = !bin.high || steps < to_steps(*bin.high, variable);
    if (above_low && below_high) return k;
  }
  // Only reachable for values under a bounded first bin, which validation
  // rules out for non-negative variables.
  return 0;
}

const BaselineSpec* BaselineSet::find(VariableKind kind) const {
  for (const auto& spec : variables) {
    if (spec.variable.kind == kind) return &spec;
  }
  return nullptr;
}

double percentile(std::span<const double> values, double q) {
  WXBITS_REQUIRE(!values.empty(), ErrorCode::EmptyInput,
                 "percentile of an empty sample");
  WXBITS_REQUIRE(q >= 0.0 && q <= 1.0, ErrorCode::DomainError,
                 "percentile fraction outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (rank - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

// All samples must describe one variable from one run.
const VariableSpec& check_uniform(std::span<const SuperensembleSample> samples) {
  WXBITS_REQUIRE(!samples.empty(), ErrorCode::InsufficientMembers,
                 "no superensemble members");
  const auto& first = samples.front();
  for (const auto& s : samples) {
    WXBITS_REQUIRE(s.variable == first.variable && s.run_time == first.run_time,
                   ErrorCode::SchemaError,
                   "samples mix variables or run times");
    WXBITS_REQUIRE(std::isfinite(s.value), ErrorCode::DomainError,
                   "member value is not finite");
  }
  return first.variable;
}

std::vector<double> values_of(std::span<const SuperensembleSample> samples) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.value);
  return values;
}

}  // namespace

std::vector<Game1Threshold> build_game1_baseline(
    std::span<const SuperensembleSample> samples, double clamp_factor) {
  const auto& spec = check_uniform(samples);
  const int n = static_cast<int>(samples.size());
  WXBITS_REQUIRE(n >= 2, ErrorCode::InsufficientMembers,
                 "over/under baseline needs at least 2 members");
  const auto values = values_of(samples);
  const auto clamp = Clamp::for_members(n, kOverUnderArity, clamp_factor);

  std::vector<Game1Threshold> out;
  for (double q : kGame1Percentiles) {
    const auto threshold_steps = to_steps(percentile(values, q), spec);
    // Members are compared as they would be reported, at the variable's
    // resolution.
    const int over = static_cast<int>(std::count_if(
        values.begin(), values.end(),
        [&](double v) { return to_steps(v, spec) > threshold_steps; }));
    const std::vector<double> empirical = {
        static_cast<double>(over) / n, static_cast<double>(n - over) / n};
    out.push_back({q, from_steps(threshold_steps, spec), over,
                   clamp_pmf(empirical, clamp)});
  }
  return out;
}

Game2Baseline build_game2_bins(std::span<const SuperensembleSample> samples,
                               double clamp_factor) {
  const auto& spec = check_uniform(samples);
  const int n = static_cast<int>(samples.size());
  WXBITS_REQUIRE(n >= static_cast<int>(kBinArity), ErrorCode::DegenerateEnsemble,
                 "bins need at least 10 members");
  const auto values = values_of(samples);
  std::vector<std::int64_t> member_steps;
  member_steps.reserve(values.size());
  for (double v : values) member_steps.push_back(to_steps(v, spec));
  WXBITS_REQUIRE(std::set<std::int64_t>(member_steps.begin(), member_steps.end())
                         .size() >= 2,
                 ErrorCode::DegenerateEnsemble,
                 "bins need at least 2 distinct member values");

  // Interior edges at the quantized deciles, repaired to be strictly
  // increasing (and above the support floor) one resolution step at a time.
  std::vector<std::int64_t> edges;
  for (std::size_t i = 1; i < kBinArity; ++i) {
    auto e = to_steps(percentile(values, static_cast<double>(i) / kBinArity), spec);
    if (edges.empty()) {
      if (spec.non_negative) e = std::max<std::int64_t>(e, 1);
    } else {
      e = std::max(e, edges.back() + 1);
    }
    edges.push_back(e);
  }

  Game2Baseline out;
  out.bins.resize(kBinArity);
  for (std::size_t k = 0; k < kBinArity; ++k) {
    auto& bin = out.bins[k];
    if (k > 0) {
      bin.low = from_steps(edges[k - 1], spec);
    } else if (spec.non_negative) {
      bin.low = 0.0;
    }
    if (k + 1 < kBinArity) bin.high = from_steps(edges[k], spec);
  }
  for (auto s : member_steps) {
    const auto k = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), s) - edges.begin());
    ++out.bins[k].members;
  }
  std::vector<double> empirical(kBinArity);
  for (std::size_t k = 0; k < kBinArity; ++k) {
    empirical[k] = static_cast<double>(out.bins[k].members) / n;
  }
  out.masses = clamp_pmf(empirical, Clamp::for_members(n, kBinArity, clamp_factor));
  return out;
}

BaselineSpec build_baseline(std::span<const SuperensembleSample> samples,
                            double clamp_factor) {
  const auto& spec = check_uniform(samples);
  BaselineSpec out;
  out.variable = spec;
  out.n_members = static_cast<int>(samples.size());
  out.clamp_factor = clamp_factor;
  out.run_time = samples.front().run_time;
  out.thresholds = build_game1_baseline(samples, clamp_factor);
  try {
    auto g2 = build_game2_bins(samples, clamp_factor);
    out.bins = std::move(g2.bins);
    out.bin_masses = std::move(g2.masses);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateEnsemble) throw;
  }
  return out;
}

BaselineSet build_baseline_set(std::span<const SuperensembleSample> samples,
                               double clamp_factor) {
  WXBITS_REQUIRE(!samples.empty(), ErrorCode::EmptyInput,
                 "no superensemble members");
  BaselineSet set;
  set.run_time = samples.front().run_time;
  set.published_at = set.run_time;
  for (const auto& s : samples) {
    WXBITS_REQUIRE(s.run_time == set.run_time, ErrorCode::SchemaError,
                   "members come from more than one run");
  }
  for (auto kind : kAllVariables) {
    std::vector<SuperensembleSample> subset;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(subset),
                 [&](const auto& s) { return s.variable.kind == kind; });
    if (!subset.empty()) set.variables.push_back(build_baseline(subset, clamp_factor));
  }
  return set;
}

namespace {

constexpr std::string_view kHeader = "run_time,model,member,variable,value,trace";

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

SuperensembleSample parse_row(std::string_view line) {
  const auto fields = split_commas(line);
  WXBITS_REQUIRE(fields.size() == 6, ErrorCode::ParseError,
                 "expected 6 fields, got " + std::to_string(fields.size()));
  SuperensembleSample s;
  s.run_time = parse_utc_time(fields[0]);
  const auto since_midnight =
      s.run_time - std::chrono::floor<std::chrono::days>(s.run_time);
  WXBITS_REQUIRE(since_midnight == std::chrono::hours{12}, ErrorCode::ParseError,
                 "run_time must be a 1200 UTC run");
  s.model = std::string(fields[1]);
  WXBITS_REQUIRE(!s.model.empty(), ErrorCode::ParseError, "empty model name");
  const auto member = fields[2];
  auto [ptr, ec] = std::from_chars(member.data(), member.data() + member.size(), s.member);
  WXBITS_REQUIRE(ec == std::errc{} && ptr == member.data() + member.size() &&
                     s.member >= 0,
                 ErrorCode::ParseError, "member must be a non-negative integer");
  s.variable = VariableSpec::of(parse_variable_kind(fields[3]));
  s.value = parse_decimal(fields[4]);
  const auto trace = fields[5];
  if (trace == "1" || trace == "true") {
    s.trace = true;
  } else {
    WXBITS_REQUIRE(trace.empty() || trace == "0" || trace == "false",
                   ErrorCode::ParseError, "trace must be 0/1/true/false");
  }
  Observation as_obs{s.variable, s.value, s.trace, {}};
  as_obs.validate();
  return s;
}

}  // namespace

IngestResult parse_members(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  IngestResult result;
  std::set<std::tuple<VariableKind, std::string, int>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!have_header) {
      WXBITS_REQUIRE(line == kHeader, ErrorCode::SchemaError,
                     "member file must start with header '" +
                         std::string(kHeader) + "'");
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    try {
      auto sample = parse_row(line);
      const bool fresh =
          seen.emplace(sample.variable.kind, sample.model, sample.member).second;
      WXBITS_REQUIRE(fresh, ErrorCode::ParseError,
                     "duplicate member " + sample.member_id() + " for " +
                         std::string(to_string(sample.variable.kind)));
      ++result.counts[sample.variable.kind];
      result.samples.push_back(std::move(sample));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaError) throw;
      throw Error(ErrorCode::ParseError, e.what(), line_no);
    }
  }
  WXBITS_REQUIRE(have_header, ErrorCode::SchemaError, "member file is empty");
  WXBITS_REQUIRE(!result.samples.empty(), ErrorCode::SchemaError,
                 "member file has no rows");
  return result;
}

IngestResult ingest_members(const std::string& path) {
  std::ifstream in(path);
  WXBITS_REQUIRE(in.good(), ErrorCode::SchemaError,
                 "cannot open member file '" + path + "'");
  return parse_members(in);
}

}  // namespace wxbits
