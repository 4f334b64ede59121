#include "rscatter/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "rscatter/errors.hpp"
#include "rscatter/rng.hpp"

namespace rscatter {

namespace {

constexpr int kFormatVersion = 1;

template <typename Enum>
struct Names {
  Enum value;
  const char* name;
};

constexpr Names<ProtocolKind> kProtocolNames[] = {
    {ProtocolKind::scatter, "scatter"},
    {ProtocolKind::ssa_pf, "ssa_pf"},
    {ProtocolKind::ssa_gp, "ssa_gp"},
    {ProtocolKind::pair_gather, "pair_gather"},
    {ProtocolKind::deterministic_stub, "deterministic_stub"},
    {ProtocolKind::reference_agp, "reference_agp"},
    {ProtocolKind::reference_apf, "reference_apf"},
};

constexpr Names<StopRule> kStopNames[] = {
    {StopRule::none, "none"},
    {StopRule::no_multiplicity, "no_multiplicity"},
    {StopRule::gathered, "gathered"},
    {StopRule::pattern_reached, "pattern_reached"},
};

constexpr Names<PositionMode> kPositionNames[] = {
    {PositionMode::explicit_list, "explicit"},
    {PositionMode::random, "random"},
    {PositionMode::random_with_duplicates, "random_with_duplicates"},
    {PositionMode::colocated, "colocated"},
};

constexpr Names<FrameMode> kFrameNames[] = {
    {FrameMode::identity, "identity"},
    {FrameMode::random, "random"},
};

template <typename Enum, std::size_t N>
std::string name_of(const Names<Enum> (&table)[N], Enum value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
bool lookup(const Names<Enum> (&table)[N], const std::string& name, Enum& out) {
  for (const auto& entry : table) {
    if (name == entry.name) {
      out = entry.value;
      return true;
    }
  }
  return false;
}

template <typename Enum, std::size_t N>
std::string choices(const Names<Enum> (&table)[N]) {
  std::string out;
  for (const auto& entry : table) {
    if (!out.empty()) out += ", ";
    out += entry.name;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::size_t line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  const Entry& required(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ValidationError(key, "missing required key");
    return it->second;
  }

  double real(const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
      throw ValidationError(key, "expected a finite number, got '" + text + "'", line_of(key));
    }
    return v;
  }

  std::uint64_t integer(const std::string& key) const {
    const auto& e = required(key);
    std::uint64_t v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
      throw ValidationError(key, "expected a non-negative integer, got '" + e.value + "'", e.line);
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& e = entries_.at(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ValidationError(key, "expected true or false, got '" + e.value + "'", e.line);
  }

  Point point(const std::string& key, const std::string& text) const {
    const auto w = words(text);
    if (w.size() != 2) {
      throw ValidationError(key, "expected a point written as 'x y', got '" + text + "'", line_of(key));
    }
    return {real(key, w[0]), real(key, w[1])};
  }

  std::vector<Point> points(const std::string& key, const std::string& text) const {
    std::vector<Point> out;
    for (const auto& item : split(text, ',')) out.push_back(point(key, item));
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
};

const std::set<std::string> kKnownKeys = {
    "version",
    "robots.count",
    "robots.positions",
    "robots.sigma",
    "robots.frames",
    "capabilities.multiplicity_detection",
    "capabilities.localization_knowledge",
    "scheduler.kind",
    "protocol.kind",
    "protocol.plugin",
    "protocol.pattern",
    "run.seed",
    "run.max_steps",
    "run.stop_rule",
};

std::string render_points(const std::vector<Point>& pts) {
  std::string out;
  for (const auto& p : pts) {
    if (!out.empty()) out += ", ";
    out += format_real(p.x) + " " + format_real(p.y);
  }
  return out;
}

bool requires_pattern(ProtocolKind kind) {
  return kind == ProtocolKind::ssa_pf || kind == ProtocolKind::reference_apf;
}

}  // namespace

std::string format_real(double value) {
  // "-0" would read back as the integer 0 in JSON; keep the sign visible.
  if (value == 0.0 && std::signbit(value)) return "-0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_string(ProtocolKind kind) { return name_of(kProtocolNames, kind); }
std::string to_string(StopRule rule) { return name_of(kStopNames, rule); }
std::string to_string(PositionMode mode) { return name_of(kPositionNames, mode); }
std::string to_string(FrameMode mode) { return name_of(kFrameNames, mode); }

void validate(const Scenario& s) {
  if (s.count == 0) throw ValidationError("robots.count", "need at least one robot");

  switch (s.positions.mode) {
    case PositionMode::explicit_list:
      if (s.positions.points.size() != s.count) {
        throw ValidationError("robots.positions", "lists " + std::to_string(s.positions.points.size()) +
                                                      " points for " + std::to_string(s.count) + " robots");
      }
      for (const auto& p : s.positions.points) {
        if (!is_finite(p)) throw ValidationError("robots.positions", "coordinates must be finite");
      }
      break;
    case PositionMode::random:
    case PositionMode::random_with_duplicates:
      if (!(s.positions.extent > 0.0) || !std::isfinite(s.positions.extent)) {
        throw ValidationError("robots.positions", "extent must be positive and finite");
      }
      break;
    case PositionMode::colocated:
      if (!is_finite(s.positions.at)) throw ValidationError("robots.positions", "coordinates must be finite");
      break;
  }

  if (s.sigmas.size() != 1 && s.sigmas.size() != s.count) {
    throw ValidationError("robots.sigma", "give one value or one per robot");
  }
  for (double sigma : s.sigmas) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ValidationError("robots.sigma", "must be > 0 and finite, got " + format_real(sigma));
    }
  }

  switch (s.scheduler.kind) {
    case SchedulerKind::bernoulli:
      if (!(s.scheduler.p > 0.0 && s.scheduler.p <= 1.0)) {
        throw ValidationError("scheduler.kind", "bernoulli probability must lie in (0, 1]");
      }
      break;
    case SchedulerKind::round_robin:
      if (s.scheduler.window == 0) throw ValidationError("scheduler.kind", "round_robin window must be >= 1");
      break;
    case SchedulerKind::bounded_delay:
      if (s.scheduler.delay == 0) throw ValidationError("scheduler.kind", "bounded_delay D must be >= 1");
      break;
    case SchedulerKind::full_synchronous:
      break;
  }

  if (s.max_steps == 0) throw ValidationError("run.max_steps", "must be >= 1");

  const auto kind = s.protocol.kind;
  const bool composite = kind == ProtocolKind::ssa_pf || kind == ProtocolKind::ssa_gp;
  const bool reference = kind == ProtocolKind::reference_agp || kind == ProtocolKind::reference_apf ||
                         (composite && s.protocol.plugin == "reference");
  if (composite && s.protocol.plugin != "reference") {
    throw ValidationError("protocol.plugin", "unknown plug-in '" + s.protocol.plugin + "' (expected reference)");
  }
  if ((composite || reference) && !s.caps.multiplicity_detection) {
    throw ValidationError("capabilities.multiplicity_detection",
                          to_string(kind) + " requires multiplicity detection");
  }
  if (reference && !s.caps.localization_knowledge) {
    throw ValidationError("capabilities.localization_knowledge",
                          "the reference plug-ins require localization knowledge");
  }
  if ((kind == ProtocolKind::ssa_gp || kind == ProtocolKind::reference_agp) && s.count < 3) {
    throw ValidationError("protocol.kind", to_string(kind) + " requires n >= 3 robots, got n = " +
                                               std::to_string(s.count));
  }
  if (kind == ProtocolKind::pair_gather && s.count != 2) {
    throw ValidationError("protocol.kind", "pair_gather requires exactly n = 2 robots");
  }
  if (requires_pattern(kind)) {
    if (s.protocol.pattern.size() != s.count) {
      throw ValidationError("protocol.pattern", "needs exactly one point per robot");
    }
    auto sorted = s.protocol.pattern;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("protocol.pattern", "points must be pairwise distinct");
    }
    for (const auto& p : sorted) {
      if (!is_finite(p)) throw ValidationError("protocol.pattern", "coordinates must be finite");
    }
  } else if (!s.protocol.pattern.empty()) {
    throw ValidationError("protocol.pattern", to_string(kind) + " takes no pattern");
  }

  if (s.stop_rule == StopRule::no_multiplicity && !s.caps.multiplicity_detection) {
    throw ValidationError("run.stop_rule", "no_multiplicity requires multiplicity detection");
  }
  if (s.stop_rule == StopRule::pattern_reached && !requires_pattern(kind)) {
    throw ValidationError("run.stop_rule", "pattern_reached needs a protocol with a pattern");
  }
}

ProtocolPtr make_protocol(const ProtocolSpec& spec) {
  switch (spec.kind) {
    case ProtocolKind::scatter:
      return std::make_shared<ScatterProtocol>();
    case ProtocolKind::ssa_pf:
      return std::make_shared<SsaPfProtocol>(std::make_shared<ReferenceApfProtocol>(spec.pattern));
    case ProtocolKind::ssa_gp:
      return std::make_shared<SsaGpProtocol>(std::make_shared<ReferenceAgpProtocol>());
    case ProtocolKind::pair_gather:
      return std::make_shared<PairGatherProtocol>();
    case ProtocolKind::deterministic_stub:
      return make_deterministic_stub();
    case ProtocolKind::reference_agp:
      return std::make_shared<ReferenceAgpProtocol>();
    case ProtocolKind::reference_apf:
      return std::make_shared<ReferenceApfProtocol>(spec.pattern);
  }
  throw std::invalid_argument("unknown protocol kind");
}

Configuration initial_configuration(const Scenario& s, Rng& rng) {
  Configuration config;
  auto fresh = [&] {
    const double x = rng.uniform(0.0, s.positions.extent);
    const double y = rng.uniform(0.0, s.positions.extent);
    return Point{x, y};
  };
  switch (s.positions.mode) {
    case PositionMode::explicit_list:
      config.positions = s.positions.points;
      break;
    case PositionMode::colocated:
      config.positions.assign(s.count, s.positions.at);
      break;
    case PositionMode::random:
      for (std::size_t i = 0; i < s.count; ++i) config.positions.push_back(fresh());
      break;
    case PositionMode::random_with_duplicates: {
      bool coincided = false;
      for (std::size_t i = 0; i < s.count; ++i) {
        if (i > 0 && rng.coin() == 0) {
          const auto j = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i));
          config.positions.push_back(config.positions[std::min(j, i - 1)]);
          coincided = true;
        } else {
          config.positions.push_back(fresh());
        }
      }
      if (!coincided && s.count >= 2) config.positions.back() = config.positions.front();
      break;
    }
  }
  return config;
}

std::vector<Robot> make_robots(const Scenario& s, Rng& rng) {
  std::vector<Robot> robots(s.count);
  for (std::size_t i = 0; i < s.count; ++i) {
    robots[i].index = i;
    robots[i].sigma = s.sigma_of(i);
    if (s.frames == FrameMode::random) {
      auto& f = robots[i].frame;
      f.origin.x = rng.uniform(-10.0, 10.0);
      f.origin.y = rng.uniform(-10.0, 10.0);
      f.rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
      f.reflect = rng.coin() == 1;
      f.unit = rng.uniform(0.5, 2.0);
    }
  }
  return robots;
}

Scenario parse_scenario(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("", "unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> kSections = {"robots", "capabilities", "scheduler", "protocol", "run"};
      if (!kSections.count(section)) throw ValidationError(section, "unknown section", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("", "expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!kKnownKeys.count(full)) throw ValidationError(full, "unknown key", line_no);
    if (entries.count(full)) throw ValidationError(full, "duplicate key", line_no);
    entries[full] = {trim(line.substr(eq + 1)), line_no};
  }

  const Reader r(std::move(entries));
  if (r.integer("version") != kFormatVersion) {
    throw ValidationError("version", "unsupported scenario format version", r.line_of("version"));
  }

  Scenario s;
  try {
    s.count = r.integer("robots.count");

    {
      const auto& e = r.required("robots.positions");
      const auto w = words(e.value);
      const std::string head = w.empty() ? std::string{} : w[0];
      if (head == "random" || head == "random_with_duplicates") {
        if (w.size() != 2) {
          throw ValidationError("robots.positions", "expected '" + head + " <extent>'", e.line);
        }
        s.positions.mode = head == "random" ? PositionMode::random : PositionMode::random_with_duplicates;
        s.positions.extent = r.real("robots.positions", w[1]);
      } else if (head == "colocated") {
        if (w.size() != 3) throw ValidationError("robots.positions", "expected 'colocated <x> <y>'", e.line);
        s.positions.mode = PositionMode::colocated;
        s.positions.at = {r.real("robots.positions", w[1]), r.real("robots.positions", w[2])};
      } else {
        s.positions.mode = PositionMode::explicit_list;
        s.positions.points = r.points("robots.positions", e.value);
      }
    }

    {
      const auto& e = r.required("robots.sigma");
      s.sigmas.clear();
      for (const auto& item : split(e.value, ',')) s.sigmas.push_back(r.real("robots.sigma", item));
    }

    if (r.has("robots.frames")) {
      const auto& e = r.required("robots.frames");
      if (!lookup(kFrameNames, e.value, s.frames)) {
        throw ValidationError("robots.frames", "expected one of " + choices(kFrameNames), e.line);
      }
    }

    s.caps.multiplicity_detection = r.boolean("capabilities.multiplicity_detection", false);
    s.caps.localization_knowledge = r.boolean("capabilities.localization_knowledge", false);

    {
      const auto& e = r.required("scheduler.kind");
      try {
        s.scheduler = parse_scheduler_spec(e.value);
      } catch (const std::invalid_argument& err) {
        throw ValidationError("scheduler.kind", err.what(), e.line);
      }
    }

    {
      const auto& e = r.required("protocol.kind");
      if (!lookup(kProtocolNames, e.value, s.protocol.kind)) {
        throw ValidationError("protocol.kind", "expected one of " + choices(kProtocolNames), e.line);
      }
    }
    if (r.has("protocol.plugin")) s.protocol.plugin = r.required("protocol.plugin").value;
    if (r.has("protocol.pattern")) {
      const auto& e = r.required("protocol.pattern");
      if (!e.value.empty()) s.protocol.pattern = r.points("protocol.pattern", e.value);
    }

    s.seed = r.integer("run.seed");
    s.max_steps = r.integer("run.max_steps");
    if (r.has("run.stop_rule")) {
      const auto& e = r.required("run.stop_rule");
      if (!lookup(kStopNames, e.value, s.stop_rule)) {
        throw ValidationError("run.stop_rule", "expected one of " + choices(kStopNames), e.line);
      }
    }

    validate(s);
  } catch (const ValidationError& err) {
    if (err.line() != 0 || err.field().empty()) throw;
    // Anchor semantic errors to the line that set the field.
    const std::string what = err.what();
    const std::string prefix = err.field() + ": ";
    throw ValidationError(err.field(), what.substr(prefix.size()), r.line_of(err.field()));
  }
  return s;
}

std::string write_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "version = " << kFormatVersion << "\n\n";

  out << "[robots]\n";
  out << "count = " << s.count << "\n";
  out << "positions = ";
  switch (s.positions.mode) {
    case PositionMode::explicit_list:
      out << render_points(s.positions.points);
      break;
    case PositionMode::random:
    case PositionMode::random_with_duplicates:
      out << to_string(s.positions.mode) << " " << format_real(s.positions.extent);
      break;
    case PositionMode::colocated:
      out << "colocated " << format_real(s.positions.at.x) << " " << format_real(s.positions.at.y);
      break;
  }
  out << "\n";
  out << "sigma = ";
  for (std::size_t i = 0; i < s.sigmas.size(); ++i) out << (i ? ", " : "") << format_real(s.sigmas[i]);
  out << "\n";
  out << "frames = " << to_string(s.frames) << "\n\n";

  out << "[capabilities]\n";
  out << "multiplicity_detection = " << (s.caps.multiplicity_detection ? "true" : "false") << "\n";
  out << "localization_knowledge = " << (s.caps.localization_knowledge ? "true" : "false") << "\n\n";

  out << "[scheduler]\n";
  out << "kind = " << to_string(s.scheduler) << "\n\n";

  out << "[protocol]\n";
  out << "kind = " << to_string(s.protocol.kind) << "\n";
  out << "plugin = " << s.protocol.plugin << "\n";
  out << "pattern = " << render_points(s.protocol.pattern) << "\n\n";

  out << "[run]\n";
  out << "seed = " << s.seed << "\n";
  out << "max_steps = " << s.max_steps << "\n";
  out << "stop_rule = " << to_string(s.stop_rule) << "\n";
  return out.str();
}

std::uint64_t scenario_digest(const std::string& canonical_text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rscatter
