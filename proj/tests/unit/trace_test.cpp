#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rscatter/engine.hpp"
#include "rscatter/errors.hpp"
#include "rscatter/scenario.hpp"
#include "rscatter/trace.hpp"

namespace rscatter {
namespace {

Scenario small_scatter(std::uint64_t seed = 3) {
  Scenario s;
  s.count = 3;
  s.positions.mode = PositionMode::colocated;
  s.sigmas = {0.5};
  s.frames = FrameMode::random;
  s.scheduler = {SchedulerKind::bernoulli, 0.5, 1, 1};
  s.seed = seed;
  s.max_steps = 12;
  return s;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

TEST(Trace, RoundTripIsExact) {
  const Trace t = run(small_scatter());
  const Trace back = read_trace_string(write_trace(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(write_trace(back), write_trace(t));
}

TEST(Trace, LayoutIsHeaderRecordsEnd) {
  const Trace t = run(small_scatter());
  const auto lines = lines_of(write_trace(t));
  ASSERT_EQ(lines.size(), t.records.size() + 2);
  const auto header = nlohmann::json::parse(lines.front());
  EXPECT_EQ(header["format"], "rscatter-trace");
  EXPECT_EQ(header["version"], 1);
  EXPECT_EQ(header["seed"], 3u);
  EXPECT_EQ(header["digest"].get<std::string>().size(), 16u);
  EXPECT_EQ(header["digest"], format_digest(scenario_digest(header["scenario"].get<std::string>())));
  const auto first = nlohmann::json::parse(lines[1]);
  EXPECT_EQ(first["t"], 0);
  EXPECT_EQ(first["positions"].size(), 3u);
  EXPECT_EQ(first["coins"].size(), first["active"].size());
  const auto end = nlohmann::json::parse(lines.back());
  EXPECT_EQ(end["end"], "budget_exhausted");
  EXPECT_EQ(end["instants"], 12);
}

TEST(Trace, NegativeZeroSurvives) {
  Trace t = run(small_scatter());
  t.records[0].positions.positions[1] = {-0.0, 0.0};
  const Trace back = read_trace_string(write_trace(t));
  EXPECT_TRUE(std::signbit(back.records[0].positions.positions[1].x));
  EXPECT_FALSE(std::signbit(back.records[0].positions.positions[1].y));
}

TEST(Trace, ExtremeRealsRoundTrip) {
  Trace t = run(small_scatter());
  t.records[0].positions.positions[0] = {5e-324, 1.7976931348623157e308};
  t.records[0].positions.positions[2] = {0.1 + 0.2, -1.0 / 3.0};
  EXPECT_EQ(read_trace_string(write_trace(t)), t);
}

TEST(Trace, ErrorsCarryLineNumbers) {
  const auto lines = lines_of(write_trace(run(small_scatter())));
  auto line_of_error = [](const std::string& text) -> std::size_t {
    try {
      read_trace_string(text);
    } catch (const TraceFormatError& e) {
      return e.line();
    }
    return 0;
  };

  auto broken = lines;
  broken[3] = "{\"t\":2,";
  EXPECT_EQ(line_of_error(join(broken)), 4u);

  broken = lines;
  broken.pop_back();
  EXPECT_GT(line_of_error(join(broken)), 0u);  // missing end record

  broken = lines;
  std::swap(broken[1], broken[2]);
  EXPECT_EQ(line_of_error(join(broken)), 2u);  // out of sequence

  broken = lines;
  broken[0].replace(broken[0].find("rscatter-trace"), 14, "something-else");
  EXPECT_EQ(line_of_error(join(broken)), 1u);

  EXPECT_THROW(read_trace_string(""), TraceFormatError);
}

TEST(Trace, ConfigurationAtAndActivations) {
  const Trace t = run(small_scatter());
  EXPECT_EQ(t.configuration_at(0), t.initial);
  EXPECT_EQ(t.configuration_at(1), t.records[0].positions);
  const auto acts = t.activations();
  ASSERT_EQ(acts.size(), t.records.size());
  EXPECT_EQ(acts[4], t.records[4].active);
}

TEST(Trace, DigestFormatting) {
  EXPECT_EQ(format_digest(0), "0000000000000000");
  EXPECT_EQ(format_digest(0xabcdef0123456789ULL), "abcdef0123456789");
}

}  // namespace
}  // namespace rscatter
