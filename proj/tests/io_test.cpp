#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "dnaevo/io.hpp"

namespace dnaevo {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dnaevo_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(GroupFile, ParsesAndSkipsComments) {
  std::istringstream in("# header\nAACT\n\n  CCTA \r\n#ACT\nTTTT\n");
  const auto g = io::parse_group(in);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[1].str(), "CCTA");
}

TEST(GroupFile, RejectsInnerWhitespace) {
  std::istringstream in("AA CT\n");
  EXPECT_THROW(io::parse_group(in), Error);
}

TEST(GroupFile, RoundTrip) {
  const auto dir = scratch("group");
  Group g;
  g.members = {DnaSequence("ACT"), DnaSequence("TTA")};
  io::write_group(dir / "bots.txt", g, "two members");
  const auto back = io::read_group(dir / "bots.txt");
  EXPECT_EQ(back.members, g.members);
  EXPECT_EQ(back.label, "bots");
  EXPECT_THROW(io::read_group(dir / "missing.txt"), Error);
}

TEST(Labels, RoundTripAndErrors) {
  const auto dir = scratch("labels");
  const std::vector<Truth> labels{Truth::bot, Truth::legitimate, Truth::bot};
  io::write_labels(dir / "l.txt", labels);
  EXPECT_EQ(io::read_labels(dir / "l.txt"), labels);
  std::ofstream(dir / "bad.txt") << "bot\nrobot\n";
  EXPECT_THROW(io::read_labels(dir / "bad.txt"), Error);
}

TEST(Events, ParsesJsonLines) {
  std::istringstream in(
      R"({"user_id": "u1", "timestamp": "2024-01-01T00:00:00Z", "action": "tweet"})"
      "\n\n"
      R"({"user_id": 42, "timestamp": "2024-01-01T00:00:01.250+01:00", "action": "reply"})"
      "\n");
  const auto ev = io::parse_events(in);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[1].user_id, "42");
  EXPECT_EQ(ev[1].action, "reply");
  EXPECT_LT(ev[1].timestamp, ev[0].timestamp);
}

TEST(Events, ReportsLineNumbers) {
  std::istringstream bad_json("{\"user_id\": \"u\"\n");
  EXPECT_THROW(io::parse_events(bad_json), Error);
  std::istringstream missing(R"({"user_id": "u", "action": "tweet"})");
  try {
    io::parse_events(missing, "f.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    EXPECT_NE(std::string(e.what()).find("f.jsonl:1"), std::string::npos);
  }
  std::istringstream bad_time(R"({"user_id": "u", "timestamp": "yesterday", "action": "tweet"})");
  EXPECT_THROW(io::parse_events(bad_time), Error);
}

TEST(KeyValues, Parses) {
  std::istringstream in("# comment\npop_size = 10\n  target=  t.txt \n");
  const auto kv = io::parse_key_values(in);
  EXPECT_EQ(kv.at("pop_size"), "10");
  EXPECT_EQ(kv.at("target"), "t.txt");
  std::istringstream bad("pop_size 10\n");
  try {
    io::parse_key_values(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

TEST(CurveCsv, RoundTrip) {
  const auto dir = scratch("curve");
  const std::vector<double> v{3.5, 2.25, 0.1};
  io::write_curve_csv(dir / "c.csv", v);
  EXPECT_EQ(io::read_curve_csv(dir / "c.csv"), v);
  std::ostringstream out;
  io::write_curve_csv(out, LcsCurve{3, {2, 1}, {}});
  EXPECT_EQ(out.str(), "k,lcs_length\n2,2\n3,1\n");
}

TEST(TraceCsv, Format) {
  RunTrace t;
  t.best = {1.0, 0.5};
  t.mean = {1.0, 0.75};
  std::ostringstream out;
  io::write_trace_csv(out, t);
  EXPECT_EQ(out.str(), "generation,best_fitness,mean_fitness\n0,1,1\n1,0.5,0.75\n");
}

TEST(FormatReal, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 6.0, 1e-300, 123456.789}) EXPECT_EQ(std::stod(io::format_real(v)), v);
}

TEST(Report, Row) {
  std::ostringstream out;
  io::write_report_row(out, "entropy", compute_metrics(1, 0, 1, 0));
  EXPECT_EQ(out.str(), "entropy,1,0,1,0,1,1,1,1,1,1,\n");
}

TEST(Population, WritesOneDirectoryPerIndividual) {
  const auto dir = scratch("pop");
  Population p;
  Group g;
  g.members = {DnaSequence("AC"), DnaSequence("CA")};
  p.individuals = {{g, 0.5}, {g, 0.25}};
  io::write_population(dir, p);
  EXPECT_EQ(io::read_group(dir / "individual_1" / "group.txt").members, g.members);
}

}  // namespace
}  // namespace dnaevo
