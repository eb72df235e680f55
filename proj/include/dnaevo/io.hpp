#pragma once

// Plain-text file formats: group files, label sidecars, JSONL event logs,
// key-value configs and the CSV exports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dnaevo/detection.hpp"
#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/genbot.hpp"
#include "dnaevo/lcs_engine.hpp"

namespace dnaevo::io {

namespace fs = std::filesystem;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open '" + path.string() + "'");
  return in;
}

inline std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace detail

/// Shortest round-trippable decimal rendering, independent of locale.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses one DNA string per line. Blank lines and lines starting with '#'
/// are skipped; surrounding whitespace is stripped.
inline Group parse_group(std::istream& in, std::string_view source = "<stream>") {
  Group g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.find_first_of(" \t,") != std::string_view::npos)
      fail_input(std::string(source) + ":" + std::to_string(lineno) + ": whitespace inside a DNA string");
    g.members.emplace_back(std::string(t));
  }
  return g;
}

inline Group read_group(const fs::path& path) {
  auto in = detail::open_in(path);
  Group g = parse_group(in, path.string());
  g.label = path.stem().string();
  return g;
}

inline void write_group(std::ostream& out, const Group& g) {
  for (const auto& m : g.members) out << m.view() << '\n';
}

inline void write_group(const fs::path& path, const Group& g, std::string_view header = {}) {
  auto out = detail::open_out(path);
  if (!header.empty()) out << "# " << header << '\n';
  write_group(out, g);
}

/// Sidecar label file: one of "bot" / "legitimate" per member, in order.
inline std::vector<Truth> read_labels(const fs::path& path) {
  auto in = detail::open_in(path);
  std::vector<Truth> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t == "bot")
      labels.push_back(Truth::bot);
    else if (t == "legitimate" || t == "human")
      labels.push_back(Truth::legitimate);
    else
      fail_input(path.string() + ":" + std::to_string(lineno) + ": unknown label '" + std::string(t) + "'");
  }
  return labels;
}

inline void write_labels(const fs::path& path, const std::vector<Truth>& labels) {
  auto out = detail::open_out(path);
  for (auto t : labels) out << (t == Truth::bot ? "bot" : "legitimate") << '\n';
}

/// Parses JSON Lines records {"user_id", "timestamp", "action"}. user_id may
/// be a string or an integer. Blank lines are skipped.
inline std::vector<ActionEvent> parse_events(std::istream& in, std::string_view source = "<stream>") {
  std::vector<ActionEvent> events;
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(lineno) + ": "; };
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      fail_input(where() + "malformed JSON");
    }
    if (!rec.is_object()) fail_input(where() + "record is not a JSON object");
    for (const char* key : {"user_id", "timestamp", "action"})
      if (!rec.contains(key)) fail_input(where() + "missing field '" + key + "'");
    ActionEvent ev;
    const auto& uid = rec["user_id"];
    if (uid.is_string())
      ev.user_id = uid.get<std::string>();
    else if (uid.is_number_integer())
      ev.user_id = std::to_string(uid.get<long long>());
    else
      fail_input(where() + "user_id must be a string or integer");
    if (!rec["timestamp"].is_string() || !parse_timestamp(rec["timestamp"].get<std::string>(), ev.timestamp))
      fail_input(where() + "unparseable timestamp in record " + std::to_string(lineno));
    if (!rec["action"].is_string()) fail_input(where() + "action must be a string");
    ev.action = rec["action"].get<std::string>();
    events.push_back(std::move(ev));
  }
  return events;
}

inline std::vector<ActionEvent> read_events(const fs::path& path) {
  auto in = detail::open_in(path);
  return parse_events(in, path.string());
}

/// Flat "key = value" file; '#' starts a comment line.
using KeyValues = std::map<std::string, std::string, std::less<>>;

inline KeyValues parse_key_values(std::istream& in, std::string_view source = "<stream>") {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      fail_config(std::string(source) + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = detail::trim(t.substr(0, eq));
    if (key.empty()) fail_config(std::string(source) + ":" + std::to_string(lineno) + ": empty key");
    kv[std::string(key)] = std::string(detail::trim(t.substr(eq + 1)));
  }
  return kv;
}

inline KeyValues read_key_values(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_config("cannot open config '" + path.string() + "'");
  return parse_key_values(in, path.string());
}

inline void write_curve_csv(std::ostream& out, const std::vector<double>& values) {
  out << "k,lcs_length\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i + 2 << ',' << format_real(values[i]) << '\n';
}

inline void write_curve_csv(std::ostream& out, const LcsCurve& curve) {
  out << "k,lcs_length\n";
  for (std::size_t i = 0; i < curve.lengths.size(); ++i) out << i + 2 << ',' << curve.lengths[i] << '\n';
}

template <class Curve>
void write_curve_csv(const fs::path& path, const Curve& curve) {
  auto out = detail::open_out(path);
  write_curve_csv(out, curve);
}

/// Reads a `k,lcs_length` CSV back into values for k = 2..M.
inline std::vector<double> read_curve_csv(const fs::path& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "k,lcs_length") fail_input(path.string() + ": bad header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail_input(path.string() + ": bad row '" + line + "'");
    if (std::stoul(line.substr(0, comma)) != values.size() + 2) fail_input(path.string() + ": k out of sequence");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "generation,best_fitness,mean_fitness\n";
  for (std::size_t g = 0; g < trace.best.size(); ++g)
    out << g << ',' << format_real(trace.best[g]) << ',' << format_real(trace.mean[g]) << '\n';
}

inline void write_trace_csv(const fs::path& path, const RunTrace& trace) {
  auto out = detail::open_out(path);
  write_trace_csv(out, trace);
}

/// One directory per individual, each holding its group file.
inline void write_population(const fs::path& dir, const Population& pop) {
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const auto sub = dir / ("individual_" + std::to_string(j));
    write_group(sub / "group.txt", pop.individuals[j].group,
                "generation " + std::to_string(pop.generation) + " fitness " +
                    format_real(pop.individuals[j].fitness));
  }
}

inline constexpr std::string_view kReportHeader =
    "detector,tp,fp,tn,fn,precision,recall,specificity,accuracy,f1,mcc,flags";

inline void write_report_row(std::ostream& out, std::string_view detector, const DetectionReport& r) {
  out << detector << ',' << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << ',' << format_real(r.precision)
      << ',' << format_real(r.recall) << ',' << format_real(r.specificity) << ',' << format_real(r.accuracy) << ','
      << format_real(r.f1) << ',' << format_real(r.mcc) << ',' << describe_flags(r.flags) << '\n';
}

}  // namespace dnaevo::io
