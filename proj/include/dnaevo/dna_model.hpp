#pragma once

// Digital DNA: an account's action stream encoded as a string of bases.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnaevo/error.hpp"

namespace dnaevo {

/// Ordered set of distinct bases plus the action-kind -> base mapping.
class Alphabet {
 public:
  Alphabet(std::string bases, std::map<std::string, char, std::less<>> action_map)
      : bases_(std::move(bases)), action_map_(std::move(action_map)) {
    if (bases_.empty()) fail_config("alphabet has no bases");
    for (std::size_t i = 0; i < bases_.size(); ++i)
      for (std::size_t j = i + 1; j < bases_.size(); ++j)
        if (bases_[i] == bases_[j]) fail_config(std::string("duplicate base '") + bases_[i] + "' in alphabet");
    std::string hit(bases_.size(), '\0');
    for (const auto& [kind, base] : action_map_) {
      const auto pos = bases_.find(base);
      if (pos == std::string::npos)
        fail_config("action '" + kind + "' maps to base '" + std::string(1, base) + "' outside the alphabet");
      hit[pos] = 1;
    }
    for (std::size_t i = 0; i < bases_.size(); ++i)
      if (!hit[i]) fail_config(std::string("no action maps to base '") + bases_[i] + "'");
  }

  /// A=tweet, C=reply, T=retweet.
  static Alphabet standard() { return Alphabet("ACT", {{"tweet", 'A'}, {"reply", 'C'}, {"retweet", 'T'}}); }

  /// Parses "tweet=A,reply=C,retweet=T". Base order follows first appearance.
  static Alphabet parse(std::string_view spec) {
    std::string bases;
    std::map<std::string, char, std::less<>> map;
    std::size_t start = 0;
    while (start <= spec.size()) {
      auto end = spec.find(',', start);
      if (end == std::string_view::npos) end = spec.size();
      auto item = spec.substr(start, end - start);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0 || item.size() != eq + 2)
        fail_config("bad alphabet entry '" + std::string(item) + "', expected kind=B");
      const char base = item[eq + 1];
      map.emplace(std::string(item.substr(0, eq)), base);
      if (bases.find(base) == std::string::npos) bases.push_back(base);
      start = end + 1;
    }
    return Alphabet(std::move(bases), std::move(map));
  }

  const std::string& bases() const noexcept { return bases_; }
  std::size_t size() const noexcept { return bases_.size(); }
  const auto& action_map() const noexcept { return action_map_; }

  /// Index of `base` in bases(), or size() if absent.
  std::size_t index_of(char base) const noexcept {
    const auto pos = bases_.find(base);
    return pos == std::string::npos ? bases_.size() : pos;
  }

  char base_for(std::string_view action) const {
    const auto it = action_map_.find(action);
    if (it == action_map_.end()) fail_input("unknown action kind '" + std::string(action) + "'");
    return it->second;
  }

 private:
  std::string bases_;
  std::map<std::string, char, std::less<>> action_map_;
};

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

struct ActionEvent {
  std::string user_id;
  Timestamp timestamp;
  std::string action;
};

/// Parses ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff...][Z|+HH:MM|-HH:MM]" to UTC
/// milliseconds. Fractions beyond milliseconds are truncated. Returns false
/// on any syntax or range error.
inline bool parse_timestamp(std::string_view text, Timestamp& out) {
  auto num = [&](std::size_t pos, std::size_t len, int& v) {
    if (pos + len > text.size()) return false;
    const char* b = text.data() + pos;
    auto [p, ec] = std::from_chars(b, b + len, v);
    return ec == std::errc{} && p == b + len;
  };
  int y, mo, d, h, mi, s;
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return false;
  if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) || !num(17, 2, s))
    return false;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return false;

  std::size_t pos = 19;
  int millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return false;
    for (int k = digits; k < 3; ++k) millis *= 10;
  }
  int offset_min = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      int oh, om;
      const int sign = text[pos] == '-' ? -1 : 1;
      if (!num(pos + 1, 2, oh)) return false;
      std::size_t mpos = pos + 3;
      if (mpos < text.size() && text[mpos] == ':') ++mpos;
      if (!num(mpos, 2, om) || oh > 23 || om > 59) return false;
      offset_min = sign * (oh * 60 + om);
      pos = mpos + 2;
    } else {
      return false;
    }
  }
  if (pos != text.size()) return false;

  out = Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis} -
                  minutes{offset_min}};
  return true;
}

/// One account's chronologically encoded behavior. Any byte string is
/// accepted; membership in an alphabet is checked with conforms_to().
class DnaSequence {
 public:
  DnaSequence() = default;
  DnaSequence(std::string bases) : bases_(std::move(bases)) {}  // NOLINT(google-explicit-constructor)
  DnaSequence(const char* bases) : bases_(bases) {}              // NOLINT(google-explicit-constructor)

  std::size_t size() const noexcept { return bases_.size(); }
  bool empty() const noexcept { return bases_.empty(); }
  char operator[](std::size_t i) const noexcept { return bases_[i]; }
  char& operator[](std::size_t i) noexcept { return bases_[i]; }
  std::string_view view() const noexcept { return bases_; }
  const std::string& str() const noexcept { return bases_; }
  std::string& str() noexcept { return bases_; }
  auto begin() const noexcept { return bases_.begin(); }
  auto end() const noexcept { return bases_.end(); }
  auto begin() noexcept { return bases_.begin(); }
  auto end() noexcept { return bases_.end(); }

  bool conforms_to(const Alphabet& alphabet) const noexcept {
    return !bases_.empty() &&
           std::all_of(bases_.begin(), bases_.end(), [&](char c) { return alphabet.index_of(c) < alphabet.size(); });
  }

  friend bool operator==(const DnaSequence&, const DnaSequence&) = default;
  friend auto operator<=>(const DnaSequence&, const DnaSequence&) = default;

 private:
  std::string bases_;
};

/// Ordered collection of sequences; in the GA a whole group is one individual.
struct Group {
  std::vector<DnaSequence> members;
  std::string label;

  std::size_t size() const noexcept { return members.size(); }
  const DnaSequence& operator[](std::size_t i) const noexcept { return members[i]; }
  DnaSequence& operator[](std::size_t i) noexcept { return members[i]; }

  /// Common member length, or 0 when the group is empty or ragged.
  std::size_t uniform_length() const noexcept {
    if (members.empty()) return 0;
    const auto n = members.front().size();
    for (const auto& m : members)
      if (m.size() != n) return 0;
    return n;
  }

  friend bool operator==(const Group& a, const Group& b) { return a.members == b.members; }
};

/// Encodes one user's events. Events are stable-sorted by timestamp (ties keep
/// input order) and the most recent min(last_n, |events|) are transliterated.
inline DnaSequence encode_timeline(const std::vector<ActionEvent>& events, const Alphabet& alphabet,
                                   std::size_t last_n) {
  if (events.empty()) fail_input("cannot encode an empty timeline");
  if (last_n == 0) fail_config("last_n must be at least 1");
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].timestamp < events[b].timestamp; });
  const std::size_t take = std::min(last_n, events.size());
  std::string out;
  out.reserve(take);
  for (std::size_t i = events.size() - take; i < events.size(); ++i)
    out.push_back(alphabet.base_for(events[order[i]].action));
  return DnaSequence(std::move(out));
}

/// Relative frequency of each base, indexed like alphabet.bases(). Bases
/// outside the alphabet are not counted.
inline std::vector<double> base_distribution(const DnaSequence& s, const Alphabet& alphabet) {
  if (s.empty()) fail_input("base distribution of an empty sequence");
  std::vector<std::size_t> counts(alphabet.size(), 0);
  for (char c : s) {
    const auto idx = alphabet.index_of(c);
    if (idx < counts.size()) ++counts[idx];
  }
  std::vector<double> p(alphabet.size());
  const auto n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
  return p;
}

/// Shannon entropy of the base distribution divided by ln |alphabet|, in [0, 1].
inline double normalized_entropy(const DnaSequence& s, const Alphabet& alphabet) {
  if (alphabet.size() < 2) return 0.0;
  double h = 0.0;
  for (double p : base_distribution(s, alphabet))
    if (p > 0.0) h -= p * std::log(p);
  return std::clamp(h / std::log(static_cast<double>(alphabet.size())), 0.0, 1.0);
}

}  // namespace dnaevo
