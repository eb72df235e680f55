#pragma once

// k-common longest substrings ("LCS curves") and the curve statistics built
// on them: area under the curve, curve distributions and the symmetric
// Kullback-Leibler distance between two curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/suffix_array.hpp"

namespace dnaevo {

/// One substring common to at least k members, and the members holding it.
struct CurveWitness {
  std::string substring;
  std::vector<std::size_t> members;  // ascending member indices
};

/// LCS[k] for k = 2..M. lengths[i] holds LCS[i + 2].
struct LcsCurve {
  std::size_t group_size = 0;
  std::vector<std::size_t> lengths;
  std::vector<CurveWitness> witnesses;  // empty unless requested

  static constexpr std::size_t k_min = 2;
  std::size_t k_max() const noexcept { return group_size; }
  std::size_t at(std::size_t k) const { return lengths.at(k - k_min); }
  bool has_witnesses() const noexcept { return !witnesses.empty(); }
  const CurveWitness& witness(std::size_t k) const { return witnesses.at(k - k_min); }

  /// Curve values as reals, for averaging and distribution building.
  std::vector<double> values() const { return {lengths.begin(), lengths.end()}; }
};

struct PairLcs {
  std::size_t length = 0;
  std::string witness;
};

/// Longest common substring of two strings by dynamic programming over
/// suffix-match lengths. O(|a|·|b|) time, O(|b|) space. Returns the first
/// maximal match in `a`.
inline PairLcs lcs_pair(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) fail_input("lcs_pair requires non-empty sequences");
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0, best_end = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      if (cur[j] > best) {
        best = cur[j];
        best_end = i;
      }
    }
    std::swap(prev, cur);
  }
  return {best, std::string(a.substr(best_end - best, best))};
}

inline PairLcs lcs_pair(const DnaSequence& a, const DnaSequence& b) { return lcs_pair(a.view(), b.view()); }

namespace detail {

/// Collects every member that holds a given substring.
inline std::vector<std::size_t> members_containing(const Group& g, std::string_view sub) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (g[c].view().find(sub) != std::string_view::npos) out.push_back(c);
  return out;
}

}  // namespace detail

/// Exact LCS curve of a group.
///
/// All members are concatenated with a unique separator after each one, a
/// generalized suffix array and its LCP array are built, and the LCP-interval
/// tree is walked bottom-up. Each interval is a node of the generalized suffix
/// tree; its number of distinct members is counted with Hui's correction:
/// every leaf whose predecessor in suffix order has the same member adds -1
/// at the lowest common ancestor of the two. The deepest interval per distinct
/// count gives LCS[count], and a suffix maximum over k turns "exactly k" into
/// "at least k". Linear time after suffix sorting apart from the logarithmic
/// ancestor lookup.
inline LcsCurve lcs_curve(const Group& g, bool with_witnesses = false) {
  using idx = std::int32_t;
  const std::size_t m = g.size();
  if (m < 2) fail_input("an LCS curve needs at least 2 sequences, got " + std::to_string(m));

  std::size_t total = 0;
  for (const auto& member : g.members) total += member.size() + 1;
  if (total >= static_cast<std::size_t>(std::numeric_limits<idx>::max()) / 2)
    fail_guard("group too large for 32-bit suffix indexing");

  // Separator of member c is symbol c; base byte b is symbol m + b.
  const idx sym_offset = static_cast<idx>(m);
  std::vector<idx> text;
  std::vector<idx> color;
  text.reserve(total);
  color.reserve(total);
  for (std::size_t c = 0; c < m; ++c) {
    for (char ch : g[c]) {
      text.push_back(sym_offset + static_cast<unsigned char>(ch));
      color.push_back(static_cast<idx>(c));
    }
    text.push_back(static_cast<idx>(c));
    color.push_back(static_cast<idx>(c));
  }
  const auto sa = detail::suffix_array(text, sym_offset + 255);
  const auto lcp = detail::lcp_array(text, sa);
  const idx n = static_cast<idx>(text.size());

  // best_*[d]: deepest interval seen with exactly d distinct members.
  std::vector<idx> best_len(m + 1, -1), best_lb(m + 1, 0), best_rb(m + 1, n - 1);

  struct Frame {
    idx depth;
    idx lb;
    idx duplicates;
  };
  std::vector<Frame> stack;
  stack.reserve(64);
  stack.push_back({0, 0, 0});
  std::vector<idx> last_leaf(m, -1);
  last_leaf[color[sa[0]]] = 0;

  auto report = [&](const Frame& f, idx rb) {
    const idx distinct = (rb - f.lb + 1) - f.duplicates;
    if (f.depth > best_len[distinct]) {
      best_len[distinct] = f.depth;
      best_lb[distinct] = f.lb;
      best_rb[distinct] = rb;
    }
  };

  for (idx i = 1; i <= n; ++i) {
    const idx cur = i < n ? lcp[i] : 0;
    idx lb = i - 1;
    idx pending = 0;
    while (cur < stack.back().depth) {
      const Frame f = stack.back();
      stack.pop_back();
      report(f, i - 1);
      lb = f.lb;
      if (cur <= stack.back().depth)
        stack.back().duplicates += f.duplicates;
      else
        pending = f.duplicates;
    }
    if (cur > stack.back().depth) stack.push_back({cur, lb, pending});
    if (i == n) break;

    // Every open frame now contains leaf i. The deepest one that also
    // contains the previous same-member leaf is their lowest common ancestor.
    const idx c = color[sa[i]];
    const idx j = last_leaf[c];
    last_leaf[c] = i;
    if (j >= 0) {
      auto it = std::upper_bound(stack.begin(), stack.end(), j,
                                 [](idx value, const Frame& f) { return value < f.lb; });
      std::prev(it)->duplicates += 1;
    }
  }
  report(stack.front(), n - 1);

  LcsCurve curve;
  curve.group_size = m;
  curve.lengths.assign(m - 1, 0);
  std::vector<std::size_t> source(m - 1, m);
  idx running = -1;
  std::size_t running_src = m;
  for (std::size_t k = m; k >= 2; --k) {
    if (best_len[k] > running) {
      running = best_len[k];
      running_src = k;
    }
    curve.lengths[k - 2] = running < 0 ? 0 : static_cast<std::size_t>(running);
    source[k - 2] = running_src;
  }

  if (with_witnesses) {
    curve.witnesses.resize(m - 1);
    for (std::size_t k = 2; k <= m; ++k) {
      const std::size_t len = curve.lengths[k - 2];
      CurveWitness& w = curve.witnesses[k - 2];
      const std::size_t d = source[k - 2];
      if (d > m || best_len[d] < 0) {
        // No interval reached k members; only possible when nothing is shared.
        w.members.resize(m);
        for (std::size_t c = 0; c < m; ++c) w.members[c] = c;
        continue;
      }
      const idx start = sa[best_lb[d]];
      for (std::size_t t = 0; t < len; ++t) w.substring.push_back(static_cast<char>(text[start + t] - sym_offset));
      std::vector<char> seen(m, 0);
      for (idx r = best_lb[d]; r <= best_rb[d]; ++r) seen[color[sa[r]]] = 1;
      for (std::size_t c = 0; c < m; ++c)
        if (seen[c]) w.members.push_back(c);
    }
  }
  return curve;
}

/// Largest total input accepted by lcs_curve_bruteforce.
inline constexpr std::size_t kBruteforceMaxChars = 10'000;

/// Reference LCS curve by enumerating every distinct substring of every
/// member. Witness ties break toward the lexicographically smallest substring.
inline LcsCurve lcs_curve_bruteforce(const Group& g) {
  const std::size_t m = g.size();
  if (m < 2) fail_input("an LCS curve needs at least 2 sequences, got " + std::to_string(m));
  std::size_t total = 0;
  for (const auto& member : g.members) total += member.size();
  if (total > kBruteforceMaxChars)
    fail_guard("brute-force oracle limited to " + std::to_string(kBruteforceMaxChars) + " characters, got " +
               std::to_string(total));

  std::unordered_map<std::string_view, std::size_t> holders;
  for (std::size_t c = 0; c < m; ++c) {
    const std::string_view s = g[c].view();
    std::unordered_set<std::string_view> mine;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t len = 1; i + len <= s.size(); ++len) mine.insert(s.substr(i, len));
    for (auto sub : mine) ++holders[sub];
  }

  // best[d]: longest substring held by exactly d members.
  std::vector<std::string_view> best(m + 1);
  std::vector<bool> found(m + 1, false);
  for (const auto& [sub, d] : holders) {
    if (!found[d] || sub.size() > best[d].size() || (sub.size() == best[d].size() && sub < best[d])) {
      best[d] = sub;
      found[d] = true;
    }
  }

  LcsCurve curve;
  curve.group_size = m;
  curve.lengths.assign(m - 1, 0);
  curve.witnesses.resize(m - 1);
  std::string_view running;
  bool have = false;
  for (std::size_t k = m; k >= 2; --k) {
    if (found[k] && (!have || best[k].size() > running.size() ||
                     (best[k].size() == running.size() && best[k] < running))) {
      running = best[k];
      have = true;
    }
    curve.lengths[k - 2] = have ? running.size() : 0;
    curve.witnesses[k - 2].substring = std::string(have ? running : std::string_view{});
    curve.witnesses[k - 2].members = detail::members_containing(g, curve.witnesses[k - 2].substring);
  }
  return curve;
}

/// Trapezoid-rule area under a curve given as values for k = 2..M with unit
/// step: sum over k = 3..M of (LCS[k-1] + LCS[k]) / 2. Zero when M = 2.
inline double auc(std::span<const double> values) {
  double area = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) area += (values[i - 1] + values[i]) / 2.0;
  return area;
}

inline double auc(const LcsCurve& curve) {
  const auto v = curve.values();
  return auc(std::span<const double>(v));
}

/// Probability vector over k = 2..M derived from an LCS curve.
struct CurveDistribution {
  std::vector<double> probs;
  double epsilon = 0.0;
};

/// Default additive smoothing applied before normalization.
inline constexpr double kDefaultSmoothing = 1e-9;

/// probs[k] = (LCS[k] + eps) / sum over k' of (LCS[k'] + eps).
inline CurveDistribution curve_to_distribution(std::span<const double> values, double epsilon = kDefaultSmoothing) {
  if (values.empty()) fail_input("cannot build a distribution from an empty curve");
  if (!(epsilon >= 0.0)) fail_config("smoothing must be non-negative");
  double total = 0.0;
  for (double v : values) {
    if (v < 0.0) fail_input("negative curve value");
    total += v + epsilon;
  }
  if (!(total > 0.0)) fail_input("all-zero curve needs positive smoothing");
  CurveDistribution d;
  d.epsilon = epsilon;
  d.probs.reserve(values.size());
  for (double v : values) d.probs.push_back((v + epsilon) / total);
  return d;
}

inline CurveDistribution curve_to_distribution(const LcsCurve& curve, double epsilon = kDefaultSmoothing) {
  const auto v = curve.values();
  return curve_to_distribution(std::span<const double>(v), epsilon);
}

/// Scale-preserving distribution over k = 2..M plus one trailing remainder
/// bucket. Each curve value is divided by the largest attainable curve mass
/// (M - 1) * seq_len, and the remainder bucket holds the unused mass. Two
/// curves with the same shape but different heights map to different
/// distributions, unlike curve_to_distribution.
inline CurveDistribution anchored_distribution(std::span<const double> values, std::size_t seq_len,
                                               double epsilon = kDefaultSmoothing) {
  if (values.empty()) fail_input("cannot build a distribution from an empty curve");
  if (!(epsilon > 0.0)) fail_config("anchored distributions need positive smoothing");
  const double cap = static_cast<double>(seq_len);
  const double mass = cap * static_cast<double>(values.size());
  const double total = mass + epsilon * static_cast<double>(values.size() + 1);
  CurveDistribution d;
  d.epsilon = epsilon;
  d.probs.reserve(values.size() + 1);
  double used = 0.0;
  for (double v : values) {
    if (v < 0.0 || v > cap) fail_input("curve value outside [0, seq_len]");
    d.probs.push_back((v + epsilon) / total);
    used += v;
  }
  d.probs.push_back((mass - used + epsilon) / total);
  return d;
}

inline CurveDistribution anchored_distribution(const LcsCurve& curve, std::size_t seq_len,
                                               double epsilon = kDefaultSmoothing) {
  const auto v = curve.values();
  return anchored_distribution(std::span<const double>(v), seq_len, epsilon);
}

/// One-directional divergence: sum over x of ln(approx(x)/target(x)) * approx(x).
/// Terms with approx(x) = 0 contribute 0.
inline double kl_divergence(std::span<const double> approx, std::span<const double> target) {
  if (approx.size() != target.size()) fail_input("distributions have different support");
  double d = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i)
    if (approx[i] > 0.0) d += std::log(approx[i] / target[i]) * approx[i];
  return d;
}

/// Symmetric KL distance: the mean of the two directed divergences.
inline double kl_distance(const CurveDistribution& p, const CurveDistribution& q) {
  if (p.probs.size() != q.probs.size())
    fail_input("distributions have different support: " + std::to_string(p.probs.size()) + " vs " +
               std::to_string(q.probs.size()));
  if (p.probs.empty()) fail_input("empty distributions");
  const double d = (kl_divergence(q.probs, p.probs) + kl_divergence(p.probs, q.probs)) / 2.0;
  return d < 0.0 ? 0.0 : d;
}

}  // namespace dnaevo
