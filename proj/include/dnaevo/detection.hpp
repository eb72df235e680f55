#pragma once

// Detectors for mixed groups of bots and legitimate accounts, and the
// confusion-matrix metrics used to score them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/lcs_engine.hpp"
#include "dnaevo/rng.hpp"

namespace dnaevo {

enum class Truth : std::uint8_t { legitimate, bot };

struct LabeledGroup {
  Group group;
  std::vector<Truth> truth;

  std::size_t size() const noexcept { return group.size(); }
  std::size_t count(Truth t) const { return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), t)); }
};

/// Flags raised while scoring. Undefined ratios are reported as 0.
enum DetectionFlag : unsigned {
  kFlagNone = 0,
  kFlagPrecisionUndefined = 1u << 0,
  kFlagRecallUndefined = 1u << 1,
  kFlagSpecificityUndefined = 1u << 2,
  kFlagF1Undefined = 1u << 3,
  kFlagMccUndefined = 1u << 4,
  kFlagFlatCurve = 1u << 5,
};

inline std::string describe_flags(unsigned flags) {
  static constexpr const char* names[] = {"precision_undefined", "recall_undefined", "specificity_undefined",
                                          "f1_undefined", "mcc_undefined", "flat_curve"};
  std::string out;
  for (unsigned b = 0; b < 6; ++b)
    if (flags & (1u << b)) {
      if (!out.empty()) out += '|';
      out += names[b];
    }
  return out;
}

struct DetectionReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0, recall = 0, specificity = 0, accuracy = 0, f1 = 0, mcc = 0;
  unsigned flags = kFlagNone;

  bool has(DetectionFlag f) const noexcept { return (flags & f) != 0; }
};

inline DetectionReport compute_metrics(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  const std::size_t total = tp + fp + tn + fn;
  if (total == 0) fail_input("confusion matrix is empty");
  DetectionReport r{tp, fp, tn, fn};
  auto ratio = [&](double num, double den, DetectionFlag flag) {
    if (den == 0.0) {
      r.flags |= flag;
      return 0.0;
    }
    return num / den;
  };
  const double TP = static_cast<double>(tp), FP = static_cast<double>(fp), TN = static_cast<double>(tn),
               FN = static_cast<double>(fn);
  r.precision = ratio(TP, TP + FP, kFlagPrecisionUndefined);
  r.recall = ratio(TP, TP + FN, kFlagRecallUndefined);
  r.specificity = ratio(TN, TN + FP, kFlagSpecificityUndefined);
  r.accuracy = (TP + TN) / static_cast<double>(total);
  r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall, kFlagF1Undefined);
  r.mcc = ratio(TP * TN - FP * FN, std::sqrt((TP + FP) * (TP + FN) * (TN + FP) * (TN + FN)), kFlagMccUndefined);
  r.mcc = std::clamp(r.mcc, -1.0, 1.0);
  return r;
}

/// Scores per-member predictions against ground truth.
inline DetectionReport score(const LabeledGroup& lg, const std::vector<bool>& predicted_bot) {
  if (predicted_bot.size() != lg.truth.size()) fail_input("prediction count differs from member count");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < predicted_bot.size(); ++i) {
    const bool bot = lg.truth[i] == Truth::bot;
    if (predicted_bot[i])
      ++(bot ? tp : fp);
    else
      ++(bot ? fn : tn);
  }
  return compute_metrics(tp, fp, tn, fn);
}

/// Concatenates both groups and shuffles members, keeping their labels.
inline LabeledGroup mix_groups(const Group& bots, const Group& humans, Rng& rng) {
  if (bots.members.empty() || humans.members.empty()) fail_input("both groups must be non-empty to mix");
  std::vector<std::pair<const DnaSequence*, Truth>> all;
  all.reserve(bots.size() + humans.size());
  for (const auto& m : bots.members) all.emplace_back(&m, Truth::bot);
  for (const auto& m : humans.members) all.emplace_back(&m, Truth::legitimate);
  rng.shuffle(all.begin(), all.end());
  LabeledGroup lg;
  lg.group.label = "mixed";
  lg.group.members.reserve(all.size());
  lg.truth.reserve(all.size());
  for (const auto& [seq, t] : all) {
    lg.group.members.push_back(*seq);
    lg.truth.push_back(t);
  }
  return lg;
}

/// Picks random subsets of both groups whose sizes follow `bot_fraction`
/// as closely as possible while using as many members as available.
inline LabeledGroup sample_mix(const Group& bots, const Group& humans, double bot_fraction, Rng& rng) {
  if (!(bot_fraction > 0.0 && bot_fraction < 1.0)) fail_config("bot fraction must lie in (0, 1)");
  if (bots.members.empty() || humans.members.empty()) fail_input("both groups must be non-empty to mix");
  const double per_human = bot_fraction / (1.0 - bot_fraction);
  std::size_t nb =
      std::min<std::size_t>(bots.size(), static_cast<std::size_t>(static_cast<double>(humans.size()) * per_human + 1e-9));
  std::size_t nh = std::min<std::size_t>(humans.size(), static_cast<std::size_t>(static_cast<double>(nb) / per_human + 0.5));
  nb = std::max<std::size_t>(nb, 1);
  nh = std::max<std::size_t>(nh, 1);
  auto pick = [&](const Group& g, std::size_t n) {
    std::vector<std::size_t> idx(g.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx.begin(), idx.end());
    Group out;
    for (std::size_t i = 0; i < n; ++i) out.members.push_back(g[idx[i]]);
    return out;
  };
  const Group b = pick(bots, nb);
  const Group h = pick(humans, nh);
  return mix_groups(b, h, rng);
}

inline constexpr std::size_t kFingerprintMinGroup = 4;

struct FingerprintSplit {
  std::size_t k_star = 0;  // 0 when the curve is flat
  std::vector<bool> predicted_bot;
  CurveWitness witness;
  bool flat = false;
};

/// Splits a group at the steepest drop of its LCS curve: k* maximizes
/// LCS[k] - LCS[k+1] (ties go to the largest k) and the members sharing the
/// k* witness substring are flagged as coordinated bots.
inline FingerprintSplit fingerprint_split(const Group& g) {
  if (g.size() < kFingerprintMinGroup)
    fail_input("fingerprint detection needs at least " + std::to_string(kFingerprintMinGroup) + " accounts, got " +
               std::to_string(g.size()));
  const LcsCurve curve = lcs_curve(g, true);
  FingerprintSplit out;
  out.predicted_bot.assign(g.size(), false);
  std::size_t best_drop = 0;
  for (std::size_t k = 2; k < g.size(); ++k) {
    const std::size_t drop = curve.at(k) - curve.at(k + 1);
    if (drop > 0 && drop >= best_drop) {
      best_drop = drop;
      out.k_star = k;
    }
  }
  if (out.k_star == 0) {
    out.flat = true;
    return out;
  }
  out.witness = curve.witness(out.k_star);
  for (std::size_t i : out.witness.members) out.predicted_bot[i] = true;
  return out;
}

inline DetectionReport fingerprint_detect(const LabeledGroup& lg) {
  const auto split = fingerprint_split(lg.group);
  auto report = score(lg, split.predicted_bot);
  if (split.flat) report.flags |= kFlagFlatCurve;
  return report;
}

inline std::vector<bool> entropy_predict(const Group& g, const Alphabet& alphabet, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) fail_config("entropy threshold must lie in (0, 1)");
  std::vector<bool> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = normalized_entropy(g[i], alphabet) > threshold;
  return out;
}

/// Flags every member whose normalized entropy exceeds `threshold`.
inline DetectionReport entropy_detect(const LabeledGroup& lg, double threshold,
                                      const Alphabet& alphabet = Alphabet::standard()) {
  return score(lg, entropy_predict(lg.group, alphabet, threshold));
}

inline double mean_entropy(const Group& g, const Alphabet& alphabet) {
  if (g.members.empty()) fail_input("mean entropy of an empty group");
  double sum = 0.0;
  for (const auto& m : g.members) sum += normalized_entropy(m, alphabet);
  return sum / static_cast<double>(g.size());
}

/// Midpoint between the mean normalized entropies of two groups.
inline double midpoint_threshold(const Group& bots, const Group& humans, const Alphabet& alphabet) {
  return (mean_entropy(bots, alphabet) + mean_entropy(humans, alphabet)) / 2.0;
}

}  // namespace dnaevo
