// dnaevo: command-line driver for digital DNA encoding, LCS curves, GenBot
// evolution, resampling baselines and detection experiments.
//
// Exit codes: 0 success, 2 input error, 3 config error, 4 runtime guard.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "dnaevo.hpp"

namespace fs = std::filesystem;
using namespace dnaevo;

namespace {

/// Cap from DNA_EVOLVER_THREADS, or 0 when unset.
std::size_t thread_cap() {
  const char* env = std::getenv("DNA_EVOLVER_THREADS");
  if (!env || !*env) return 0;
  try {
    return static_cast<std::size_t>(std::stoul(env));
  } catch (const std::exception&) {
    fail_config(std::string("DNA_EVOLVER_THREADS is not a number: '") + env + "'");
  }
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail_config("bad weight '" + item + "'");
    }
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write '" + path.string() + "'");
  out << text;
}

struct EncodeArgs {
  std::string events, alphabet = "tweet=A,reply=C,retweet=T", out;
  std::size_t last_n = 2000, min_length = 0;
};

int cmd_encode(const EncodeArgs& a) {
  const Alphabet alphabet = Alphabet::parse(a.alphabet);
  const auto events = io::read_events(a.events);
  if (events.empty()) fail_input("'" + a.events + "' contains no events");

  std::vector<std::string> order;
  std::map<std::string, std::vector<ActionEvent>> by_user;
  for (const auto& ev : events) {
    auto [it, fresh] = by_user.try_emplace(ev.user_id);
    if (fresh) order.push_back(ev.user_id);
    it->second.push_back(ev);
  }

  Group g;
  std::size_t dropped = 0;
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& user : order) {
    auto seq = encode_timeline(by_user[user], alphabet, a.last_n);
    if (seq.size() < a.min_length) {
      ++dropped;
      continue;
    }
    ++histogram[seq.size()];
    g.members.push_back(std::move(seq));
  }
  io::write_group(a.out, g);

  std::cout << "users," << g.size() << "\n";
  std::cout << "dropped," << dropped << "\n";
  std::cout << "length,count\n";
  for (const auto& [len, n] : histogram) std::cout << len << ',' << n << '\n';
  return 0;
}

int cmd_curve(const std::string& group_file, const std::string& out_csv, bool witnesses) {
  const Group g = io::read_group(group_file);
  if (g.size() < 2) fail_input("'" + group_file + "' holds " + std::to_string(g.size()) + " sequence(s); need 2");
  const LcsCurve curve = lcs_curve(g, witnesses);
  if (!out_csv.empty())
    io::write_curve_csv(out_csv, curve);
  else
    io::write_curve_csv(std::cout, curve);
  std::cout << "AUC," << io::format_real(auc(curve)) << '\n';
  if (witnesses) {
    std::cout << "k,members,substring\n";
    for (std::size_t k = 2; k <= curve.k_max(); ++k) {
      const auto& w = curve.witness(k);
      std::cout << k << ',';
      for (std::size_t i = 0; i < w.members.size(); ++i) std::cout << (i ? ";" : "") << w.members[i];
      std::cout << ',' << w.substring << '\n';
    }
  }
  return 0;
}

int cmd_evolve(const std::string& config_file, std::size_t threads_flag) {
  const auto kv = io::read_key_values(config_file);
  ExperimentConfig cfg = ExperimentConfig::from_key_values(kv, fs::path(config_file).parent_path());
  if (threads_flag > 0) cfg.ga.threads = threads_flag;
  if (const auto cap = thread_cap(); cap > 0) cfg.ga.threads = std::min(cfg.ga.threads, cap);
  const auto summary = run_evolve_experiment(cfg, &std::cerr);

  std::cout << "run,seed,initial_fitness,final_fitness,d_kl,auc,pct_error\n";
  for (std::size_t r = 0; r < summary.runs.size(); ++r) {
    const auto& rs = summary.runs[r];
    std::cout << r << ',' << rs.seed << ',' << io::format_real(rs.initial_fitness) << ','
              << io::format_real(rs.final_fitness) << ',' << io::format_real(rs.d_kl) << ','
              << io::format_real(rs.auc) << ',' << io::format_real(rs.auc_error_pct) << '\n';
  }
  std::cout << "benchmark_auc," << io::format_real(summary.target_auc) << '\n';
  std::cout << "d_kl_mean," << io::format_real(summary.d_kl_mean) << '\n';
  std::cout << "d_kl_std," << io::format_real(summary.d_kl_std) << '\n';
  return 0;
}

struct ResampleArgs {
  std::string group, method = "block_permutation", out;
  std::size_t block_size = 5;
  std::uint64_t seed = 1;
};

int cmd_resample(const ResampleArgs& a) {
  const Group g = io::read_group(a.group);
  const Group out = resample(g, {parse_resample_method(a.method), a.block_size, a.seed});
  io::write_group(a.out, out, out.label + " resampling of " + g.label);
  return 0;
}

struct DetectArgs {
  std::string bots, humans, detector = "both", out, mixed_out, alphabet = "tweet=A,reply=C,retweet=T";
  double bot_fraction = 0.5;
  double threshold = -1.0;
  std::uint64_t seed = 1;
  bool strict = false;
};

int cmd_detect(const DetectArgs& a) {
  const Group bots = io::read_group(a.bots);
  const Group humans = io::read_group(a.humans);
  if (bots.members.empty() || humans.members.empty()) fail_input("bot and human groups must be non-empty");
  const Alphabet alphabet = Alphabet::parse(a.alphabet);
  Rng rng(a.seed);
  const LabeledGroup lg = sample_mix(bots, humans, a.bot_fraction, rng);
  if (!a.mixed_out.empty()) {
    io::write_group(a.mixed_out + ".txt", lg.group);
    io::write_labels(a.mixed_out + ".labels", lg.truth);
  }

  const bool run_fp = a.detector == "fingerprint" || a.detector == "both";
  const bool run_en = a.detector == "entropy" || a.detector == "both";
  if (!run_fp && !run_en) fail_config("unknown detector '" + a.detector + "'");

  std::ostringstream csv;
  csv << io::kReportHeader << '\n';
  bool flat = false;
  if (run_fp) {
    const auto report = fingerprint_detect(lg);
    flat = report.has(kFlagFlatCurve);
    io::write_report_row(csv, "fingerprint", report);
  }
  if (run_en) {
    const double threshold = a.threshold >= 0.0 ? a.threshold : midpoint_threshold(bots, humans, alphabet);
    std::cerr << "entropy threshold " << io::format_real(threshold) << '\n';
    io::write_report_row(csv, "entropy", entropy_detect(lg, threshold, alphabet));
  }
  if (a.out.empty())
    std::cout << csv.str();
  else
    write_text(a.out, csv.str());
  if (flat && a.strict) fail_guard("fingerprint curve is flat; no split point");
  return 0;
}

int cmd_split(const std::string& group_file, double fraction, std::uint64_t seed, const std::string& out_a,
              const std::string& out_b) {
  if (!(fraction > 0.0 && fraction < 1.0)) fail_config("fraction must lie in (0, 1)");
  const Group g = io::read_group(group_file);
  const std::size_t n = g.size();
  const auto na = static_cast<std::size_t>(fraction * static_cast<double>(n) + 0.5);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(idx.begin(), idx.end());
  std::vector<std::size_t> ia(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(na, n)));
  std::vector<std::size_t> ib(idx.begin() + static_cast<std::ptrdiff_t>(std::min(na, n)), idx.end());
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  Group a, b;
  for (auto i : ia) a.members.push_back(g[i]);
  for (auto i : ib) b.members.push_back(g[i]);
  io::write_group(out_a, a);
  io::write_group(out_b, b);
  std::cout << "group_a," << a.size() << "\ngroup_b," << b.size() << '\n';
  return 0;
}

int cmd_metrics(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  std::cout << io::kReportHeader << '\n';
  io::write_report_row(std::cout, "counts", compute_metrics(tp, fp, tn, fn));
  return 0;
}

struct SynthArgs {
  std::size_t users = 20, length = 200;
  double stickiness = 0.8;
  std::string mix = "0.7,0.15,0.15", bases = "ACT", out;
  std::uint64_t seed = 1;
};

int cmd_synth(const SynthArgs& a) {
  MarkovSource src;
  src.bases = a.bases;
  src.mix = parse_weights(a.mix);
  src.stickiness = a.stickiness;
  Rng rng(a.seed);
  io::write_group(a.out, src.group(a.users, a.length, rng),
                  "markov stickiness " + io::format_real(a.stickiness) + " mix " + a.mix);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital DNA behavioral modeling and GenBot evolution"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode JSONL event logs into a group file");
  encode->add_option("--events", enc.events, "JSON Lines events file")->required();
  encode->add_option("--alphabet", enc.alphabet, "Action to base mapping")->capture_default_str();
  encode->add_option("--last-n", enc.last_n, "Keep the most recent N actions")->capture_default_str()->check(CLI::PositiveNumber);
  encode->add_option("--min-length", enc.min_length, "Drop accounts with fewer actions")->capture_default_str();
  encode->add_option("-o,--out", enc.out, "Output group file")->required();

  std::string curve_group, curve_out;
  bool curve_witnesses = false;
  auto* curve = app.add_subcommand("curve", "Compute the LCS curve and AUC of a group");
  curve->add_option("--group", curve_group, "Group file")->required();
  curve->add_option("-o,--out", curve_out, "CSV output (stdout when omitted)");
  curve->add_flag("--witnesses", curve_witnesses, "Print one witness substring and member set per k");

  std::string evolve_config;
  std::size_t evolve_threads = 0;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run GenBot against a target group");
  evolve_cmd->add_option("--config", evolve_config, "key = value config file")->required();
  evolve_cmd->add_option("--threads", evolve_threads, "Fitness worker threads (overrides config)");

  ResampleArgs rs;
  auto* resample_cmd = app.add_subcommand("resample", "Resampling baselines");
  resample_cmd->add_option("--group", rs.group, "Group file")->required();
  resample_cmd->add_option("--method", rs.method, "average | block_permutation | block_bootstrap")->capture_default_str();
  resample_cmd->add_option("--block-size", rs.block_size, "Block size")->capture_default_str()->check(CLI::PositiveNumber);
  resample_cmd->add_option("--seed", rs.seed, "Random seed")->capture_default_str();
  resample_cmd->add_option("-o,--out", rs.out, "Output group file")->required();

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Mix bots with humans and run detectors");
  detect->add_option("--bots", det.bots, "Bot group file")->required();
  detect->add_option("--humans", det.humans, "Legitimate group file")->required();
  detect->add_option("--detector", det.detector, "fingerprint | entropy | both")->capture_default_str();
  detect->add_option("--bot-fraction", det.bot_fraction, "Share of bots in the mix")->capture_default_str();
  detect->add_option("--threshold", det.threshold, "Entropy threshold (default: midpoint of group means)");
  detect->add_option("--seed", det.seed, "Random seed")->capture_default_str();
  detect->add_option("--alphabet", det.alphabet, "Action to base mapping")->capture_default_str();
  detect->add_option("--mixed-out", det.mixed_out, "Write the mixed group and labels with this prefix");
  detect->add_option("-o,--out", det.out, "Report CSV (stdout when omitted)");
  detect->add_flag("--strict", det.strict, "Fail with exit code 4 on a flat fingerprint curve");

  std::string split_group, split_a, split_b;
  double split_fraction = 0.5;
  std::uint64_t split_seed = 1;
  auto* split = app.add_subcommand("split", "Randomly split a group into two disjoint groups");
  split->add_option("--group", split_group, "Group file")->required();
  split->add_option("--fraction", split_fraction, "Share going to the first output")->capture_default_str();
  split->add_option("--seed", split_seed, "Random seed")->capture_default_str();
  split->add_option("--out-a", split_a, "First output")->required();
  split->add_option("--out-b", split_b, "Second output")->required();

  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  auto* metrics = app.add_subcommand("metrics", "Detection metrics from confusion counts");
  metrics->add_option("--tp", tp)->required();
  metrics->add_option("--fp", fp)->required();
  metrics->add_option("--tn", tn)->required();
  metrics->add_option("--fn", fn)->required();

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic group from a sticky Markov source");
  synth->add_option("--users", syn.users, "Sequences")->capture_default_str();
  synth->add_option("--length", syn.length, "Bases per sequence")->capture_default_str();
  synth->add_option("--stickiness", syn.stickiness, "Probability of repeating the previous base")->capture_default_str();
  synth->add_option("--mix", syn.mix, "Stationary base weights")->capture_default_str();
  synth->add_option("--bases", syn.bases, "Bases")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  synth->add_option("-o,--out", syn.out, "Output group file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (*encode) return cmd_encode(enc);
    if (*curve) return cmd_curve(curve_group, curve_out, curve_witnesses);
    if (*evolve_cmd) return cmd_evolve(evolve_config, evolve_threads);
    if (*resample_cmd) return cmd_resample(rs);
    if (*detect) return cmd_detect(det);
    if (*split) return cmd_split(split_group, split_fraction, split_seed, split_a, split_b);
    if (*metrics) return cmd_metrics(tp, fp, tn, fn);
    if (*synth) return cmd_synth(syn);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
