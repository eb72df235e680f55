#pragma once

// Multi-run evolution experiment: runs GenBot R times against one target
// group and writes traces, final populations, averaged curves and the AUC /
// D_KL summary tables.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/genbot.hpp"
#include "dnaevo/io.hpp"
#include "dnaevo/lcs_engine.hpp"
#include "dnaevo/resampling.hpp"

namespace dnaevo {

struct ExperimentConfig {
  GaConfig ga;
  std::filesystem::path target;
  std::filesystem::path out_dir = "evolve_out";
  std::optional<std::filesystem::path> initial;
  std::size_t runs = 1;
  bool best_only = false;
  std::size_t progress_every = 0;
  bool baselines = true;
  std::size_t baseline_block_size = 5;
  std::string alphabet = "tweet=A,reply=C,retweet=T";

  /// Builds a config from key-value pairs. Relative paths resolve against
  /// `base_dir`. group_size / seq_len default to the target's shape.
  static ExperimentConfig from_key_values(const io::KeyValues& kv, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig c;
    auto path = [&](const std::string& v) {
      std::filesystem::path p(v);
      return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    auto count = [](const std::string& key, const std::string& v) -> std::size_t {
      try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos);
        if (pos != v.size() || n < 0) throw std::invalid_argument(v);
        return static_cast<std::size_t>(n);
      } catch (const std::exception&) {
        fail_config("'" + key + "' expects a non-negative integer, got '" + v + "'");
      }
    };
    auto real = [](const std::string& key, const std::string& v) {
      try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
      } catch (const std::exception&) {
        fail_config("'" + key + "' expects a number, got '" + v + "'");
      }
    };
    auto flag = [](const std::string& key, const std::string& v) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      fail_config("'" + key + "' expects true or false, got '" + v + "'");
    };

    bool have_target = false;
    for (const auto& [key, v] : kv) {
      if (key == "target") {
        c.target = path(v);
        have_target = true;
      } else if (key == "out_dir") {
        c.out_dir = path(v);
      } else if (key == "initial") {
        c.initial = path(v);
      } else if (key == "pop_size") {
        c.ga.pop_size = count(key, v);
      } else if (key == "max_gen") {
        c.ga.max_gen = count(key, v);
      } else if (key == "mut_prob") {
        c.ga.mut_prob = real(key, v);
      } else if (key == "num_urco") {
        c.ga.num_urco = count(key, v);
      } else if (key == "num_uco") {
        c.ga.num_uco = count(key, v);
      } else if (key == "group_size") {
        c.ga.group_size = count(key, v);
      } else if (key == "seq_len") {
        c.ga.seq_len = count(key, v);
      } else if (key == "rng_seed" || key == "seed") {
        c.ga.rng_seed = count(key, v);
      } else if (key == "epsilon") {
        c.ga.epsilon = real(key, v);
      } else if (key == "normalization") {
        c.ga.normalization = parse_normalization(v);
      } else if (key == "threads") {
        c.ga.threads = count(key, v);
      } else if (key == "runs") {
        c.runs = count(key, v);
      } else if (key == "best_only") {
        c.best_only = flag(key, v);
      } else if (key == "progress_every") {
        c.progress_every = count(key, v);
      } else if (key == "baselines") {
        c.baselines = flag(key, v);
      } else if (key == "baseline_block_size") {
        c.baseline_block_size = count(key, v);
      } else if (key == "alphabet") {
        c.alphabet = v;
      } else {
        fail_config("unknown config key '" + key + "'");
      }
    }
    if (!have_target) fail_config("config lacks 'target'");
    if (c.runs < 1) fail_config("runs must be at least 1");
    return c;
  }
};

struct RunSummary {
  std::uint64_t seed = 0;
  double initial_fitness = 0.0;
  double final_fitness = 0.0;
  double d_kl = 0.0;  // averaged final curve vs target curve
  double auc = 0.0;
  double auc_error_pct = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<double> curve;
  RunTrace trace;
};

struct ExperimentSummary {
  LcsCurve target_curve;
  double target_auc = 0.0;
  std::vector<RunSummary> runs;
  double d_kl_mean = 0.0;
  double d_kl_std = 0.0;
};

inline double percent_error(double value, double reference) {
  return reference == 0.0 ? 0.0 : 100.0 * (value - reference) / reference;
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for n = 1).
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, sd};
}

/// Runs the experiment and writes every artifact under cfg.out_dir. Run r
/// uses seed rng_seed + r. Progress goes to `log` when given.
inline ExperimentSummary run_evolve_experiment(ExperimentConfig cfg, std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  Group target;
  try {
    target = io::read_group(cfg.target);
  } catch (const Error& e) {
    fail_config(std::string("target group: ") + e.what());
  }
  if (target.size() < 2) fail_config("target group needs at least 2 sequences");
  const std::size_t len = target.uniform_length();
  if (len == 0) fail_config("target members must all have the same length");
  if (cfg.ga.group_size == 0) cfg.ga.group_size = target.size();
  if (cfg.ga.seq_len == 0) cfg.ga.seq_len = len;
  if (cfg.ga.group_size != target.size() || cfg.ga.seq_len != len)
    fail_config("config expects " + std::to_string(cfg.ga.group_size) + "x" + std::to_string(cfg.ga.seq_len) +
                " but target is " + std::to_string(target.size()) + "x" + std::to_string(len));
  cfg.ga.validate();

  const Alphabet alphabet = Alphabet::parse(cfg.alphabet);
  for (std::size_t i = 0; i < target.size(); ++i)
    if (!target[i].conforms_to(alphabet))
      fail_config("target member " + std::to_string(i) + " uses bases outside the alphabet");

  EvolveOptions opts;
  opts.bases = MutationBases::from(alphabet);
  if (cfg.initial) {
    try {
      opts.initial = io::read_group(*cfg.initial);
    } catch (const Error& e) {
      fail_config(std::string("initial group: ") + e.what());
    }
  }

  ExperimentSummary summary;
  summary.target_curve = lcs_curve(target);
  summary.target_auc = auc(summary.target_curve);
  const Fitness scorer(summary.target_curve, cfg.ga.epsilon, cfg.ga.normalization, cfg.ga.seq_len);

  fs::create_directories(cfg.out_dir);
  io::write_curve_csv(cfg.out_dir / "target_curve.csv", summary.target_curve);

  for (std::size_t r = 0; r < cfg.runs; ++r) {
    GaConfig ga = cfg.ga;
    ga.rng_seed = cfg.ga.rng_seed + r;
    if (log && cfg.progress_every > 0) {
      opts.progress = [&, r](std::size_t gen, double best, double mean) {
        if (gen % cfg.progress_every == 0)
          *log << "run " << r << " generation " << gen << " best " << io::format_real(best) << " mean "
               << io::format_real(mean) << '\n';
      };
    }
    RunSummary rs;
    rs.seed = ga.rng_seed;
    rs.trace = evolve(target, ga, opts);
    rs.initial_fitness = rs.trace.best.front();
    rs.final_fitness = rs.trace.best.back();
    rs.curve = average_curve(rs.trace.final_population, cfg.best_only, ga.threads);
    rs.d_kl = scorer.distance(rs.curve);
    rs.auc = auc(rs.curve);
    rs.auc_error_pct = percent_error(rs.auc, summary.target_auc);
    rs.elapsed_seconds = rs.trace.elapsed_seconds;

    const fs::path run_dir = cfg.out_dir / ("run_" + std::to_string(r));
    io::write_trace_csv(run_dir / "trace.csv", rs.trace);
    io::write_population(run_dir / "population", rs.trace.final_population);
    io::write_curve_csv(run_dir / "curve.csv", rs.curve);
    if (log)
      *log << "run " << r << " seed " << rs.seed << " final fitness " << io::format_real(rs.final_fitness)
           << " AUC error " << io::format_real(rs.auc_error_pct) << "% in " << rs.elapsed_seconds << " s\n";
    summary.runs.push_back(std::move(rs));
  }

  std::vector<double> dkls;
  for (const auto& rs : summary.runs) dkls.push_back(rs.d_kl);
  std::tie(summary.d_kl_mean, summary.d_kl_std) = mean_std(dkls);

  {
    auto out = io::detail::open_out(cfg.out_dir / "auc.csv");
    out << "technique,auc,pct_error\n";
    out << "benchmark," << io::format_real(summary.target_auc) << ",0\n";
    if (cfg.baselines) {
      const std::pair<const char*, ResampleMethod> methods[] = {
          {"average", ResampleMethod::average},
          {"block_bootstrap", ResampleMethod::block_bootstrap},
          {"block_permutation", ResampleMethod::block_permutation}};
      for (const auto& [name, method] : methods) {
        const Group g = resample(target, {method, cfg.baseline_block_size, cfg.ga.rng_seed});
        const double a = auc(lcs_curve(g));
        out << name << ',' << io::format_real(a) << ',' << io::format_real(percent_error(a, summary.target_auc))
            << '\n';
      }
    }
    std::vector<double> aucs;
    for (std::size_t r = 0; r < summary.runs.size(); ++r) {
      const auto& rs = summary.runs[r];
      aucs.push_back(rs.auc);
      out << "genbot_run_" << r << ',' << io::format_real(rs.auc) << ',' << io::format_real(rs.auc_error_pct) << '\n';
    }
    const double mean_auc = mean_std(aucs).first;
    out << "genbot_mean," << io::format_real(mean_auc) << ','
        << io::format_real(percent_error(mean_auc, summary.target_auc)) << '\n';
  }
  {
    auto out = io::detail::open_out(cfg.out_dir / "dkl.csv");
    out << "run,seed,d_kl,initial_fitness,final_fitness\n";
    for (std::size_t r = 0; r < summary.runs.size(); ++r) {
      const auto& rs = summary.runs[r];
      out << r << ',' << rs.seed << ',' << io::format_real(rs.d_kl) << ',' << io::format_real(rs.initial_fitness)
          << ',' << io::format_real(rs.final_fitness) << '\n';
    }
    out << "mean,," << io::format_real(summary.d_kl_mean) << ",,\n";
    out << "std,," << io::format_real(summary.d_kl_std) << ",,\n";
  }
  return summary;
}

}  // namespace dnaevo
