// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any gated criterion fails. Criterion 10 is report-only.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dnaevo.hpp"

namespace {

using namespace dnaevo;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Group random_group(Rng& rng) {
  Group g;
  const std::size_t m = 2 + rng.index(5);
  for (std::size_t i = 0; i < m; ++i) {
    std::string s(5 + rng.index(26), ' ');
    for (char& c : s) c = "ACT"[rng.index(3)];
    g.members.emplace_back(std::move(s));
  }
  return g;
}

void criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t mismatches = 0, bad_witnesses = 0;
  const int groups = 250;
  for (int n = 0; n < groups; ++n) {
    const Group g = random_group(rng);
    const LcsCurve fast = lcs_curve(g, true);
    const LcsCurve slow = lcs_curve_bruteforce(g);
    if (fast.lengths != slow.lengths) ++mismatches;
    for (const LcsCurve* c : {&fast, &slow})
      for (std::size_t k = 2; k <= g.size(); ++k) {
        const auto& w = c->witness(k);
        std::size_t holders = 0;
        for (const auto& m : g.members) holders += m.view().find(w.substring) != std::string_view::npos;
        if (holders < k || w.substring.size() != c->at(k)) ++bad_witnesses;
      }
  }
  const double secs = seconds_since(t0);
  verdict(1, mismatches == 0 && bad_witnesses == 0 && secs < 10.0,
          std::to_string(groups) + " groups, " + std::to_string(mismatches) + " curve mismatches, " +
              std::to_string(bad_witnesses) + " invalid witnesses, " + fmt(secs) + " s");
}

void criterion_2() {
  const double a = auc(std::vector<double>{5, 3, 1});
  const double m2 = auc(std::vector<double>{7});
  Rng rng(7);
  int linear_failures = 0;
  for (int n = 0; n < 100; ++n) {
    std::vector<double> v(1 + rng.index(40));
    for (double& x : v) x = static_cast<double>(rng.index(2001));
    std::sort(v.rbegin(), v.rend());
    const double s = static_cast<double>(1 + rng.index(50));
    auto scaled = v;
    for (double& x : scaled) x *= s;
    linear_failures += auc(scaled) != s * auc(v);
  }
  verdict(2, a == 6.0 && m2 == 0.0 && linear_failures == 0,
          "auc[5,3,1]=" + fmt(a) + ", M=2 gives " + fmt(m2) + ", " + std::to_string(linear_failures) +
              " linearity failures over 100 curves");
}

void criterion_3() {
  Rng rng(11);
  double worst_asym = 0.0, min_value = 0.0, worst_self = 0.0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t len = 2 + rng.index(30);
    std::vector<double> a(len), b(len);
    for (std::size_t i = 0; i < len; ++i) {
      a[i] = rng.uniform() + 1e-6;
      b[i] = rng.uniform() + 1e-6;
    }
    const auto p = curve_to_distribution(a, 0.0), q = curve_to_distribution(b, 0.0);
    worst_asym = std::max(worst_asym, std::abs(kl_distance(p, q) - kl_distance(q, p)));
    min_value = std::min(min_value, kl_distance(p, q));
    worst_self = std::max(worst_self, kl_distance(p, p));
  }
  // Reference: 0.5*(0.5 ln(0.5/0.9) + 0.5 ln(0.5/0.1)) + 0.5*(0.9 ln(0.9/0.5) + 0.1 ln(0.1/0.5)).
  const double reference = 0.5 * (0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1)) +
                           0.5 * (0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5));
  const double script_value = 0.439444915467244;
  const double got = kl_distance(CurveDistribution{{0.5, 0.5}, 0.0}, CurveDistribution{{0.9, 0.1}, 0.0});
  const bool pass = worst_asym < 1e-12 && min_value >= 0.0 && worst_self == 0.0 &&
                    std::abs(got - script_value) < 1e-9 && std::abs(got - reference) < 1e-9;
  verdict(3, pass,
          "max asymmetry " + fmt(worst_asym) + ", min value " + fmt(min_value) + ", d(p,p) max " + fmt(worst_self) +
              ", reference " + io::format_real(got) + " vs " + io::format_real(script_value));
}

struct DeskRun {
  RunTrace trace;
  double auc_error = 0.0;
  double d_kl = 0.0;
};

GaConfig desk_config(std::uint64_t seed) {
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.max_gen = 2000;
  cfg.mut_prob = 0.0002;
  cfg.num_urco = 2;
  cfg.num_uco = 12;
  cfg.group_size = 20;
  cfg.seq_len = 200;
  cfg.rng_seed = seed;
  return cfg;
}

Group desk_target() {
  Rng rng(20);
  return MarkovSource{}.group(20, 200, rng);
}

std::vector<DeskRun> criterion_4(const Group& target) {
  const LcsCurve target_curve = lcs_curve(target);
  const double target_auc = auc(target_curve);
  std::vector<DeskRun> runs;
  std::vector<double> dkls;
  bool ratio_ok = true, auc_ok = true, time_ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GaConfig cfg = desk_config(seed);
    DeskRun run;
    run.trace = evolve(target, cfg);
    const auto curve = average_curve(run.trace.final_population);
    run.auc_error = percent_error(auc(curve), target_auc);
    run.d_kl = Fitness(target_curve, cfg.epsilon, cfg.normalization, cfg.seq_len).distance(curve);
    const double initial = run.trace.best.front(), final = run.trace.best.back();
    ratio_ok = ratio_ok && final <= 0.2 * initial;
    auc_ok = auc_ok && std::abs(run.auc_error) <= 25.0;
    time_ok = time_ok && run.trace.elapsed_seconds < 300.0;
    detail << "\n    seed " << seed << ": fitness " << fmt(initial) << " -> " << fmt(final) << ", AUC error "
           << fmt(run.auc_error) << "%, D_KL " << fmt(run.d_kl) << ", " << fmt(run.trace.elapsed_seconds) << " s";
    dkls.push_back(run.d_kl);
    runs.push_back(std::move(run));
  }
  const auto [mean, sd] = mean_std(dkls);
  detail << "\n    D_KL mean " << fmt(mean) << " std " << fmt(sd) << " (target AUC " << fmt(target_auc) << ")";
  verdict(4, ratio_ok && auc_ok && time_ok && sd < mean,
          std::string("final <= 0.2 x initial: ") + (ratio_ok ? "yes" : "no") +
              ", |AUC error| <= 25%: " + (auc_ok ? "yes" : "no") + ", < 5 min per run: " + (time_ok ? "yes" : "no") +
              ", std < mean: " + (sd < mean ? "yes" : "no") + detail.str());
  return runs;
}

void criterion_5(const std::vector<const RunTrace*>& traces) {
  std::size_t violations = 0, steps = 0;
  for (const auto* t : traces)
    for (std::size_t g = 1; g < t->best.size(); ++g, ++steps) violations += t->best[g] > t->best[g - 1];
  verdict(5, violations == 0,
          std::to_string(violations) + " increases over " + std::to_string(steps) + " generation steps in " +
              std::to_string(traces.size()) + " runs");
}

void criterion_6() {
  const double p = 0.0002;
  const std::size_t sweeps = 1000;
  const Group start = seed_group(20, 2000);
  const double n = 20.0 * 2000.0;
  Rng rng(66);
  std::size_t mutated = 0, from_a = 0, a_to_c = 0, ct_to_a = 0, exceptions = 0, sweeps_outside = 0;
  const double sweep_sigma = std::sqrt(n * p * (1 - p));
  for (std::size_t s = 0; s < sweeps; ++s) {
    Group g = start;
    const std::size_t changed = mutate_group(g, p, rng);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g[i].size(); ++j) {
        const char before = start[i][j], after = g[i][j];
        if (before == after) continue;
        ++seen;
        if (before == 'A') {
          ++from_a;
          if (after == 'C')
            ++a_to_c;
          else if (after != 'T')
            ++exceptions;
        } else if (after == 'A') {
          ++ct_to_a;
        } else {
          ++exceptions;
        }
      }
    if (seen != changed) ++exceptions;
    mutated += changed;
    if (std::abs(static_cast<double>(changed) - n * p) > 3 * sweep_sigma) ++sweeps_outside;
  }
  const double total_mean = static_cast<double>(sweeps) * n * p;
  const double total_sigma = std::sqrt(static_cast<double>(sweeps) * n * p * (1 - p));
  const double split_sigma = std::sqrt(static_cast<double>(from_a)) / 2.0;
  const bool count_ok = std::abs(static_cast<double>(mutated) - total_mean) <= 3 * total_sigma;
  const bool split_ok = std::abs(static_cast<double>(a_to_c) - static_cast<double>(from_a) / 2.0) <= 3 * split_sigma;
  verdict(6, count_ok && split_ok && exceptions == 0,
          "mutated " + std::to_string(mutated) + " (expected " + fmt(total_mean, 6) + " +- " + fmt(3 * total_sigma) +
              "), A-origin " + std::to_string(from_a) + " with " + std::to_string(a_to_c) + " to C, C/T-origin " +
              std::to_string(ct_to_a) + " all to A, " + std::to_string(exceptions) + " exceptions; " +
              std::to_string(sweeps_outside) + " single sweeps outside 3 sigma");
}

void criteria_7_8(const Group& humans, const DeskRun& run) {
  const auto& best = run.trace.final_population.individuals[run.trace.final_population.best_index()].group;
  Rng rng(77);
  const LabeledGroup evolved_mix = mix_groups(best, humans, rng);
  const auto fp_evolved = fingerprint_detect(evolved_mix);

  Rng bot_rng(78);
  const DnaSequence bot = MarkovSource{}.sequence(200, bot_rng);
  Group identical;
  identical.members.assign(20, bot);
  const LabeledGroup control_mix = mix_groups(identical, humans, rng);
  const auto fp_control = fingerprint_detect(control_mix);

  verdict(7, fp_evolved.f1 < 0.5 && fp_control.f1 >= 0.9,
          "fingerprint F1 on evolved mix " + fmt(fp_evolved.f1) + " (" + describe_flags(fp_evolved.flags) +
              "), on identical-bots control " + fmt(fp_control.f1));

  const Alphabet alphabet = Alphabet::standard();
  const double h_bots = mean_entropy(best, alphabet), h_humans = mean_entropy(humans, alphabet);
  const double threshold = (h_bots + h_humans) / 2.0;
  const auto en = entropy_detect(evolved_mix, threshold, alphabet);
  verdict(8, h_bots - h_humans >= 0.1 && en.f1 > fp_evolved.f1,
          "mean H_norm bots " + fmt(h_bots) + " humans " + fmt(h_humans) + ", entropy F1 " + fmt(en.f1) +
              " vs fingerprint F1 " + fmt(fp_evolved.f1));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DNAEVO_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_9(const Group& target, std::vector<RunTrace>& extra) {
  const fs::path dir = fs::temp_directory_path() / "dnaevo_acceptance_determinism";
  fs::remove_all(dir);
  io::write_group(dir / "target.txt", target);
  const std::string base = "target = target.txt\npop_size = 10\nmax_gen = 300\nruns = 2\nrng_seed = 9\n";
  const std::pair<const char*, int> variants[] = {{"serial_a", 1}, {"serial_b", 1}, {"parallel_a", 4}, {"parallel_b", 4}};
  int rc = 0;
  for (const auto& [name, threads] : variants) {
    std::ofstream(dir / (std::string(name) + ".cfg"))
        << base << "out_dir = " << name << "\nthreads = " << threads << "\nbaselines = false\n";
    rc |= run_cli("evolve --config \"" + (dir / (std::string(name) + ".cfg")).string() + "\"");
  }
  bool identical = rc == 0;
  std::size_t compared = 0;
  for (const char* run : {"run_0", "run_1"}) {
    const std::string ref = slurp(dir / "serial_a" / run / "trace.csv");
    identical = identical && !ref.empty();
    for (const auto& [name, threads] : variants) {
      identical = identical && slurp(dir / name / run / "trace.csv") == ref;
      ++compared;
    }
    // Re-read for the monotonicity audit.
    RunTrace t;
    std::istringstream rows(ref);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
      const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
      t.best.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    extra.push_back(std::move(t));
  }
  verdict(9, identical,
          std::to_string(compared) + " trace files from 4 CLI executions (threads 1 and 4) " +
              (identical ? "byte-identical" : "differ") + ", exit status " + std::to_string(rc));
}

void criterion_10() {
  const char* cfg = std::getenv("DNAEVO_DATASET_CONFIG");
  if (!cfg || !*cfg) {
    std::cout << "criterion 10: SKIP  report-only; set DNAEVO_DATASET_CONFIG to an evolve config over the public "
                 "dataset to run it"
              << std::endl;
    return;
  }
  const fs::path path(cfg);
  const auto summary = run_evolve_experiment(ExperimentConfig::from_key_values(io::read_key_values(path), path.parent_path()));
  std::vector<double> aucs;
  for (const auto& r : summary.runs) aucs.push_back(r.auc);
  const double err = percent_error(mean_std(aucs).first, summary.target_auc);
  std::cout << "criterion 10: REPORT  AUC error " << fmt(err) << "% (reference values: +2.98% single group, -21.98% mixed group)"
            << std::endl;
}

}  // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    const Group target = desk_target();
    const auto runs = criterion_4(target);
    criterion_6();
    criteria_7_8(target, runs.front());
    std::vector<RunTrace> cli_traces;
    criterion_9(target, cli_traces);
    std::vector<const RunTrace*> all;
    for (const auto& r : runs) all.push_back(&r.trace);
    for (const auto& t : cli_traces) all.push_back(&t);
    criterion_5(all);
    criterion_10();
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << std::endl;
    return 2;
  }
  std::cout << (failures == 0 ? "all gated criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
