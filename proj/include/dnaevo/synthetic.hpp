#pragma once

// Synthetic "human-like" groups from a sticky Markov source.

#include <cstddef>
#include <string>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/rng.hpp"

namespace dnaevo {

/// With probability `stickiness` the previous base repeats; otherwise the next
/// base is drawn from `mix`. `mix` is therefore the stationary distribution.
struct MarkovSource {
  std::string bases = "ACT";
  std::vector<double> mix{0.7, 0.15, 0.15};
  double stickiness = 0.8;

  void validate() const {
    if (bases.empty() || bases.size() != mix.size()) fail_config("markov source needs one weight per base");
    double total = 0.0;
    for (double w : mix) {
      if (w < 0.0) fail_config("negative base weight");
      total += w;
    }
    if (!(total > 0.0)) fail_config("base weights sum to zero");
    if (!(stickiness >= 0.0 && stickiness < 1.0)) fail_config("stickiness must lie in [0, 1)");
  }

  char draw_base(Rng& rng) const {
    double total = 0.0;
    for (double w : mix) total += w;
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i + 1 < mix.size(); ++i) {
      if (u < mix[i]) return bases[i];
      u -= mix[i];
    }
    return bases.back();
  }

  DnaSequence sequence(std::size_t len, Rng& rng) const {
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      if (i > 0 && rng.uniform() < stickiness)
        s.push_back(s.back());
      else
        s.push_back(draw_base(rng));
    }
    return DnaSequence(std::move(s));
  }

  Group group(std::size_t members, std::size_t len, Rng& rng) const {
    validate();
    Group g;
    g.label = "markov";
    g.members.reserve(members);
    for (std::size_t i = 0; i < members; ++i) g.members.push_back(sequence(len, rng));
    return g;
  }
};

}  // namespace dnaevo
