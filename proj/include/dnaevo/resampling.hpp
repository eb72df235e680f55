#pragma once

// Baseline sequence synthesis by resampling real sequences.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/rng.hpp"

namespace dnaevo {

enum class ResampleMethod { average, block_permutation, block_bootstrap };

inline ResampleMethod parse_resample_method(std::string_view text) {
  if (text == "average") return ResampleMethod::average;
  if (text == "block_permutation" || text == "permutation") return ResampleMethod::block_permutation;
  if (text == "block_bootstrap" || text == "bootstrap") return ResampleMethod::block_bootstrap;
  fail_config("unknown resampling method '" + std::string(text) + "'");
}

struct ResampleSpec {
  ResampleMethod method = ResampleMethod::block_permutation;
  std::size_t block_size = 5;
  std::uint64_t rng_seed = 1;
};

/// i.i.d. draws from the byte distribution pooled over all members. Each
/// output member keeps its input length.
inline Group resample_average(const Group& g, Rng& rng) {
  if (g.members.empty()) fail_input("cannot resample an empty group");
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;
  for (const auto& m : g.members)
    for (char c : m) {
      ++counts[static_cast<unsigned char>(c)];
      ++total;
    }
  if (total == 0) fail_input("cannot resample a group of empty sequences");

  std::vector<unsigned char> symbols;
  std::vector<std::uint64_t> cumulative;
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (counts[b] > 0) {
      symbols.push_back(static_cast<unsigned char>(b));
      cumulative.push_back((cumulative.empty() ? 0 : cumulative.back()) + counts[b]);
    }

  Group out;
  out.label = "average";
  out.members.reserve(g.size());
  for (const auto& m : g.members) {
    std::string s(m.size(), '\0');
    for (char& c : s) {
      const auto u = rng.uniform_int(0, total - 1);
      const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
      c = static_cast<char>(symbols[static_cast<std::size_t>(pos)]);
    }
    out.members.emplace_back(std::move(s));
  }
  return out;
}

/// Concatenates the consecutive blocks of `s` in the given order. `order`
/// must be a permutation of the block indices; the final block may be short.
inline DnaSequence permute_blocks(const DnaSequence& s, std::size_t block_size, const std::vector<std::size_t>& order) {
  if (block_size == 0) fail_config("block size must be at least 1");
  const std::size_t blocks = (s.size() + block_size - 1) / block_size;
  if (order.size() != blocks) fail_input("block order has the wrong length");
  std::string out;
  out.reserve(s.size());
  for (std::size_t b : order) {
    if (b >= blocks) fail_input("block index out of range");
    out.append(s.view().substr(b * block_size, block_size));
  }
  return DnaSequence(std::move(out));
}

inline DnaSequence resample_block_permutation(const DnaSequence& s, std::size_t block_size, Rng& rng) {
  if (block_size == 0) fail_config("block size must be at least 1");
  std::vector<std::size_t> order((s.size() + block_size - 1) / block_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());
  return permute_blocks(s, block_size, order);
}

/// Blocks drawn with replacement from the aligned full-size blocks of `s`
/// and concatenated, truncating the last one to |s|. A ragged tail block is
/// never drawn (it would break block alignment), unless `s` is shorter than
/// one block.
inline DnaSequence resample_block_bootstrap(const DnaSequence& s, std::size_t block_size, Rng& rng) {
  if (block_size == 0) fail_config("block size must be at least 1");
  if (s.size() <= block_size) return s;
  const std::size_t full = s.size() / block_size;
  std::string out;
  out.reserve(s.size() + block_size);
  while (out.size() < s.size()) out.append(s.view().substr(rng.index(full) * block_size, block_size));
  out.resize(s.size());
  return DnaSequence(std::move(out));
}

/// Applies `spec` to every member. Member i uses its own stream derived from
/// the seed, so members are independent of each other's lengths.
inline Group resample(const Group& g, const ResampleSpec& spec) {
  if (g.members.empty()) fail_input("cannot resample an empty group");
  Rng root(spec.rng_seed);
  if (spec.method == ResampleMethod::average) {
    Rng rng = root.fork(0);
    return resample_average(g, rng);
  }
  Group out;
  out.label = spec.method == ResampleMethod::block_permutation ? "block_permutation" : "block_bootstrap";
  out.members.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Rng rng = root.fork(i);
    out.members.push_back(spec.method == ResampleMethod::block_permutation
                              ? resample_block_permutation(g[i], spec.block_size, rng)
                              : resample_block_bootstrap(g[i], spec.block_size, rng));
  }
  return out;
}

}  // namespace dnaevo
