#pragma once

// Suffix array by induced sorting (SA-IS) and the Kasai LCP array.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace dnaevo::detail {

/// Suffix array of `s`, whose symbols lie in [0, upper]. Linear time.
inline std::vector<std::int32_t> suffix_array(const std::vector<std::int32_t>& s, std::int32_t upper) {
  using idx = std::int32_t;
  const idx n = static_cast<idx>(s.size());
  if (n == 0) return {};
  if (n == 1) return {0};
  if (n == 2) return s[0] < s[1] ? std::vector<idx>{0, 1} : std::vector<idx>{1, 0};

  std::vector<idx> sa(n);
  // ls[i]: suffix i is S-type (smaller than suffix i+1).
  std::vector<char> ls(n, 0);
  for (idx i = n - 2; i >= 0; --i) ls[i] = s[i] == s[i + 1] ? ls[i + 1] : (s[i] < s[i + 1]);

  // Bucket starts: sum_l[c] for L-type suffixes of symbol c, sum_s[c] for S-type.
  std::vector<idx> sum_l(upper + 1, 0), sum_s(upper + 1, 0);
  for (idx i = 0; i < n; ++i) {
    if (!ls[i])
      ++sum_s[s[i]];
    else
      ++sum_l[s[i] + 1];
  }
  for (idx c = 0; c <= upper; ++c) {
    sum_s[c] += sum_l[c];
    if (c < upper) sum_l[c + 1] += sum_s[c];
  }

  std::vector<idx> buf(upper + 1);
  auto induce = [&](const std::vector<idx>& lms) {
    std::fill(sa.begin(), sa.end(), -1);
    std::copy(sum_s.begin(), sum_s.end(), buf.begin());
    for (idx d : lms)
      if (d != n) sa[buf[s[d]]++] = d;
    std::copy(sum_l.begin(), sum_l.end(), buf.begin());
    sa[buf[s[n - 1]]++] = n - 1;
    for (idx i = 0; i < n; ++i) {
      const idx v = sa[i];
      if (v >= 1 && !ls[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
    }
    std::copy(sum_l.begin(), sum_l.end(), buf.begin());
    for (idx i = n - 1; i >= 0; --i) {
      const idx v = sa[i];
      if (v >= 1 && ls[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
    }
  };

  std::vector<idx> lms_map(n + 1, -1);
  std::vector<idx> lms;
  for (idx i = 1; i < n; ++i)
    if (!ls[i - 1] && ls[i]) {
      lms_map[i] = static_cast<idx>(lms.size());
      lms.push_back(i);
    }
  const idx m = static_cast<idx>(lms.size());
  induce(lms);

  if (m > 0) {
    std::vector<idx> sorted_lms;
    sorted_lms.reserve(m);
    for (idx v : sa)
      if (lms_map[v] != -1) sorted_lms.push_back(v);

    // Name LMS substrings; equal substrings share a name.
    std::vector<idx> rec_s(m);
    idx rec_upper = 0;
    rec_s[lms_map[sorted_lms[0]]] = 0;
    for (idx i = 1; i < m; ++i) {
      idx l = sorted_lms[i - 1], r = sorted_lms[i];
      const idx end_l = lms_map[l] + 1 < m ? lms[lms_map[l] + 1] : n;
      const idx end_r = lms_map[r] + 1 < m ? lms[lms_map[r] + 1] : n;
      bool same = true;
      if (end_l - l != end_r - r) {
        same = false;
      } else {
        while (l < end_l && s[l] == s[r]) {
          ++l;
          ++r;
        }
        if (l == n || s[l] != s[r]) same = false;
      }
      if (!same) ++rec_upper;
      rec_s[lms_map[sorted_lms[i]]] = rec_upper;
    }

    const auto rec_sa = suffix_array(rec_s, rec_upper);
    for (idx i = 0; i < m; ++i) sorted_lms[i] = lms[rec_sa[i]];
    induce(sorted_lms);
  }
  return sa;
}

/// lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i]; lcp[0] = 0.
inline std::vector<std::int32_t> lcp_array(const std::vector<std::int32_t>& s, const std::vector<std::int32_t>& sa) {
  using idx = std::int32_t;
  const idx n = static_cast<idx>(s.size());
  std::vector<idx> rank(n), lcp(n, 0);
  for (idx i = 0; i < n; ++i) rank[sa[i]] = i;
  idx h = 0;
  for (idx i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const idx j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = h;
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace dnaevo::detail
