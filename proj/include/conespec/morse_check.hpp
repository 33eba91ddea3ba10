#pragma once

#include <vector>

namespace conespec {

struct MorseCounts {
  std::vector<int> smooth_counts;               // c_i(f restricted to the smooth part)
  std::vector<std::vector<int>> singular_contribs;  // one m_p vector per singular point
  std::vector<int> total;                       // c_i(f) = smooth + sum_p m_p^i
  std::vector<int> betti2;                      // L^2 Betti numbers b_i^(2)
};

// Componentwise assembly of the total Morse counts. betti2 is carried along
// unchanged (caller-supplied; may be filled in later).
MorseCounts total_counts(const std::vector<int>& smooth_counts,
                         const std::vector<std::vector<int>>& singular_contribs,
                         const std::vector<int>& betti2 = {});

struct InequalityVerdict {
  // margin[k] = sum_{i<=k} (-1)^{k-i} (c_i - b_i^(2)), k = 0 .. 2nu-1
  std::vector<long long> margins;
  long long euler_c = 0, euler_b = 0;
  bool euler_ok = false;
  bool pass = false;
  int first_failure_k = -1;
};

// Morse inequalities against the L^2 Betti numbers, with the Euler equality
// at the top degree.
InequalityVerdict check_inequalities(const MorseCounts& counts);

}  // namespace conespec
