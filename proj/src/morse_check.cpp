#include "conespec/morse_check.hpp"

#include <string>

#include "conespec/errors.hpp"

namespace conespec {

MorseCounts total_counts(const std::vector<int>& smooth_counts,
                         const std::vector<std::vector<int>>& singular_contribs,
                         const std::vector<int>& betti2) {
  MorseCounts mc;
  mc.smooth_counts = smooth_counts;
  mc.singular_contribs = singular_contribs;
  mc.betti2 = betti2;
  mc.total = smooth_counts;
  for (const auto& contrib : singular_contribs) {
    if (contrib.size() != smooth_counts.size())
      throw InvalidParameter("total_counts: contribution length " +
                             std::to_string(contrib.size()) + " != " +
                             std::to_string(smooth_counts.size()));
    for (size_t i = 0; i < contrib.size(); ++i) mc.total[i] += contrib[i];
  }
  if (!betti2.empty() && betti2.size() != smooth_counts.size())
    throw InvalidParameter("total_counts: betti2 length mismatch");
  return mc;
}

InequalityVerdict check_inequalities(const MorseCounts& counts) {
  if (counts.total.size() != counts.betti2.size() || counts.total.empty())
    throw InvalidParameter("check_inequalities: counts and betti2 must have equal nonzero length");
  int top = static_cast<int>(counts.total.size()) - 1;  // = 2 nu

  InequalityVerdict v;
  v.margins.resize(top);
  for (int k = 0; k < top; ++k) {
    long long s = 0;
    for (int i = 0; i <= k; ++i) {
      long long sign = ((k - i) % 2 == 0) ? 1 : -1;
      s += sign * (static_cast<long long>(counts.total[i]) - counts.betti2[i]);
    }
    v.margins[k] = s;
    if (s < 0 && v.first_failure_k < 0) v.first_failure_k = k;
  }
  for (int i = 0; i <= top; ++i) {
    long long sign = (i % 2 == 0) ? 1 : -1;
    v.euler_c += sign * counts.total[i];
    v.euler_b += sign * counts.betti2[i];
  }
  v.euler_ok = v.euler_c == v.euler_b;
  v.pass = v.euler_ok && v.first_failure_k < 0;
  return v;
}

}  // namespace conespec
