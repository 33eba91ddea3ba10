#include "conespec/ih.hpp"

#include "conespec/errors.hpp"

namespace conespec {

namespace {

int at_or_zero(const std::vector<int>& v, int i) {
  return (i >= 0 && i < static_cast<int>(v.size())) ? v[i] : 0;
}

// Link cohomology truncated at the middle perversity cutoff.
int truncated_bettiL(const ConeMorseDatum& d, int i) {
  if (i < 0 || i >= d.nu) return i >= 0 && i <= 2 * d.nu ? 0 : 0;
  return at_or_zero(d.bettiL, i);
}

void validate_custom(const ConeMorseDatum& d) {
  int len = static_cast<int>(std::max(d.halflink.ranks.size(), d.halflink.lminus_betti.size()));
  for (int k = 0; k < len; ++k) {
    int r = at_or_zero(d.halflink.ranks, k);
    int tb = (k < d.nu) ? at_or_zero(d.bettiL, k) : 0;
    int lb = at_or_zero(d.halflink.lminus_betti, k);
    if (r < 0 || r > std::min(tb, lb))
      throw InvalidParameter("halflink ranks: r_" + std::to_string(k) + " = " + std::to_string(r) +
                             " violates 0 <= r <= min(truncated betti " + std::to_string(tb) +
                             ", halflink betti " + std::to_string(lb) + ")");
    if (lb < 0)
      throw InvalidParameter("halflink betti: negative entry in degree " + std::to_string(k));
  }
}

}  // namespace

int ih_cone(const std::vector<int>& bettiL, int nu, int degree) {
  if (nu < 0) throw InvalidParameter("ih_cone: nu must be >= 0");
  if (degree < 0 || degree > 2 * nu)
    throw InvalidParameter("ih_cone: degree " + std::to_string(degree) + " out of range 0.." +
                           std::to_string(2 * nu));
  if (nu == 0) return 0;
  if (static_cast<int>(bettiL.size()) != 2 * nu)
    throw InvalidParameter("ih_cone: link betti vector must have 2*nu entries");
  return degree < nu ? bettiL[degree] : 0;
}

int ih_cone_rel(const ConeMorseDatum& d, int degree) {
  if (degree < 0 || degree > 2 * d.nu)
    throw InvalidParameter("ih_cone_rel: degree out of range");
  switch (d.halflink.kind) {
    case Halflink::Empty:
      return ih_cone(d.bettiL, d.nu, degree);
    case Halflink::FullLink:
      if (degree <= d.nu) return 0;
      return at_or_zero(d.bettiL, degree - 1);
    case Halflink::Points: {
      if (d.nu != 1)
        throw InvalidParameter("ih_cone_rel: Points halflink is only defined for nu = 1");
      if (d.halflink.points_m < 1)
        throw InvalidParameter("ih_cone_rel: Points halflink needs m >= 1");
      return degree == 1 ? d.halflink.points_m - 1 : 0;
    }
    case Halflink::Custom: {
      validate_custom(d);
      // Long exact sequence of the cone of the restriction map:
      // dim = coker(r_{i-1}) + ker-part(r_i).
      int lb = at_or_zero(d.halflink.lminus_betti, degree - 1);
      int r_prev = at_or_zero(d.halflink.ranks, degree - 1);
      int tb = truncated_bettiL(d, degree);
      int r_here = at_or_zero(d.halflink.ranks, degree);
      return (lb - r_prev) + (tb - r_here);
    }
  }
  throw InvalidParameter("ih_cone_rel: unknown halflink kind");
}

std::vector<int> morse_contribution(const ConeMorseDatum& d) {
  std::vector<int> m(2 * d.nu + 1);
  for (int i = 0; i <= 2 * d.nu; ++i) m[i] = ih_cone_rel(d, i);
  return m;
}

}  // namespace conespec
