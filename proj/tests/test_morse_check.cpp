#include "conespec/morse_check.hpp"

#include <random>

#include "conespec/errors.hpp"
#include "conespec/ih.hpp"
#include "doctest.h"

using namespace conespec;

TEST_CASE("total counts assembly") {
  SUBCASE("spindle") {
    MorseCounts mc = total_counts({0, 0, 1}, {{1, 0, 0}}, {1, 0, 1});
    CHECK(mc.total == std::vector<int>{1, 0, 1});
  }
  SUBCASE("suspension of a circle, f = height") {
    MorseCounts mc = total_counts({0, 0, 0}, {{1, 0, 0}, {0, 0, 1}}, {1, 0, 1});
    CHECK(mc.total == std::vector<int>{1, 0, 1});
  }
  SUBCASE("no singular points") {
    MorseCounts mc = total_counts({1, 2, 1}, {}, {1, 0, 1});
    CHECK(mc.total == std::vector<int>{1, 2, 1});
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(total_counts({0, 0, 1}, {{1, 0}}, {}), InvalidParameter);
  }
  SUBCASE("contributions straight from the ih calculator") {
    ConeMorseDatum bottom{1, {1, 1}, Halflink::empty()};
    ConeMorseDatum top{1, {1, 1}, Halflink::full_link()};
    MorseCounts mc = total_counts({0, 0, 0}, {morse_contribution(bottom), morse_contribution(top)},
                                  {1, 0, 1});
    CHECK(mc.total == std::vector<int>{1, 0, 1});
  }
}

TEST_CASE("morse inequalities verdicts") {
  SUBCASE("exact equality case") {
    auto v = check_inequalities(total_counts({1, 0, 1}, {}, {1, 0, 1}));
    CHECK(v.pass);
    CHECK(v.margins == std::vector<long long>{0, 0});
    CHECK(v.euler_c == 2);
    CHECK(v.euler_b == 2);
  }
  SUBCASE("slack but passing") {
    auto v = check_inequalities(total_counts({2, 1, 1}, {}, {1, 0, 1}));
    CHECK(v.pass);
    CHECK(v.margins == std::vector<long long>{1, 0});
    CHECK(v.euler_ok);
  }
  SUBCASE("failure identified at k = 0") {
    auto v = check_inequalities(total_counts({0, 0, 1}, {}, {1, 0, 1}));
    CHECK(!v.pass);
    CHECK(v.first_failure_k == 0);
    CHECK(v.margins[0] == -1);
  }
  SUBCASE("euler mismatch fails even with nonnegative margins") {
    auto v = check_inequalities(total_counts({2, 0, 1}, {}, {1, 0, 1}));
    CHECK(v.margins[0] == 1);
    CHECK(v.margins[1] == -1);  // alternating sum flips the slack sign at odd k
    CHECK(!v.euler_ok);
    CHECK(!v.pass);
  }
}

TEST_CASE("adjacent cancelling pairs preserve verdict structure") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> d(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    int top = 2 * (1 + trial % 2);  // 2nu = 2 or 4
    std::vector<int> c(top + 1), b(top + 1);
    for (int i = 0; i <= top; ++i) {
      c[i] = d(rng);
      b[i] = d(rng);
    }
    auto base = check_inequalities(total_counts(c, {}, b));
    std::uniform_int_distribution<int> pos(0, top - 1);
    int i = pos(rng);
    auto c2 = c;
    c2[i] += 1;
    c2[i + 1] += 1;
    auto bumped = check_inequalities(total_counts(c2, {}, b));
    // Euler equality is preserved...
    CHECK(bumped.euler_c == base.euler_c);
    // ...and no passing inequality at k >= i+1 can fail after the bump.
    for (int k = i + 1; k < top; ++k) {
      if (base.margins[k] >= 0) CHECK(bumped.margins[k] >= 0);
    }
  }
}
