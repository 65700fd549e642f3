#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "secbc/region.hpp"

#include <algorithm>
#include <set>

using namespace secbc;

namespace {

std::set<std::string> keys(const Region& r) {
  std::set<std::string> out;
  for (const auto& iq : r.inequalities) out.insert(iq.key());
  return out;
}

Inequality make(std::map<RateSymbol, Rat> lhs, std::map<std::pair<int, int>, Rat> coeffs,
                Rat constant = 0) {
  Inequality iq;
  iq.lhs = std::move(lhs);
  iq.rhs.coeffs = std::move(coeffs);
  iq.rhs.constant = std::move(constant);
  iq.normalize();
  return iq;
}

int expected_theorem1_count(int K) { return K + (K - 1) * (K - 2) / 2; }

}  // namespace

TEST_CASE("theorem1(3) is the four-bound system") {
  Region r = theorem1(3);
  CHECK(r.variables ==
        std::vector<RateSymbol>{RateSymbol::total(1), RateSymbol::total(2), RateSymbol::total(3)});
  std::set<std::string> expect;
  expect.insert(make({{RateSymbol::total(1), 1}}, {{{1, 1}, 1}}).key());
  expect.insert(make({{RateSymbol::total(2), 1}}, {{{2, 2}, 1}}).key());
  expect.insert(make({{RateSymbol::total(2), 1}, {RateSymbol::total(3), 1}},
                     {{{2, 2}, 1}, {{3, 3}, 1}})
                    .key());
  expect.insert(make({{RateSymbol::total(3), 1}},
                     {{{2, 2}, 1}, {{3, 3}, 1}, {{2, 1}, -1}, {{3, 1}, -1}})
                    .key());
  CHECK(keys(r) == expect);
}

TEST_CASE("theorem1: uniform atoms collapse the K=3 secrecy bound to zero") {
  Region r = theorem1(3);
  AtomTable t(3, AtomTable::Mode::Rational);
  for (int j = 1; j <= 3; ++j)
    for (int m = 1; m <= 3; ++m) t.at(j, m) = parse_rational("5/7");
  bool found = false;
  for (const auto& iq : r.inequalities)
    if (iq.lhs.size() == 1 && iq.lhs.count(RateSymbol::total(3))) {
      CHECK(iq.rhs.eval(t) == 0);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("theorem1 inequality counts, K = 2..8") {
  CHECK(theorem1(2).inequalities.size() == 2);  // secrecy family empty
  for (int K = 3; K <= 8; ++K) {
    // independent enumeration of the (l,k) secrecy pairs
    int pairs = 0;
    for (int l = 3; l <= K; ++l)
      for (int k = l; k <= K; ++k) ++pairs;
    CHECK(expected_theorem1_count(K) == K + pairs);
    CHECK(theorem1(K).inequalities.size() == static_cast<size_t>(expected_theorem1_count(K)));
  }
  CHECK_THROWS(theorem1(1));
}

TEST_CASE("pre_elimination(3): seven rows over six symbols") {
  Region r = pre_elimination(3);
  CHECK(r.inequalities.size() == 7);
  std::set<std::string> vars;
  for (const auto& v : r.variables) vars.insert(v.name());
  CHECK(vars == std::set<std::string>{"R1", "R2", "R3", "R22", "R31", "R32"});

  std::set<std::string> expect;
  auto R = RateSymbol::total;
  auto S = RateSymbol::split;
  expect.insert(make({{R(1), 1}}, {{{1, 1}, 1}}).key());
  expect.insert(make({{R(2), 1}, {S(2, 2), 1}}, {{{2, 2}, 1}}).key());
  expect.insert(make({{S(3, 1), 1}, {S(3, 2), 1}}, {{{3, 3}, 1}}).key());
  // l=3, j=2 (empty rate sum): R_{2,2} <= a[2,2] - a[2,1]
  expect.insert(make({{S(2, 2), 1}}, {{{2, 2}, 1}, {{2, 1}, -1}}).key());
  // l=3, full-sum row: R3 <= a22 + a33 - a21 - a31
  expect.insert(
      make({{R(3), 1}}, {{{2, 2}, 1}, {{3, 3}, 1}, {{2, 1}, -1}, {{3, 1}, -1}}).key());
  // sharing equality R3 = R22 + R31 + R32, two opposed rows
  expect.insert(make({{R(3), 1}, {S(2, 2), -1}, {S(3, 1), -1}, {S(3, 2), -1}}, {}).key());
  expect.insert(make({{R(3), -1}, {S(2, 2), 1}, {S(3, 1), 1}, {S(3, 2), 1}}, {}).key());
  CHECK(keys(r) == expect);
}

TEST_CASE("pre_elimination split-symbol counts") {
  for (int K = 3; K <= 6; ++K) {
    Region r = pre_elimination(K);
    int splits = 0;
    for (const auto& v : r.variables)
      if (!v.is_total()) ++splits;
    CHECK(splits == 1 + 2 * (K - 2));
    CHECK(static_cast<int>(r.variables.size()) == K + 1 + 2 * (K - 2));
  }
  CHECK_THROWS(pre_elimination(2));
}

TEST_CASE("inductive_structure counts and the empty-sum row") {
  CHECK(inductive_structure(3, 3).inequalities.size() == 5);  // eq. of five bounds
  CHECK_THROWS(inductive_structure(2, 4));
  CHECK_THROWS(inductive_structure(5, 4));

  // k=4: the l=k+1 instance is R_{4,2} <= a[4,4] - a[4,3]
  Region r = inductive_structure(4, 4);
  std::string want =
      make({{RateSymbol::split(4, 2), 1}}, {{{4, 4}, 1}, {{4, 3}, -1}}).key();
  CHECK(keys(r).count(want) == 1);
}

TEST_CASE("reference regions: prop-k3 rows") {
  Region r = reference_region(ReferenceKind::PropK3);
  std::set<std::string> expect;
  auto R = RateSymbol::total;
  expect.insert(make({{R(1), 1}}, {{{1, 1}, 1}}).key());
  expect.insert(make({{R(2), 1}}, {{{2, 2}, 1}}).key());
  expect.insert(make({{R(3), 1}}, {{{3, 3}, 1}}).key());
  expect.insert(
      make({{R(3), 1}}, {{{3, 3}, 1}, {{2, 2}, 1}, {{2, 1}, -1}, {{3, 1}, -1}}).key());
  CHECK(keys(r) == expect);
}

TEST_CASE("reference regions: naive-k4 has seven rows including R4 <= a[4,4]") {
  Region r = reference_region(ReferenceKind::NaiveK4);
  CHECK(r.inequalities.size() == 7);
  std::string want = make({{RateSymbol::total(4), 1}}, {{{4, 4}, 1}}).key();
  CHECK(keys(r).count(want) == 1);
}

TEST_CASE("prop-k4 under uniform atoms: direct substitution of the bound pairs") {
  Region r = reference_region(ReferenceKind::PropK4);
  AtomTable t(4, AtomTable::Mode::Rational);
  Rat c = parse_rational("3/4");
  for (int j = 1; j <= 4; ++j)
    for (int m = 1; m <= 4; ++m) t.at(j, m) = c;
  // The R3+R4 min expands into the pair 2c (plain sum of the two diagonal
  // atoms) and 0 (the min partner: 2c + c - 3c); the single R4 bound also
  // telescopes to 0 when all atoms coincide.
  std::set<Rat> pair_values;
  Rat best_single = -1;
  for (const auto& iq : r.inequalities) {
    if (iq.lhs.size() == 2 && iq.lhs.count(RateSymbol::total(3)) &&
        iq.lhs.count(RateSymbol::total(4)))
      pair_values.insert(iq.rhs.eval(t));
    if (iq.lhs.size() == 1 && iq.lhs.count(RateSymbol::total(4))) {
      Rat v = iq.rhs.eval(t);
      if (best_single < 0 || v < best_single) best_single = v;
    }
  }
  CHECK(pair_values == std::set<Rat>{0, 2 * c});
  CHECK(best_single == 0);
}

TEST_CASE("region generators reference only in-range atoms") {
  for (int K = 3; K <= 6; ++K) {
    AtomTable t = random_table(K, 1, 16);
    for (const auto& iq : theorem1(K).inequalities) (void)iq.rhs.eval(t);
    for (const auto& iq : pre_elimination(K).inequalities) (void)iq.rhs.eval(t);
    for (int k = 3; k <= K; ++k)
      for (const auto& iq : inductive_structure(k, K).inequalities) (void)iq.rhs.eval(t);
  }
}

TEST_CASE("normalization: gcd-canonical form and dedup") {
  Region r;
  r.variables = {RateSymbol::total(1)};
  Inequality a = make({{RateSymbol::total(1), 2}}, {{{1, 1}, 2}});
  Inequality b = make({{RateSymbol::total(1), 1}}, {{{1, 1}, 1}});
  CHECK(a.key() == b.key());
  r.add(a);
  r.add(b);
  CHECK(r.inequalities.size() == 1);
}

TEST_CASE("with_nonneg appends one row per variable") {
  Region off = theorem1(4, false);
  Region on = theorem1(4, true);
  CHECK(on.inequalities.size() == off.inequalities.size() + 4);
  Region pre_on = pre_elimination(4, true);
  Region pre_off = pre_elimination(4, false);
  CHECK(pre_on.inequalities.size() == pre_off.inequalities.size() + pre_on.variables.size());
}

TEST_CASE("region JSON shape") {
  std::string j = theorem1(3).to_json();
  CHECK(j.find("\"label\"") != std::string::npos);
  CHECK(j.find("\"variables\"") != std::string::npos);
  CHECK(j.find("\"inequalities\"") != std::string::npos);
  CHECK(j.find("\"R1\"") != std::string::npos);
  CHECK(j.find("\"1,1\"") != std::string::npos);
}

TEST_CASE("reference_kind_from_string") {
  CHECK(reference_kind_from_string("prop-k3") == ReferenceKind::PropK3);
  CHECK(reference_kind_from_string("prop-k4") == ReferenceKind::PropK4);
  CHECK(reference_kind_from_string("naive-k4") == ReferenceKind::NaiveK4);
  CHECK_THROWS(reference_kind_from_string("nope"));
}
