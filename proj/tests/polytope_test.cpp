#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "secbc/polytope.hpp"

using namespace secbc;

namespace {

// Small helper: a system over n anonymous variables.
InstantiatedSystem make_system(int n, std::vector<std::pair<std::vector<Rat>, Rat>> rows) {
  InstantiatedSystem sys;
  for (int i = 1; i <= n; ++i) sys.variables.push_back(RateSymbol::total(i));
  for (auto& [coeffs, bound] : rows) sys.add_row(std::move(coeffs), std::move(bound));
  return sys;
}

}  // namespace

TEST_CASE("implies: {x <= 1} entails x <= 2 with a verifiable certificate") {
  InstantiatedSystem sys = make_system(1, {{{1}, 1}});
  ImplyResult r = implies(sys, {1}, 2);
  CHECK(r.kind == ImplyResult::Kind::Yes);
  CHECK(verify_certificate(sys, {1}, 2, r.certificate));
}

TEST_CASE("implies: box does not entail the diagonal, witness returned") {
  InstantiatedSystem sys = make_system(2, {{{1, 0}, 1}, {{0, 1}, 1}});
  ImplyResult r = implies(sys, {1, 1}, 1);
  CHECK(r.kind == ImplyResult::Kind::No);
  REQUIRE(r.witness.size() == 2);
  CHECK(sys.satisfies(r.witness));
  CHECK(r.witness[0] + r.witness[1] > 1);
}

TEST_CASE("implies: infeasible premise reported as vacuous") {
  InstantiatedSystem sys = make_system(1, {{{1}, 0}, {{-1}, -1}});  // x <= 0, x >= 1
  ImplyResult r = implies(sys, {1}, -100);
  CHECK(r.kind == ImplyResult::Kind::VacuousYes);
}

TEST_CASE("implies: unbounded directions handled with finite witnesses") {
  // x - y <= 0 does not entail x <= 5; x is unbounded along the ray (1,1).
  InstantiatedSystem sys = make_system(2, {{{1, -1}, 0}});
  ImplyResult r = implies(sys, {1, 0}, 5);
  CHECK(r.kind == ImplyResult::Kind::No);
  CHECK(sys.satisfies(r.witness));
  CHECK(r.witness[0] > 5);
}

TEST_CASE("closed-form K=3 region entails every full-region row (per table)") {
  // the closed-form polytope sits inside the full region's polytope, so
  // each full-region row is implied by the closed-form system
  for (std::uint64_t s = 0; s < 10; ++s) {
    AtomTable t = random_table(3, 100 + s, 64);
    InstantiatedSystem full = InstantiatedSystem::instantiate(theorem1(3), t);
    InstantiatedSystem ref =
        InstantiatedSystem::instantiate(reference_region(ReferenceKind::PropK3), t);
    for (size_t i = 0; i < full.rows.size(); ++i) {
      ImplyResult r = implies(ref, full.rows[i], full.bounds[i]);
      CHECK(r.kind == ImplyResult::Kind::Yes);
      CHECK(verify_certificate(ref, full.rows[i], full.bounds[i], r.certificate));
    }
  }
}

TEST_CASE("equal: reflexive, scale-invariant, and symmetric") {
  InstantiatedSystem a = make_system(1, {{{1}, 1}});
  CHECK(equal(a, a).holds);
  InstantiatedSystem b = make_system(1, {{{2}, 2}});
  CHECK(equal(a, b).holds);
  CHECK(equal(b, a).holds);

  InstantiatedSystem c = make_system(1, {{{1}, 2}});
  CompareResult r = equal(a, c);
  CHECK(!r.holds);
  CHECK(!equal(c, a).holds);
  REQUIRE(r.witness.size() == 1);
}

TEST_CASE("contains: direction and witness semantics") {
  InstantiatedSystem big = make_system(1, {{{1}, 2}});
  InstantiatedSystem small = make_system(1, {{{1}, 1}});
  CHECK(contains(big, small).holds);       // {x<=1} subset of {x<=2}
  CompareResult r = contains(small, big);  // {x<=2} not subset of {x<=1}
  CHECK(!r.holds);
  CHECK(big.satisfies(r.witness));
  CHECK(!small.satisfies(r.witness));
}

TEST_CASE("reverse containment fails with witness at a gapped table") {
  // a[2,2] > a[2,1] + a[3,1] leaves the full region strictly larger.
  AtomTable t(3, AtomTable::Mode::Rational);
  t.at(1, 1) = 1;
  t.at(1, 2) = 1;
  t.at(1, 3) = 1;
  t.at(2, 1) = parse_rational("1/8");
  t.at(2, 2) = 1;
  t.at(2, 3) = 1;
  t.at(3, 1) = parse_rational("1/8");
  t.at(3, 2) = parse_rational("1/2");
  t.at(3, 3) = parse_rational("1/2");
  REQUIRE(!t.validate());
  InstantiatedSystem full = InstantiatedSystem::instantiate(theorem1(3), t);
  InstantiatedSystem ref =
      InstantiatedSystem::instantiate(reference_region(ReferenceKind::PropK3), t);
  CHECK(contains(full, ref).holds);
  CompareResult r = contains(ref, full);
  CHECK(!r.holds);
  CHECK(full.satisfies(r.witness));
  CHECK(!ref.satisfies(r.witness));
}

TEST_CASE("maximize: optimum, unboundedness, infeasibility") {
  InstantiatedSystem box = make_system(2, {{{1, 0}, 1}, {{0, 1}, 2}, {{-1, 0}, 0}, {{0, -1}, 0}});
  LpResult r = maximize(box, {1, 1});
  CHECK(r.status == LpResult::Status::Optimal);
  CHECK(r.value == 3);
  CHECK(box.satisfies(r.point));

  InstantiatedSystem half = make_system(2, {{{1, -1}, 0}});
  LpResult u = maximize(half, {1, 0});
  CHECK(u.status == LpResult::Status::Unbounded);
  CHECK(half.satisfies(u.point));
  // the ray keeps improving the objective and stays feasible
  REQUIRE(u.ray.size() == 2);
  CHECK(u.ray[0] > 0);
  std::vector<Rat> far = u.point;
  for (int i = 0; i < 2; ++i) far[i] += 100 * u.ray[i];
  CHECK(half.satisfies(far));

  InstantiatedSystem none = make_system(1, {{{1}, 0}, {{-1}, -1}});
  CHECK(maximize(none, {1}).status == LpResult::Status::Infeasible);
  CHECK(!feasible_point(none).has_value());
}

TEST_CASE("maximize duals certify the optimum") {
  InstantiatedSystem box = make_system(2, {{{2, 1}, 4}, {{1, 3}, 6}, {{-1, 0}, 0}, {{0, -1}, 0}});
  LpResult r = maximize(box, {1, 1});
  REQUIRE(r.status == LpResult::Status::Optimal);
  // lambda >= 0, lambda^T A = c, lambda^T b = value
  REQUIRE(r.duals.size() == box.rows.size());
  Rat lb = 0;
  std::vector<Rat> combo(2, 0);
  for (size_t i = 0; i < box.rows.size(); ++i) {
    CHECK(r.duals[i] >= 0);
    lb += r.duals[i] * box.bounds[i];
    for (int v = 0; v < 2; ++v) combo[v] += r.duals[i] * box.rows[i][v];
  }
  CHECK(combo == std::vector<Rat>{1, 1});
  CHECK(lb == r.value);
}

TEST_CASE("verify_certificate rejects bogus multipliers") {
  InstantiatedSystem sys = make_system(1, {{{1}, 1}});
  FarkasCertificate bad;
  bad.multipliers[0] = parse_rational("1/2");  // gives x/2 <= 1/2, not x <= 2 dominance
  CHECK(!verify_certificate(sys, {1}, parse_rational("1/4"), bad));
}

TEST_CASE("contains is transitive on sampled instantiated regions") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    AtomTable t = random_table(4, 300 + s, 32);
    InstantiatedSystem a = InstantiatedSystem::instantiate(theorem1(4), t);
    InstantiatedSystem b =
        InstantiatedSystem::instantiate(reference_region(ReferenceKind::PropK4), t);
    InstantiatedSystem c =
        InstantiatedSystem::instantiate(reference_region(ReferenceKind::NaiveK4), t);
    CHECK(contains(a, b).holds);
    CHECK(contains(b, c).holds);
    CHECK(contains(a, c).holds);
  }
}

TEST_CASE("satisfies: exact boundary inclusion") {
  InstantiatedSystem sys = make_system(1, {{{1}, parse_rational("1/3")}});
  CHECK(sys.satisfies({parse_rational("1/3")}));
  CHECK(!sys.satisfies({parse_rational("34/100")}));
}
